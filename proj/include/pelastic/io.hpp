#pragma once

// JSON, CSV and SVG serialization.
//
// Curve JSON:
//   {"format":"angle","L":<number>,"turning":<int>,"theta":[...]}
//   {"format":"points","points":[[x,y],...]}
// Integrand JSON:
//   {"kind":"power","p":2} | {"kind":"positive_power","p":2}
//   {"kind":"tabulated","t":[...],"f":[...]}
// Doubles are written with 17 significant digits.

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pelastic/bounds.hpp"
#include "pelastic/curve.hpp"
#include "pelastic/energy.hpp"
#include "pelastic/optimize.hpp"
#include "pelastic/surgery.hpp"

namespace pelastic {

using Json = nlohmann::json;

Json to_json(const AngleCurve &curve);
Json to_json(const PointCurve &curve);
Json to_json(const CurvatureIntegrand &f);
Json to_json(const Vec2 &v);
Json to_json(const CurveMetrics &m);
Json to_json(const EnergyReport &r);
Json to_json(const Chord &c);
Json to_json(const SurgeryReport &r);
Json to_json(const PerturbationEstimates &e);
Json to_json(const NotchRemoval &r);
Json to_json(const Reduction &r);
Json to_json(const BoundCheck &c);
// history is written separately as CSV
Json to_json(const OptimizationResult &r);

// Angle curves are taken as is; point curves are resampled to n samples.
// Throws std::invalid_argument on schema violations.
AngleCurve angle_curve_from_json(const Json &j, std::size_t n);
PointCurve point_curve_from_json(const Json &j);
CurvatureIntegrand integrand_from_json(const Json &j);

// Throws std::runtime_error naming the file when it cannot be read or parsed.
Json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const Json &j);

// outer,inner,f_p,augmented,area_defect,closure_defect,grad_norm,q_p
void write_history_csv(std::ostream &os, std::span<const IterationRecord> history);

struct SvgPath {
    std::vector<Vec2> points;
    std::string stroke;
};

// Closed paths as solid strokes, segments as dashed overlays, viewport fitted
// to everything drawn and padded by 10% on each side.
std::string render_svg(std::span<const SvgPath> paths,
                       std::span<const std::pair<Vec2, Vec2>> dashed = {});

}  // namespace pelastic
