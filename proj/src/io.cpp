#include "pelastic/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pelastic {

Json to_json(const AngleCurve &curve) {
    return {{"format", "angle"},
            {"L", curve.length()},
            {"turning", curve.turning()},
            {"theta", std::vector<double>(curve.theta().begin(), curve.theta().end())}};
}

Json to_json(const PointCurve &curve) {
    Json pts = Json::array();
    for (const Vec2 &v : curve.points()) pts.push_back({v.x, v.y});
    return {{"format", "points"}, {"points", pts}};
}

Json to_json(const CurvatureIntegrand &f) {
    switch (f.kind()) {
    case CurvatureIntegrand::Kind::power:
        return {{"kind", "power"}, {"p", f.exponent()}};
    case CurvatureIntegrand::Kind::positive_power:
        return {{"kind", "positive_power"}, {"p", f.exponent()}};
    case CurvatureIntegrand::Kind::tabulated:
        return {{"kind", "tabulated"},
                {"t", std::vector<double>(f.table_t().begin(), f.table_t().end())},
                {"f", std::vector<double>(f.table_f().begin(), f.table_f().end())}};
    }
    return {};
}

Json to_json(const Vec2 &v) { return Json::array({v.x, v.y}); }

Json to_json(const CurveMetrics &m) {
    return {{"length", m.length}, {"area", m.area},         {"width", m.width},
            {"diameter", m.diameter}, {"convex", m.convex}, {"centroid", to_json(m.centroid)}};
}

Json to_json(const EnergyReport &r) {
    return {{"E_f", r.e_f}, {"F_p", r.f_p}, {"F_p_plus", r.f_p_plus}, {"Q_p", r.q_p}, {"Q_p_plus", r.q_p_plus}};
}

Json to_json(const Chord &c) {
    return {{"s1", c.s1},
            {"s2", c.s2},
            {"p1", to_json(c.p1)},
            {"p2", to_json(c.p2)},
            {"midpoint", to_json(c.midpoint)},
            {"tangent_gap", c.tangent_gap},
            {"area_split", {c.area1, c.area2}}};
}

Json to_json(const SurgeryReport &r) {
    Json chords = Json::array();
    for (const Chord &c : r.chords) chords.push_back(to_json(c));
    Json segments = Json::array();
    for (const auto &[a, b] : r.segments) segments.push_back({to_json(a), to_json(b)});
    return {{"construction", r.construction},
            {"input", to_json(r.input)},
            {"output", to_json(r.output)},
            {"energy_before", r.energy_before},
            {"energy_after", r.energy_after},
            {"area_before", r.area_before},
            {"area_after", r.area_after},
            {"chords", chords},
            {"segments", segments}};
}

Json to_json(const PerturbationEstimates &e) {
    return {{"eps", e.eps},
            {"delta", e.delta},
            {"dE_measured", e.dE_measured},
            {"dE_bound", e.dE_bound},
            {"dA_measured", e.dA_measured},
            {"plateau_length", e.plateau_length}};
}

Json to_json(const NotchRemoval &r) {
    Json j = to_json(r.report);
    j["segment_length"] = r.segment_length;
    j["input_width"] = r.input_width;
    j["area_drop"] = r.area_drop;
    return j;
}

Json to_json(const Reduction &r) {
    Json reports = Json::array();
    for (const SurgeryReport &s : r.reports) reports.push_back(to_json(s));
    const ReductionComparison &c = r.comparison;
    return {{"reports", reports},
            {"comparison",
             {{"E_input", c.e_input},
              {"mean_E_halves", c.mean_e_halves},
              {"mean_E_discs", c.mean_e_discs},
              {"E_disc", c.e_disc},
              {"area1", c.area1},
              {"area2", c.area2},
              {"disc_radius", c.disc_radius}}}};
}

Json to_json(const BoundCheck &c) {
    return {{"name", c.name},           {"p", c.p},         {"curve_id", c.curve_id},
            {"lhs", c.lhs},             {"rhs", c.rhs},     {"margin", c.margin},
            {"tolerance", c.tolerance}, {"passed", c.passed}, {"diagnostic_only", c.diagnostic_only}};
}

Json to_json(const OptimizationResult &r) {
    return {{"curve", to_json(r.curve)},
            {"el_alpha", r.el_alpha},
            {"el_residual", r.el_residual},
            {"circularity", r.circularity},
            {"Q_p", r.q_p},
            {"F_p", r.f_p},
            {"area_defect", r.area_defect},
            {"closure_defect", r.closure_defect},
            {"grad_norm", r.grad_norm},
            {"outer_iterations", r.outer_iterations},
            {"inner_iterations", r.inner_iterations},
            {"converged", r.converged},
            {"left_simple_class", r.left_simple_class},
            {"convex", r.convex},
            {"message", r.message}};
}

namespace {

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<double> numbers(const Json &j, const char *key) {
    const Json &a = field(j, key);
    if (!a.is_array()) throw std::invalid_argument(std::string("field \"") + key + "\" must be an array");
    std::vector<double> out;
    out.reserve(a.size());
    for (const Json &v : a) {
        if (!v.is_number()) throw std::invalid_argument(std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string format_of(const Json &j) {
    const Json &f = field(j, "format");
    if (!f.is_string()) throw std::invalid_argument("curve \"format\" must be a string");
    return f.get<std::string>();
}

}  // namespace

PointCurve point_curve_from_json(const Json &j) {
    const std::string format = format_of(j);
    if (format == "angle") return points_from_angle(angle_curve_from_json(j, 0));
    if (format != "points") throw std::invalid_argument("unknown curve format \"" + format + "\"");
    const Json &pts = field(j, "points");
    if (!pts.is_array()) throw std::invalid_argument("\"points\" must be an array");
    std::vector<Vec2> out;
    out.reserve(pts.size());
    for (const Json &p : pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw std::invalid_argument("each point must be [x, y]");
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return PointCurve(std::move(out));
}

AngleCurve angle_curve_from_json(const Json &j, std::size_t n) {
    const std::string format = format_of(j);
    if (format == "points") return angle_from_points(point_curve_from_json(j), n);
    if (format != "angle") throw std::invalid_argument("unknown curve format \"" + format + "\"");
    const Json &length = field(j, "L");
    if (!length.is_number()) throw std::invalid_argument("\"L\" must be a number");
    int turning = 1;
    if (j.contains("turning")) {
        if (!j.at("turning").is_number_integer()) throw std::invalid_argument("\"turning\" must be an integer");
        turning = j.at("turning").get<int>();
    }
    return AngleCurve(length.get<double>(), numbers(j, "theta"), turning);
}

CurvatureIntegrand integrand_from_json(const Json &j) {
    const Json &kind = field(j, "kind");
    if (!kind.is_string()) throw std::invalid_argument("integrand \"kind\" must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "power" || k == "positive_power") {
        const Json &p = field(j, "p");
        if (!p.is_number()) throw std::invalid_argument("integrand \"p\" must be a number");
        return k == "power" ? CurvatureIntegrand::power(p.get<double>())
                            : CurvatureIntegrand::positive_power(p.get<double>());
    }
    if (k == "tabulated") return CurvatureIntegrand::tabulated(numbers(j, "t"), numbers(j, "f"));
    throw std::invalid_argument("unknown integrand kind \"" + k + "\"");
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path &path, const Json &j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_history_csv(std::ostream &os, std::span<const IterationRecord> history) {
    const auto flags = os.flags();
    const auto precision = os.precision();
    os << "outer,inner,f_p,augmented,area_defect,closure_defect,grad_norm,q_p\n" << std::setprecision(17);
    for (const IterationRecord &r : history)
        os << r.outer << ',' << r.inner << ',' << r.f_p << ',' << r.augmented << ',' << r.area_defect << ','
           << r.closure_defect << ',' << r.grad_norm << ',' << r.q_p << '\n';
    os.flags(flags);
    os.precision(precision);
}

std::string render_svg(std::span<const SvgPath> paths, std::span<const std::pair<Vec2, Vec2>> dashed) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double x0 = inf, y0 = inf, x1 = -inf, y1 = -inf;
    auto grow = [&](const Vec2 &v) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
    };
    for (const SvgPath &p : paths)
        for (const Vec2 &v : p.points) grow(v);
    for (const auto &[a, b] : dashed) {
        grow(a);
        grow(b);
    }
    if (!(x1 >= x0)) throw std::invalid_argument("render_svg: nothing to draw");
    double extent = std::max(x1 - x0, y1 - y0);
    if (!(extent > 0.0)) extent = 1.0;
    const double pad = 0.1 * extent;
    const double vx = x0 - pad, vw = x1 - x0 + 2.0 * pad;
    const double vh = y1 - y0 + 2.0 * pad;
    // SVG y points down; flip so counterclockwise curves stay counterclockwise
    auto px = [&](const Vec2 &v) { return v.x; };
    auto py = [&](const Vec2 &v) { return y0 + y1 - v.y; };
    const double stroke = 0.004 * extent;

    std::ostringstream os;
    os << std::setprecision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\""
       << static_cast<int>(std::lround(640.0 * vh / vw)) << "\" viewBox=\"" << vx << ' ' << y0 - pad << ' ' << vw
       << ' ' << vh << "\">\n";
    os << "<rect x=\"" << vx << "\" y=\"" << y0 - pad << "\" width=\"" << vw << "\" height=\"" << vh
       << "\" fill=\"white\"/>\n";
    for (const SvgPath &p : paths) {
        if (p.points.empty()) continue;
        os << "<path fill=\"none\" stroke=\"" << p.stroke << "\" stroke-width=\"" << stroke << "\" d=\"M";
        for (std::size_t i = 0; i < p.points.size(); ++i)
            os << (i ? " L" : "") << px(p.points[i]) << ',' << py(p.points[i]);
        os << " Z\"/>\n";
    }
    for (const auto &[a, b] : dashed)
        os << "<line x1=\"" << px(a) << "\" y1=\"" << py(a) << "\" x2=\"" << px(b) << "\" y2=\"" << py(b)
           << "\" stroke=\"gray\" stroke-width=\"" << stroke << "\" stroke-dasharray=\"" << 4.0 * stroke << ' '
           << 3.0 * stroke << "\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace pelastic
