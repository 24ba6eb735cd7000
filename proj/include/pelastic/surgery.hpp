#pragma once

// Cut-and-paste constructions on AngleCurves with energy/area ledgers:
// equal-area chords between parallel tangents, centrosymmetrization, the
// ramp-and-plateau perturbation near s = 0, removal of a pair of antipodal
// straight segments, and the reduction of a two-lobed curve to two convex
// closed curves compared against discs.
//
// Arc energies use the continuous model of curve.hpp (theta linear between
// segment midpoints), so they add up exactly to energy_Ef over a full period.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pelastic/curve.hpp"
#include "pelastic/energy.hpp"

namespace pelastic {

// The construction does not apply to the given curve (for example a convex
// curve handed to the two-lobe reduction).
class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Chord {
    double s1 = 0.0;
    double s2 = 0.0;
    Vec2 p1;
    Vec2 p2;
    Vec2 midpoint;
    double tangent_gap = 0.0;  // |theta(s2) - theta(s1) - pi|
    double area1 = 0.0;        // region left of the arc s1 -> s2
    // Lobe chords of reduce_two_convex_arcs keep s1 at the lobe start, so
    // s1 > s2 there when the lobe passes through s = 0.
    double area2 = 0.0;
};

struct SurgeryReport {
    std::string construction;
    AngleCurve input;
    AngleCurve output;
    double energy_before = 0.0;
    double energy_after = 0.0;
    double area_before = 0.0;
    double area_after = 0.0;
    std::vector<Chord> chords;
    // straight pieces of the input that the construction removed or used
    std::vector<std::pair<Vec2, Vec2>> segments;
};

// Parallel-tangent chord splitting a convex curve into two equal areas.
// Ties go to the smallest s1. Throws std::invalid_argument for non-convex
// input and std::runtime_error when no sign change can be bracketed.
Chord find_equal_area_parallel_chord(const AngleCurve &curve);

// Keeps the lower-energy side of the equal-area chord and closes it with its
// rotation by pi about the chord midpoint. Requires an even sample count.
SurgeryReport centrosymmetrize(const AngleCurve &curve, const CurvatureIntegrand &f);

// Returns true when theta_{i + N/2} = theta_i + pi within tol for all i.
bool is_centrosymmetric(const AngleCurve &curve, double tol = 1e-8);

struct PerturbationEstimates {
    double eps = 0.0;
    double delta = 0.0;        // curvature at s = 0
    double dE_measured = 0.0;  // F_p^(p/2) after minus before
    double dE_bound = 0.0;     // eps delta^p 2^(p-1)
    double dA_measured = 0.0;  // area after minus before
    double plateau_length = 0.0;  // length of each straight piece, eps / 2
};

struct Perturbation {
    AngleCurve perturbed;
    PerturbationEstimates estimates;
};

// Replaces theta on [0, eps] by a ramp of doubled slope on [0, eps/2] and the
// constant theta(eps) on [eps/2, eps], mirrored on the antipodal half. Input
// must be convex and centrosymmetric; eps >= 4 ds. Throws
// std::invalid_argument otherwise.
Perturbation perturb_theta_eps(const AngleCurve &curve, double eps, double p = 2.0);

struct NotchRemoval {
    SurgeryReport report;
    double segment_length = 0.0;  // sigma, length of each removed segment
    double input_width = 0.0;
    double area_drop = 0.0;
};

// Deletes the longest pair of antipodal straight runs (zero-curvature cells)
// of equal length, which translates one of the two arcs between them by the
// segment length along the segment direction. Throws std::invalid_argument
// when no such pair exists.
NotchRemoval notch_removal(const AngleCurve &curve, const CurvatureIntegrand &f);

struct ReductionComparison {
    double e_input = 0.0;
    double mean_e_halves = 0.0;
    double mean_e_discs = 0.0;
    double e_disc = 0.0;
    double area1 = 0.0;
    double area2 = 0.0;
    double disc_radius = 0.0;
};

struct Reduction {
    // Two reports, ordered by chord start. energy_before / area_before are
    // twice the energy and area of the convex piece cut off by the chord.
    std::vector<SurgeryReport> reports;
    ReductionComparison comparison;
};

// Finds two disjoint convex lobes cut off by parallel-tangent chords lying
// inside the curve, closes each by rotation about its chord midpoint, and
// compares the input energy with the two closed curves and with discs.
// Throws NotApplicable when fewer than two such chords exist.
Reduction reduce_two_convex_arcs(const AngleCurve &curve, const CurvatureIntegrand &f);

}  // namespace pelastic
