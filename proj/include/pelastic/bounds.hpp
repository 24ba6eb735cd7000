#pragma once

// Instantiated inequalities with both sides and an oriented margin
// (margin >= 0 means the inequality holds).

#include <ostream>
#include <span>
#include <string>

#include "pelastic/curve.hpp"
#include "pelastic/energy.hpp"

namespace pelastic {

struct BoundCheck {
    std::string name;
    double p = 0.0;  // 0 when the inequality has no exponent
    std::string curve_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    // passed <=> margin >= -tolerance
    double tolerance = 0.0;
    bool passed = false;
    // reported without being required to pass
    bool diagnostic_only = false;

    // margin / max(|lhs|, |rhs|)
    double relative_margin() const;
};

// Default reporting tolerance, 1e-9 * max(|lhs|, |rhs|).
inline constexpr double kReportTol = 1e-9;

// F_p^(p/(p-1)) A >= pi^((p+1)/(p-1)); plus selects the kappa_+ energy. The
// tolerance also absorbs the deficit of the regular N-gon, on which the
// discrete quotient equals the circle value times pi / (N tan(pi/N)).
// Throws std::invalid_argument for turning != 1 or a self-intersecting curve.
BoundCheck check_isop(const AngleCurve &curve, double p, bool plus = false);

// max over the grid of (theta_k - theta_0) - 2^(1/p) s_k^((p-1)/p) F_p^(1/2),
// reported as -margin. Convex input only.
BoundCheck check_theta_growth(const AngleCurve &curve, double p);

// L >= 2 (pi / F_p^(1/2))^(p/(p-1)). Convex input only.
BoundCheck check_length_lower(const AngleCurve &curve, double p);

// d <= 2 a / w. Convex input only.
BoundCheck check_kubota(const AngleCurve &curve);

// d <= 2^((5p+1)/(2(p-1))) a (F_p^(1/2) / pi)^(p/(p-1)). Convex input only.
BoundCheck check_diameter_bound(const AngleCurve &curve, double p);

// min kappa >= F_p^(1/2) ((p-1) w / (a 2^(p+1)))^(1/p). Holds for
// minimizers only, so the result is diagnostic. Throws std::invalid_argument
// unless the curve is convex and centrosymmetric within symmetry_tol radians.
BoundCheck check_curvature_lower(const AngleCurve &curve, double p, double symmetry_tol = 1e-4);

// (E_f(disc R1) + E_f(disc R2)) / 2 >= E_f(disc R) with
// pi R^2 = (pi R1^2 + pi R2^2) / 2.
BoundCheck check_disc_mixing(const CurvatureIntegrand &f, double r1, double r2);

// Header "name,p,curve-id,lhs,rhs,margin,passed" and one row per check.
void write_csv_header(std::ostream &os);
void write_csv_row(std::ostream &os, const BoundCheck &check);
void write_csv(std::ostream &os, std::span<const BoundCheck> checks);

}  // namespace pelastic
