#include "pelastic/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "pelastic/geometry.hpp"
#include "pelastic/surgery.hpp"

namespace pelastic {

namespace {

void require_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be finite and > 1");
}

void require_convex(const AngleCurve &curve, const char *name) {
    if (curve.turning() != 1 || !is_convex(curve, 1e-9))
        throw std::invalid_argument(std::string(name) + " needs a convex curve");
}

// lhs <= rhs
BoundCheck upper(std::string name, double p, double lhs, double rhs, double extra_tol = 0.0) {
    BoundCheck c;
    c.name = std::move(name);
    c.p = p;
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = rhs - lhs;
    c.tolerance = kReportTol * std::max(std::abs(lhs), std::abs(rhs)) + extra_tol;
    c.passed = c.margin >= -c.tolerance;
    return c;
}

// lhs >= rhs
BoundCheck lower(std::string name, double p, double lhs, double rhs, double extra_tol = 0.0) {
    BoundCheck c = upper(std::move(name), p, rhs, lhs, extra_tol);
    std::swap(c.lhs, c.rhs);
    return c;
}

}  // namespace

double BoundCheck::relative_margin() const {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale > 0.0 ? margin / scale : margin;
}

BoundCheck check_isop(const AngleCurve &curve, double p, bool plus) {
    require_exponent(p);
    if (curve.turning() != 1) throw std::invalid_argument("check_isop needs turning number 1");
    const PointCurve poly = points_from_angle(curve);
    if (!is_simple(poly.points())) throw std::invalid_argument("check_isop needs a simple curve");
    const double rhs = circle_quotient(p);
    const double n = static_cast<double>(curve.size());
    const double polygon_deficit = rhs * (1.0 - kPi / (n * std::tan(kPi / n)));
    return lower(plus ? "isop_plus" : "isop", p, quotient_Qp(curve, p, plus), rhs, polygon_deficit);
}

BoundCheck check_theta_growth(const AngleCurve &curve, double p) {
    require_exponent(p);
    require_convex(curve, "check_theta_growth");
    const double factor = std::pow(2.0, 1.0 / p) * std::sqrt(energy_Fp(curve, p));
    const double step = curve.step();
    const std::size_t n = curve.size();
    double worst = -std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0, worst_rhs = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double theta = (k < n ? curve[k] : curve[0] + kTwoPi) - curve[0];
        const double bound = factor * std::pow(static_cast<double>(k) * step, (p - 1.0) / p);
        if (theta - bound > worst) {
            worst = theta - bound;
            worst_lhs = theta;
            worst_rhs = bound;
        }
    }
    return upper("theta_growth", p, worst_lhs, worst_rhs);
}

BoundCheck check_length_lower(const AngleCurve &curve, double p) {
    require_exponent(p);
    require_convex(curve, "check_length_lower");
    const double rhs = 2.0 * std::pow(kPi / std::sqrt(energy_Fp(curve, p)), p / (p - 1.0));
    return lower("length_lower", p, curve.length(), rhs);
}

BoundCheck check_kubota(const AngleCurve &curve) {
    require_convex(curve, "check_kubota");
    const CurveMetrics m = metrics(curve);
    return upper("kubota", 0.0, m.diameter, 2.0 * m.area / m.width);
}

BoundCheck check_diameter_bound(const AngleCurve &curve, double p) {
    require_exponent(p);
    require_convex(curve, "check_diameter_bound");
    const CurveMetrics m = metrics(curve);
    const double rhs = std::pow(2.0, (5.0 * p + 1.0) / (2.0 * (p - 1.0))) * m.area *
                       std::pow(std::sqrt(energy_Fp(curve, p)) / kPi, p / (p - 1.0));
    return upper("diameter", p, m.diameter, rhs);
}

BoundCheck check_curvature_lower(const AngleCurve &curve, double p, double symmetry_tol) {
    require_exponent(p);
    require_convex(curve, "check_curvature_lower");
    if (!is_centrosymmetric(curve, symmetry_tol))
        throw std::invalid_argument("check_curvature_lower needs a centrosymmetric curve");
    const CurveMetrics m = metrics(curve);
    const std::vector<double> kappa = curvature(curve);
    const double kmin = *std::min_element(kappa.begin(), kappa.end());
    const double rhs = std::sqrt(energy_Fp(curve, p)) *
                       std::pow((p - 1.0) * m.width / (m.area * std::pow(2.0, p + 1.0)), 1.0 / p);
    BoundCheck c = lower("curvature_lower", p, kmin, rhs);
    c.diagnostic_only = true;
    return c;
}

BoundCheck check_disc_mixing(const CurvatureIntegrand &f, double r1, double r2) {
    const double mean = 0.5 * (disc_energy(r1, f) + disc_energy(r2, f));
    const double radius = std::sqrt(0.5 * (r1 * r1 + r2 * r2));
    return lower("disc_mixing", f.exponent(), mean, disc_energy(radius, f));
}

void write_csv_header(std::ostream &os) { os << "name,p,curve-id,lhs,rhs,margin,passed\n"; }

void write_csv_row(std::ostream &os, const BoundCheck &c) {
    const auto flags = os.flags();
    const auto precision = os.precision();
    os << std::setprecision(17) << c.name << ',' << c.p << ',' << c.curve_id << ',' << c.lhs << ','
       << c.rhs << ',' << c.margin << ',' << (c.passed ? "true" : "false") << '\n';
    os.flags(flags);
    os.precision(precision);
}

void write_csv(std::ostream &os, std::span<const BoundCheck> checks) {
    write_csv_header(os);
    for (const BoundCheck &c : checks) write_csv_row(os, c);
}

}  // namespace pelastic
