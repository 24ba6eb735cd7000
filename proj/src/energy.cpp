#include "pelastic/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

// pchip.hpp calls unqualified isnan; boost::math::isnan must be declared first
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace pelastic {

struct CurvatureIntegrand::Table {
    boost::math::interpolators::pchip<std::vector<double>> spline;
};

namespace {

void require_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("exponent p must be finite and > 1");
}

}  // namespace

CurvatureIntegrand CurvatureIntegrand::power(double p) {
    require_exponent(p);
    return CurvatureIntegrand(Kind::power, p);
}

CurvatureIntegrand CurvatureIntegrand::positive_power(double p) {
    require_exponent(p);
    return CurvatureIntegrand(Kind::positive_power, p);
}

CurvatureIntegrand CurvatureIntegrand::tabulated(std::vector<double> t, std::vector<double> f) {
    if (t.size() != f.size()) throw std::invalid_argument("tabulated integrand: t and f differ in length");
    if (t.size() < 4) throw std::invalid_argument("tabulated integrand needs at least 4 samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(f[i]))
            throw std::invalid_argument("tabulated integrand: non-finite sample");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("tabulated integrand: t grid must be strictly increasing");
        if (f[i] < 0.0) throw std::invalid_argument("tabulated integrand: f must be nonnegative");
        if (t[i] == 0.0 && f[i] != 0.0) throw std::invalid_argument("tabulated integrand: f(0) must be 0");
        if (t[i] > 0.0 && !(f[i] > 0.0))
            throw std::invalid_argument("tabulated integrand: f must be positive for t > 0");
    }
    CurvatureIntegrand out(Kind::tabulated, 0.0);
    out.table_t_ = t;
    out.table_f_ = f;
    out.table_ = std::make_shared<const Table>(
        Table{boost::math::interpolators::pchip<std::vector<double>>(std::move(t), std::move(f))});
    return out;
}

double CurvatureIntegrand::domain_min() const {
    return kind_ == Kind::tabulated ? table_t_.front() : -std::numeric_limits<double>::infinity();
}

double CurvatureIntegrand::domain_max() const {
    return kind_ == Kind::tabulated ? table_t_.back() : std::numeric_limits<double>::infinity();
}

double CurvatureIntegrand::operator()(double t) const {
    switch (kind_) {
    case Kind::power:
        return std::pow(std::abs(t), p_);
    case Kind::positive_power:
        return t > 0.0 ? std::pow(t, p_) : 0.0;
    case Kind::tabulated:
        if (t < table_t_.front() || t > table_t_.back()) {
            std::ostringstream msg;
            msg << "tabulated integrand evaluated at " << t << " outside [" << table_t_.front()
                << ", " << table_t_.back() << "]";
            throw std::domain_error(msg.str());
        }
        return table_->spline(t);
    }
    return 0.0;
}

double CurvatureIntegrand::derivative(double t) const {
    switch (kind_) {
    case Kind::power: {
        if (t == 0.0) return 0.0;
        const double mag = p_ * std::pow(std::abs(t), p_ - 1.0);
        return t > 0.0 ? mag : -mag;
    }
    case Kind::positive_power:
        return t > 0.0 ? p_ * std::pow(t, p_ - 1.0) : 0.0;
    case Kind::tabulated:
        if (t < table_t_.front() || t > table_t_.back())
            throw std::domain_error("tabulated integrand derivative outside its grid");
        return table_->spline.prime(t);
    }
    return 0.0;
}

std::string CurvatureIntegrand::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::power:
        os << "power(p=" << p_ << ")";
        break;
    case Kind::positive_power:
        os << "positive_power(p=" << p_ << ")";
        break;
    case Kind::tabulated:
        os << "tabulated(" << table_t_.size() << " samples on [" << table_t_.front() << ", "
           << table_t_.back() << "])";
        break;
    }
    return os.str();
}

double energy_Ef(std::span<const double> kappa, double step, const CurvatureIntegrand &f) {
    double sum = 0.0;
    for (double k : kappa) sum += f(k);
    return step * sum;
}

double energy_Ef(const AngleCurve &curve, const CurvatureIntegrand &f) {
    return energy_Ef(curvature(curve), curve.step(), f);
}

double energy_Fp(const AngleCurve &curve, double p, bool plus) {
    require_exponent(p);
    double sum = 0.0;
    for (double k : curvature(curve)) {
        const double v = plus ? std::max(k, 0.0) : std::abs(k);
        sum += std::pow(v, p);
    }
    return std::pow(0.5, 2.0 / p) * std::pow(curve.step() * sum, 2.0 / p);
}

double quotient_Qp(const AngleCurve &curve, double p, bool plus) {
    const double area = area_gauss_green(curve);
    if (!(area > 0.0)) throw std::invalid_argument("quotient needs positive enclosed area");
    return std::pow(energy_Fp(curve, p, plus), p / (p - 1.0)) * area;
}

double circle_quotient(double p) {
    require_exponent(p);
    return std::pow(kPi, (p + 1.0) / (p - 1.0));
}

EnergyReport energy_report(const AngleCurve &curve, const CurvatureIntegrand &f, double p) {
    EnergyReport r;
    r.e_f = energy_Ef(curve, f);
    r.f_p = energy_Fp(curve, p, false);
    r.f_p_plus = energy_Fp(curve, p, true);
    const double area = area_gauss_green(curve);
    r.q_p = std::pow(r.f_p, p / (p - 1.0)) * area;
    r.q_p_plus = std::pow(r.f_p_plus, p / (p - 1.0)) * area;
    return r;
}

double disc_energy(double radius, const CurvatureIntegrand &f) {
    if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
    return kTwoPi * radius * f(1.0 / radius);
}

GConvexityReport check_g_convexity(const CurvatureIntegrand &f, std::span<const double> grid,
                                   double rel_tol) {
    if (grid.size() < 3) throw std::invalid_argument("g-convexity grid needs at least 3 points");
    std::vector<double> g(grid.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (!(t > 0.0)) throw std::invalid_argument("g-convexity grid must be positive");
        if (i > 0 && !(t > grid[i - 1]))
            throw std::invalid_argument("g-convexity grid must be strictly increasing");
        const double root = std::sqrt(t);
        g[i] = f(1.0 / root) * root;
        scale = std::max(scale, std::abs(g[i]));
    }
    GConvexityReport r;
    r.tolerance = rel_tol * scale;
    r.min_second_difference = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double w = (grid[i] - grid[i - 1]) / (grid[i + 1] - grid[i - 1]);
        const double chord = (1.0 - w) * g[i - 1] + w * g[i + 1];
        r.min_second_difference = std::min(r.min_second_difference, chord - g[i]);
    }
    r.convex = r.min_second_difference >= -r.tolerance;
    return r;
}

std::vector<double> default_g_grid(const AngleCurve &curve, std::size_t count) {
    double kmin = std::numeric_limits<double>::infinity(), kmax = 0.0;
    for (double k : curvature(curve)) {
        if (k <= 0.0) continue;
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    if (!(kmax > 0.0)) throw std::invalid_argument("curve has no positive curvature");
    if (count < 3) count = 3;
    double lo = 1.0 / (kmax * kmax), hi = 1.0 / (kmin * kmin);
    if (hi <= lo * (1.0 + 1e-9)) {
        // constant curvature: widen to a decade around it
        lo /= 10.0;
        hi *= 10.0;
    }
    std::vector<double> grid(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return grid;
}

MonotoneReport check_f_monotone(const CurvatureIntegrand &f, std::span<const double> grid,
                                double rel_tol) {
    if (grid.empty()) throw std::invalid_argument("monotonicity grid is empty");
    if (f.domain_min() > 0.0)
        throw std::domain_error("integrand is not defined down to 0; int_0^s f(r)/r dr undefined");
    boost::math::quadrature::tanh_sinh<double> integrator;
    MonotoneReport r;
    r.holds = true;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (double s : grid) {
        if (!(s > 0.0)) throw std::invalid_argument("monotonicity grid must be positive");
        if (s > f.domain_max()) throw std::domain_error("monotonicity grid exceeds integrand domain");
        double error = 0.0, l1 = 0.0;
        const double right = integrator.integrate(
            [&](double x) { return x > 0.0 ? f(x) / x : 0.0; }, 0.0, s, 1e-10, &error, &l1);
        if (!std::isfinite(right) || error > 1e-6 * std::max(1.0, std::abs(right)))
            throw std::domain_error("quadrature of f(r)/r diverges near 0");
        const double left = s * f.derivative(s);
        const double margin = left - right;
        const double tol = rel_tol * std::max(std::abs(left), std::abs(right));
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_s = s;
        }
        if (margin < -tol) r.holds = false;
    }
    return r;
}

double arc_energy(const AngleCurve &curve, const CurvatureIntegrand &f, double s_begin,
                  double s_end) {
    if (s_end < s_begin) throw std::invalid_argument("arc_energy: s_end < s_begin");
    const std::vector<double> kappa = curvature(curve);
    const auto n = static_cast<long long>(kappa.size());
    const double ds = curve.step();
    // cell k spans [(k + 1/2) ds, (k + 3/2) ds] and carries kappa_{k mod n}
    double u = s_begin / ds - 0.5;
    const double u_end = s_end / ds - 0.5;
    double total = 0.0;
    while (u < u_end) {
        const double cell = std::floor(u);
        const double next = std::min(cell + 1.0, u_end);
        long long k = static_cast<long long>(cell) % n;
        if (k < 0) k += n;
        total += (next - u) * f(kappa[static_cast<std::size_t>(k)]);
        u = next;
    }
    return total * ds;
}

}  // namespace pelastic
