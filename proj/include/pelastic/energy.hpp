#pragma once

// Curvature energies E_f = int f(kappa) ds on AngleCurves, the normalized
// p-energies F_p = (1/2)^(2/p) ||kappa||_p^2 and their kappa_+ twins, the
// scale-invariant product F_p^(p/(p-1)) * A, and numerical checks of the
// integrand conditions that make the disc optimal among simply connected sets.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pelastic/curve.hpp"

namespace pelastic {

class CurvatureIntegrand {
public:
    enum class Kind { power, positive_power, tabulated };

    // |t|^p, p > 1
    static CurvatureIntegrand power(double p);
    // max(t, 0)^p, p > 1
    static CurvatureIntegrand positive_power(double p);
    // Monotone-cubic interpolation of (t, f) samples. t strictly increasing,
    // at least four samples, f >= 0, f(0) = 0 when 0 is in range and f > 0
    // for t > 0. Evaluation outside [t.front(), t.back()] throws
    // std::domain_error.
    static CurvatureIntegrand tabulated(std::vector<double> t, std::vector<double> f);

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    std::span<const double> table_t() const { return table_t_; }
    std::span<const double> table_f() const { return table_f_; }
    double domain_min() const;
    double domain_max() const;

    double operator()(double t) const;
    // Derivative; at t = 0 the right derivative for the power kinds.
    double derivative(double t) const;

    std::string describe() const;

private:
    struct Table;

    CurvatureIntegrand(Kind kind, double p) : kind_(kind), p_(p) {}

    Kind kind_;
    double p_ = 0.0;
    std::vector<double> table_t_;
    std::vector<double> table_f_;
    std::shared_ptr<const Table> table_;
};

struct EnergyReport {
    double e_f = 0.0;
    double f_p = 0.0;
    double f_p_plus = 0.0;
    double q_p = 0.0;
    double q_p_plus = 0.0;
};

// ds * sum f(kappa_i)
double energy_Ef(const AngleCurve &curve, const CurvatureIntegrand &f);
double energy_Ef(std::span<const double> kappa, double step, const CurvatureIntegrand &f);

// (1/2)^(2/p) (ds sum |kappa_i|^p)^(2/p); with plus, kappa_+ replaces |kappa|.
// Throws std::invalid_argument for p <= 1.
double energy_Fp(const AngleCurve &curve, double p, bool plus = false);

// F^(p/(p-1)) * A with A from area_gauss_green.
double quotient_Qp(const AngleCurve &curve, double p, bool plus = false);

// pi^((p+1)/(p-1)), the value of quotient_Qp on circles.
double circle_quotient(double p);

EnergyReport energy_report(const AngleCurve &curve, const CurvatureIntegrand &f, double p);

// 2 pi R f(1/R)
double disc_energy(double radius, const CurvatureIntegrand &f);

struct GConvexityReport {
    bool convex = false;
    double min_second_difference = 0.0;
    double tolerance = 0.0;
};

// g(t) = f(1/sqrt t) sqrt t sampled on a strictly increasing grid of t > 0.
// Each interior sample is compared with the chord through its neighbours;
// the second difference is chord value minus g, so convexity means >= 0.
GConvexityReport check_g_convexity(const CurvatureIntegrand &f, std::span<const double> grid,
                                   double rel_tol = 1e-9);

// 64 log-spaced t = 1/kappa^2 values spanning the positive curvatures of the
// curve.
std::vector<double> default_g_grid(const AngleCurve &curve, std::size_t count = 64);

struct MonotoneReport {
    bool holds = false;
    double worst_margin = 0.0;  // min over grid of s f'(s) - int_0^s f(r)/r dr
    double worst_s = 0.0;
};

// s f'(s) >= int_0^s r^-1 f(r) dr for every s in the grid. Throws
// std::domain_error if the quadrature diverges or leaves the domain of f.
MonotoneReport check_f_monotone(const CurvatureIntegrand &f, std::span<const double> grid,
                                double rel_tol = 1e-9);

// Energy of the continuous model over the arc [s_begin, s_end] (s_end may
// exceed L; the parameter wraps). The curvature is kappa_i on
// [(i + 1/2) ds, (i + 3/2) ds].
double arc_energy(const AngleCurve &curve, const CurvatureIntegrand &f, double s_begin,
                  double s_end);

}  // namespace pelastic
