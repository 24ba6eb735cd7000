#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "pelastic/energy.hpp"
#include "pelastic/optimize.hpp"

using namespace pelastic;

namespace {

std::vector<double> circle_theta(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = 2.0 * oracle::pi * static_cast<double>(i) / static_cast<double>(n);
    return t;
}

// smooth turning-number-one angle function with a few random modes
std::vector<double> random_theta(std::mt19937_64 &rng, std::size_t n) {
    std::uniform_real_distribution<double> amp(-0.25, 0.25), phase(0.0, 2.0 * oracle::pi);
    double a[4], ph[4];
    for (int k = 0; k < 4; ++k) {
        a[k] = amp(rng) / (k + 1);
        ph[k] = phase(rng);
    }
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = 2.0 * oracle::pi * static_cast<double>(i) / static_cast<double>(n);
        double v = s;
        for (int k = 0; k < 4; ++k) v += a[k] * std::sin((k + 1) * s + ph[k]);
        t[i] = v;
    }
    return t;
}

double fd_value(std::vector<double> theta, double length, double p, std::size_t j, double h) {
    return oracle::central_difference(
        [&](double x) {
            const double keep = theta[j];
            theta[j] = x;
            const double v = objective_and_gradient(theta, length, p).value;
            theta[j] = keep;
            return v;
        },
        theta[j], h);
}

double max_rel_gradient_error(const std::vector<double> &theta, double length, double p) {
    const ObjectiveGradient g = objective_and_gradient(theta, length, p);
    double scale = std::abs(g.d_length);
    for (double v : g.d_theta) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j)
        worst = std::max(worst, std::abs(fd_value(theta, length, p, j, 1e-6) - g.d_theta[j]) / scale);
    const double dl = oracle::central_difference(
        [&](double l) { return objective_and_gradient(theta, l, p).value; }, length, 1e-6);
    return std::max(worst, std::abs(dl - g.d_length) / scale);
}

OptimizerConfig config(double p, std::size_t n) {
    OptimizerConfig cfg;
    cfg.p = p;
    cfg.n = n;
    cfg.target_area = oracle::pi;
    return cfg;
}

// the regular N-gon is the discrete minimizer; its quotient sits below the
// continuum value by the factor pi / (N tan(pi/N))
double discrete_floor(double p, std::size_t n) {
    const double nn = static_cast<double>(n);
    return circle_quotient(p) * oracle::pi / (nn * std::tan(oracle::pi / nn)) - 1e-3;
}

void check_descent(const OptimizationResult &r) {
    for (std::size_t k = 1; k < r.history.size(); ++k)
        if (r.history[k].outer == r.history[k - 1].outer)
            REQUIRE(r.history[k].augmented <= r.history[k - 1].augmented);
}

}  // namespace

TEST_CASE("objective on the unit circle") {
    const auto theta = circle_theta(256);
    const ObjectiveGradient g = objective_and_gradient(theta, 2.0 * oracle::pi, 2.0);
    CHECK(g.value == doctest::Approx(oracle::pi).epsilon(1e-12));
    for (double v : g.d_theta) CHECK(std::abs(v) < 1e-12);
    CHECK(g.d_length == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("dF/dL on circles matches the closed form") {
    for (double p : {1.5, 2.0, 3.0})
        for (double r : {0.5, 1.0, 2.0}) {
            const double length = 2.0 * oracle::pi * r;
            // F_p = pi^(2/p) (L / 2 pi)^(2(1-p)/p)
            const double e = 2.0 * (1.0 - p) / p;
            const double closed = std::pow(oracle::pi, 2.0 / p) * e * std::pow(length / (2.0 * oracle::pi), e - 1.0) /
                                  (2.0 * oracle::pi);
            const ObjectiveGradient g = objective_and_gradient(circle_theta(128), length, p);
            CHECK(g.d_length == doctest::Approx(closed).epsilon(1e-8));
        }
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> len(3.0, 12.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto theta = random_theta(rng, 128);
        const double length = len(rng);
        for (double p : {1.5, 2.0, 3.0}) worst = std::max(worst, max_rel_gradient_error(theta, length, p));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("gradient is finite where some curvature vanishes") {
    std::vector<double> theta = circle_theta(64);
    theta[11] = theta[10];
    const ObjectiveGradient g = objective_and_gradient(theta, 2.0 * oracle::pi, 1.5);
    for (double v : g.d_theta) CHECK(std::isfinite(v));
}

TEST_CASE("constraint values") {
    const auto theta = circle_theta(512);
    const ConstraintValues unit = constraints(theta, 2.0 * oracle::pi, oracle::pi);
    CHECK(std::abs(unit.value[0]) < 1e-10);
    CHECK(std::abs(unit.value[1]) < 1e-10);
    // area of the N-gon with perimeter 2 pi
    const double ngon = oracle::pi * oracle::pi / (512.0 * std::tan(oracle::pi / 512.0));
    CHECK(unit.value[2] + oracle::pi == doctest::Approx(ngon).epsilon(1e-12));
    CHECK(std::abs(unit.value[2]) < 1e-4);

    const ConstraintValues two = constraints(theta, 4.0 * oracle::pi, oracle::pi);
    CHECK(two.value[2] == doctest::Approx(3.0 * oracle::pi).epsilon(1e-4));

    const ConstraintValues open = constraints(std::vector<double>(64, 0.0), 5.0, 1.0);
    CHECK(open.value[0] == doctest::Approx(5.0));
    CHECK(open.value[1] == doctest::Approx(0.0));
}

TEST_CASE("constraint Jacobian matches finite differences") {
    std::mt19937_64 rng(7);
    const auto theta = random_theta(rng, 96);
    const double length = 7.0;
    const ConstraintValues c = constraints(theta, length, 2.0);
    for (int k = 0; k < 3; ++k) {
        for (std::size_t j = 0; j < theta.size(); j += 7) {
            std::vector<double> t = theta;
            const double fd = oracle::central_difference(
                [&](double x) {
                    t[j] = x;
                    return constraints(t, length, 2.0).value[k];
                },
                theta[j], 1e-6);
            CHECK(c.d_theta[k][j] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
        const double fd_l = oracle::central_difference(
            [&](double l) { return constraints(theta, l, 2.0).value[k]; }, length, 1e-6);
        CHECK(c.d_length[k] == doctest::Approx(fd_l).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("config validation") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.p = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = OptimizerConfig{};
    cfg.target_area = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = OptimizerConfig{};
    cfg.grad_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    const AngleCurve twice(4.0 * oracle::pi, std::vector<double>(64, 0.0), 2);
    CHECK_THROWS_AS(minimize_Fp(twice, OptimizerConfig{}), std::invalid_argument);
}

TEST_CASE("Euler-Lagrange residual") {
    const ElFit unit = el_residual(gen::circle(1.0, 512), 2.0);
    CHECK(unit.residual < 1e-10);
    CHECK(std::abs(unit.alpha) == doctest::Approx(1.0).epsilon(1e-4));
    for (double p : {1.5, 2.0, 3.0})
        for (double r : {0.5, 2.0}) {
            const ElFit fit = el_residual(gen::circle(r, 512), p);
            CHECK(fit.residual < 1e-10);
            // the N-gon's kappa and support are both exact up to O(1/N^2)
            CHECK(std::abs(fit.alpha) == doctest::Approx(std::pow(r, -p - 1.0)).epsilon(1e-4));
        }
    const AngleCurve e = gen::make_generator("ellipse 2 1", 512).curve;
    CHECK(el_residual(e, 2.0).residual > 0.1);
}

TEST_CASE("Euler-Lagrange residual of the analytic ellipse") {
    // kappa^p against the support function, weighted by arc length
    const double a = 2.0, b = 1.0, p = 2.0;
    double kh = 0.0, hh = 0.0, kk = 0.0;
    for (int i = 0; i < 4000; ++i) {
        const double t = 2.0 * oracle::pi * i / 4000.0;
        const double w = oracle::ellipse_speed(a, b, t);
        const double k = std::pow(oracle::ellipse_curvature(a, b, t), p), h = a * b / w;
        kh += w * k * h;
        hh += w * h * h;
        kk += w * k * k;
    }
    const double alpha = kh / hh;
    const double res = kk - 2.0 * alpha * kh + alpha * alpha * hh;
    const double analytic = std::sqrt(res / kk);
    const double discrete = el_residual(gen::make_generator("ellipse 2 1", 1024).curve, p).residual;
    CHECK(analytic > 0.1);
    CHECK(discrete == doctest::Approx(analytic).epsilon(5e-2));
}

TEST_CASE("ellipse converges to the disc at p = 2") {
    const AngleCurve e = gen::make_generator("ellipse 2 1", 256).curve;
    const OptimizerConfig cfg = config(2.0, 256);
    const OptimizationResult r = minimize_Fp(e, cfg);
    CHECK(r.converged);
    CHECK(r.circularity < 1e-3);
    CHECK(std::abs(r.q_p / circle_quotient(2.0) - 1.0) < 1e-3);
    CHECK(r.el_residual < 1e-3);
    CHECK(r.convex);
    CHECK_FALSE(r.left_simple_class);
    CHECK(std::abs(r.area_defect) <= cfg.constraint_tol);
    CHECK(r.closure_defect <= cfg.constraint_tol);
    CHECK(area_gauss_green(r.curve) == doctest::Approx(oracle::pi).epsilon(1e-9));
    check_descent(r);
    for (const IterationRecord &rec : r.history) REQUIRE(rec.q_p >= discrete_floor(2.0, 256));
}

TEST_CASE("a circle is already optimal") {
    const AngleCurve c = gen::circle(1.0, 256);
    const OptimizationResult r = minimize_Fp(c, config(3.0, 256));
    CHECK(r.converged);
    CHECK(r.outer_iterations <= 2);
    CHECK(r.q_p == doctest::Approx(quotient_Qp(c, 3.0)).epsilon(1e-6));
    const double ngon = oracle::pi / (256.0 * std::tan(oracle::pi / 256.0));
    CHECK(r.q_p == doctest::Approx(oracle::pi * oracle::pi * ngon).epsilon(1e-6));
}

TEST_CASE("mildly nonconvex start reaches the disc") {
    const AngleCurve c = gen::make_generator("peanut 0.15 3", 256).curve;
    CHECK_FALSE(is_convex(c));
    const OptimizationResult r = minimize_Fp(c, config(2.0, 256));
    CHECK(r.circularity < 1e-2);
    CHECK(r.q_p < quotient_Qp(c, 2.0));
    CHECK(r.q_p >= circle_quotient(2.0) * (1.0 - 1e-4));
    check_descent(r);
    if (r.converged && r.el_residual < 1e-3) CHECK(r.circularity < 1e-2);
}

TEST_CASE("other exponents and starts") {
    for (double p : {1.5, 3.0}) {
        const OptimizationResult r = minimize_Fp(gen::make_generator("egg", 128).curve, config(p, 128));
        CHECK(r.circularity < 1e-2);
        CHECK(std::abs(r.q_p / circle_quotient(p) - 1.0) < 1e-3);
        check_descent(r);
        for (const IterationRecord &rec : r.history) REQUIRE(rec.q_p >= discrete_floor(p, 128));
    }
}

TEST_CASE("iteration limit is reported, not thrown") {
    OptimizerConfig cfg = config(2.0, 128);
    cfg.max_outer = 1;
    const OptimizationResult r = minimize_Fp(gen::make_generator("ellipse 3 1", 128).curve, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.outer_iterations == 1);
    CHECK_FALSE(r.message.empty());
}
