#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pelastic/energy.hpp"
#include "generators.hpp"

using namespace pelastic;

namespace {

double ngon_factor(std::size_t n) {
    const double nn = static_cast<double>(n);
    return oracle::pi / (nn * std::tan(oracle::pi / nn));
}

CurvatureIntegrand tabulated_power(double q) {
    std::vector<double> t, f;
    for (int i = 0; i <= 400; ++i) {
        const double x = 10.0 * i / 400.0;
        t.push_back(x);
        f.push_back(std::pow(x, q));
    }
    return CurvatureIntegrand::tabulated(t, f);
}

}  // namespace

TEST_CASE("integrand kinds") {
    const auto sq = CurvatureIntegrand::power(2.0);
    CHECK(sq(-3.0) == doctest::Approx(9.0));
    CHECK(sq.derivative(-3.0) == doctest::Approx(-6.0));
    const auto plus = CurvatureIntegrand::positive_power(3.0);
    CHECK(plus(-2.0) == 0.0);
    CHECK(plus(2.0) == doctest::Approx(8.0));
    CHECK(plus.derivative(2.0) == doctest::Approx(12.0));
    CHECK_THROWS_AS(CurvatureIntegrand::power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureIntegrand::power(0.5), std::invalid_argument);

    const auto tab = tabulated_power(2.0);
    CHECK(tab(1.2345) == doctest::Approx(1.2345 * 1.2345).epsilon(1e-3));
    CHECK_THROWS_AS(tab(10.5), std::domain_error);
    CHECK_THROWS_AS(tab(-0.1), std::domain_error);
    CHECK_THROWS_AS(CurvatureIntegrand::tabulated({0, 1, 2}, {0, 1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureIntegrand::tabulated({0, 1, 1, 2}, {0, 1, 1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureIntegrand::tabulated({0, 1, 2, 3}, {0.5, 1, 4, 9}), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureIntegrand::tabulated({0, 1, 2, 3}, {0, 0, 4, 9}), std::invalid_argument);
}

TEST_CASE("E_f on circles") {
    const AngleCurve unit = gen::circle(1.0, 1024);
    CHECK(energy_Ef(unit, CurvatureIntegrand::power(2.0)) == doctest::Approx(2.0 * oracle::pi).epsilon(1e-6));
    CHECK(energy_Ef(gen::circle(2.0, 1024), CurvatureIntegrand::power(2.0)) ==
          doctest::Approx(oracle::pi).epsilon(1e-6));
    CHECK(energy_Ef(unit, CurvatureIntegrand::positive_power(3.0)) == doctest::Approx(2.0 * oracle::pi).epsilon(1e-6));
}

TEST_CASE("F_p on circles") {
    const AngleCurve unit = gen::circle(1.0, 1024);
    CHECK(energy_Fp(unit, 2.0) == doctest::Approx(oracle::pi).epsilon(1e-12));
    CHECK(energy_Fp(unit, 3.0) == doctest::Approx(std::pow(oracle::pi, 2.0 / 3.0)).epsilon(1e-12));
    CHECK(energy_Fp(unit, 3.0) == doctest::Approx(2.14503).epsilon(1e-5));
    CHECK(energy_Fp(gen::circle(2.0, 1024), 2.0) == doctest::Approx(oracle::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("circle quotient equals the closed form up to the N-gon factor") {
    for (double p : {1.25, 1.5, 2.0, 3.0, 5.0})
        for (double r : {0.5, 1.0, 2.0}) {
            const double q = quotient_Qp(gen::circle(r, 1024), p);
            CHECK(std::abs(q / circle_quotient(p) - 1.0) < 1e-5);
            CHECK(q == doctest::Approx(circle_quotient(p) * ngon_factor(1024)).epsilon(1e-12));
        }
    CHECK(circle_quotient(2.0) == doctest::Approx(31.00628).epsilon(1e-6));
    CHECK(circle_quotient(3.0) == doctest::Approx(oracle::pi * oracle::pi).epsilon(1e-14));
}

TEST_CASE("quotient on the 2:1 ellipse matches quadrature and exceeds pi^3") {
    const AngleCurve e = gen::make_generator("ellipse 2 1", 1024).curve;
    const double f2 = oracle::ellipse_Fp(2.0, 1.0, 2.0);
    CHECK(energy_Fp(e, 2.0) == doctest::Approx(f2).epsilon(1e-3));
    const double q_oracle = f2 * f2 * 2.0 * oracle::pi;
    CHECK(quotient_Qp(e, 2.0) == doctest::Approx(q_oracle).epsilon(2e-3));
    CHECK(q_oracle > circle_quotient(2.0));
    CHECK(quotient_Qp(e, 2.0) > circle_quotient(2.0));
}

TEST_CASE("scale invariance of the quotient") {
    const AngleCurve c = gen::make_generator("peanut 0.4 2", 512).curve;
    for (double p : {1.5, 2.0, 3.0})
        for (double lambda : {0.5, 2.0, 10.0})
            CHECK(quotient_Qp(scaled(c, lambda), p) == doctest::Approx(quotient_Qp(c, p)).epsilon(1e-10));
}

TEST_CASE("F_p_plus never exceeds F_p and agrees on convex curves") {
    const AngleCurve peanut = gen::make_generator("peanut 0.6 2", 512).curve;
    const AngleCurve oval = gen::make_generator("oval 4", 512).curve;
    for (double p : {1.5, 2.0, 3.0}) {
        CHECK(energy_Fp(peanut, p, true) < energy_Fp(peanut, p));
        CHECK(energy_Fp(oval, p, true) == doctest::Approx(energy_Fp(oval, p)).epsilon(1e-14));
    }
}

TEST_CASE("disc energy") {
    const auto f = CurvatureIntegrand::power(2.0);
    CHECK(disc_energy(1.0, f) == doctest::Approx(2.0 * oracle::pi));
    CHECK(disc_energy(2.0, f) == doctest::Approx(oracle::pi));
    const double mean = 0.5 * (disc_energy(1.0, f) + disc_energy(2.0, f));
    CHECK(mean == doctest::Approx(1.5 * oracle::pi));
    CHECK(disc_energy(std::sqrt(2.5), f) == doctest::Approx(2.0 * oracle::pi / std::sqrt(2.5)));
    CHECK(disc_energy(std::sqrt(2.5), f) == doctest::Approx(3.9738).epsilon(1e-4));
    CHECK(mean >= disc_energy(std::sqrt(2.5), f));
    for (double p : {1.5, 2.0, 3.0}) {
        const auto fp = CurvatureIntegrand::power(p);
        double prev = disc_energy(0.1, fp);
        for (int i = 2; i <= 100; ++i) {
            const double e = disc_energy(0.1 * i, fp);
            CHECK(e < prev);
            prev = e;
        }
    }
    CHECK_THROWS_AS(disc_energy(0.0, f), std::invalid_argument);
}

TEST_CASE("g-convexity") {
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i) grid.push_back(std::exp(-3.0 + 6.0 * i / 63.0));
    CHECK(check_g_convexity(CurvatureIntegrand::power(2.0), grid).convex);
    CHECK(check_g_convexity(CurvatureIntegrand::power(1.5), grid).convex);
    CHECK(check_g_convexity(CurvatureIntegrand::power(3.0), grid).convex);
    // tabulated sqrt(t): g(t) = t^(1/4) is concave
    std::vector<double> t, f;
    for (int i = 0; i <= 2000; ++i) {
        t.push_back(30.0 * i / 2000.0);
        f.push_back(std::sqrt(t.back()));
    }
    const auto root = CurvatureIntegrand::tabulated(t, f);
    std::vector<double> g_grid;
    for (int i = 0; i < 32; ++i) g_grid.push_back(std::exp(-2.0 + 3.0 * i / 31.0));
    const GConvexityReport r = check_g_convexity(root, g_grid);
    CHECK_FALSE(r.convex);
    CHECK(r.min_second_difference < 0.0);
    CHECK_THROWS_AS(check_g_convexity(CurvatureIntegrand::power(2.0), std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("default g-grid spans the curve's curvatures") {
    const AngleCurve e = gen::make_generator("ellipse 2 1", 256).curve;
    const auto grid = default_g_grid(e);
    CHECK(grid.size() == 64);
    CHECK(check_g_convexity(CurvatureIntegrand::power(2.0), grid).convex);
    const auto circle_grid = default_g_grid(gen::circle(1.0, 128));
    CHECK(circle_grid.front() < 1.0);
    CHECK(circle_grid.back() > 1.0);
}

TEST_CASE("f-monotonicity") {
    const std::vector<double> one{1.0};
    const MonotoneReport sq = check_f_monotone(CurvatureIntegrand::power(2.0), one);
    CHECK(sq.holds);
    CHECK(sq.worst_margin == doctest::Approx(1.5).epsilon(1e-8));
    std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 5.0};
    for (double p : {1.5, 2.0, 3.0}) {
        const MonotoneReport r = check_f_monotone(CurvatureIntegrand::power(p), grid);
        CHECK(r.holds);
        // closed form p s^p - s^p / p, minimized at the smallest s
        CHECK(r.worst_margin == doctest::Approx((p - 1.0 / p) * std::pow(0.1, p)).epsilon(1e-6));
    }
    std::vector<double> t, f;
    for (int i = 0; i <= 4000; ++i) {
        t.push_back(10.0 * i / 4000.0);
        f.push_back(std::sqrt(t.back()));
    }
    const MonotoneReport r = check_f_monotone(CurvatureIntegrand::tabulated(t, f), std::vector<double>{1.0, 4.0});
    CHECK_FALSE(r.holds);
    // left s^(1/2)/2, right 2 s^(1/2): margin -1.5 s^(1/2), worst at s = 4
    CHECK(r.worst_margin == doctest::Approx(-3.0).epsilon(2e-2));
}

TEST_CASE("arc energies add up to E_f") {
    const AngleCurve c = gen::make_generator("egg", 256).curve;
    const auto f = CurvatureIntegrand::power(2.0);
    const double total = energy_Ef(c, f);
    CHECK(arc_energy(c, f, 0.0, c.length()) == doctest::Approx(total).epsilon(1e-12));
    const double s = 0.37 * c.length();
    CHECK(arc_energy(c, f, s, s + c.length()) == doctest::Approx(total).epsilon(1e-12));
    const double a = arc_energy(c, f, 0.1, 2.3), b = arc_energy(c, f, 2.3, 0.1 + c.length());
    CHECK(a + b == doctest::Approx(total).epsilon(1e-12));
    CHECK_THROWS_AS(arc_energy(c, f, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("energy report fields are consistent") {
    const AngleCurve c = gen::make_generator("peanut 0.5 2", 512).curve;
    const EnergyReport r = energy_report(c, CurvatureIntegrand::power(2.0), 2.0);
    CHECK(r.e_f == doctest::Approx(energy_Ef(c, CurvatureIntegrand::power(2.0))));
    CHECK(r.f_p == doctest::Approx(energy_Fp(c, 2.0)));
    CHECK(r.q_p == doctest::Approx(quotient_Qp(c, 2.0)));
    CHECK(r.q_p_plus == doctest::Approx(quotient_Qp(c, 2.0, true)));
    CHECK(r.q_p_plus < r.q_p);
}
