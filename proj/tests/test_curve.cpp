#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pelastic/curve.hpp"

using namespace pelastic;

namespace {

PointCurve ellipse(double a, double b, std::size_t m, Vec2 center = {}) {
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = 2.0 * oracle::pi * static_cast<double>(i) / static_cast<double>(m);
        pts[i] = {center.x + a * std::cos(t), center.y + b * std::sin(t)};
    }
    return PointCurve(std::move(pts));
}

PointCurve polar(std::size_t m, double amp, double k) {
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = 2.0 * oracle::pi * static_cast<double>(i) / static_cast<double>(m);
        const double r = 1.0 + amp * std::cos(k * t);
        pts[i] = {r * std::cos(t), r * std::sin(t)};
    }
    return PointCurve(std::move(pts));
}

AngleCurve exact_circle(double radius, std::size_t n) {
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = 2.0 * oracle::pi * static_cast<double>(i) / static_cast<double>(n);
    return AngleCurve(2.0 * oracle::pi * radius, theta);
}

PointCurve unit_square(std::size_t per_side) {
    std::vector<Vec2> pts;
    const Vec2 corners[] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int c = 0; c < 4; ++c)
        for (std::size_t k = 0; k < per_side; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(per_side);
            pts.push_back(corners[c] + t * (corners[(c + 1) % 4] - corners[c]));
        }
    return PointCurve(std::move(pts));
}

}  // namespace

TEST_CASE("constructors validate their input") {
    CHECK_THROWS_AS(PointCurve({{0, 0}, {1, 0}, {0, 1}}), std::invalid_argument);
    std::vector<Vec2> dup{{0, 0}, {1, 0}, {1, 0}, {2, 1}, {1, 2}, {0, 2}, {-1, 1}, {-1, 0.5}};
    CHECK_THROWS_AS(PointCurve{dup}, std::invalid_argument);
    CHECK_THROWS_AS(AngleCurve(0.0, std::vector<double>(16, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(AngleCurve(1.0, std::vector<double>(4, 0.0)), std::invalid_argument);
    std::vector<double> bad(16, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(AngleCurve(1.0, bad), std::invalid_argument);
}

TEST_CASE("angle_from_points on a regular 256-gon") {
    const AngleCurve c = angle_from_points(ellipse(1.0, 1.0, 256), 256);
    CHECK(c.turning() == 1);
    CHECK(std::abs(c.length() - 2.0 * oracle::pi) < 1e-3);
    CHECK(c[0] == 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - c.step() * static_cast<double>(i)) < 2e-2);
}

TEST_CASE("angle_from_points on the unit square") {
    const AngleCurve c = angle_from_points(unit_square(25), 400);
    CHECK(c.length() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c.turning() == 1);
    int off_grid = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double q = c[i] / (0.5 * oracle::pi);
        if (std::abs(q - std::round(q)) > 1e-6) ++off_grid;
    }
    CHECK(off_grid == 0);
}

TEST_CASE("angle_from_points on the 2:1 ellipse matches the quadrature perimeter") {
    const AngleCurve c = angle_from_points(ellipse(2.0, 1.0, 1024), 512);
    const double perimeter = oracle::ellipse_perimeter(2.0, 1.0);
    CHECK(perimeter == doctest::Approx(9.688448).epsilon(1e-6));
    CHECK(std::abs(c.length() - perimeter) < 1e-3 * perimeter);
}

TEST_CASE("angle_from_points rejects clockwise and self-intersecting input") {
    const PointCurve ccw = ellipse(2.0, 1.0, 64);
    std::vector<Vec2> cw(ccw.points().rbegin(), ccw.points().rend());
    CHECK_THROWS_AS(angle_from_points(PointCurve(cw), 64), std::invalid_argument);
    std::vector<Vec2> eight;
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * oracle::pi * i / 64.0;
        eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
    }
    CHECK_THROWS_AS(angle_from_points(PointCurve(eight), 64), std::invalid_argument);
}

TEST_CASE("points_from_angle integrates theta(s) = s to the unit circle") {
    const AngleCurve c = exact_circle(1.0, 256);
    const PointCurve pc = points_from_angle(c, {1.0, 0.0});
    CHECK(pc[0] == Vec2{1.0, 0.0});
    const Vec2 center = centroid(pc);
    double worst = 0.0;
    for (const Vec2 &p : pc.points()) worst = std::max(worst, std::abs(norm(p - center) - 1.0));
    CHECK(worst < 1e-3);
}

TEST_CASE("points_from_angle refuses an open arc") {
    const AngleCurve open(1.0, std::vector<double>(32, 0.0), 0);
    CHECK_THROWS_AS(points_from_angle(open), std::invalid_argument);
}

TEST_CASE("round trip on the 2:1 ellipse stays within 1e-3 diameter") {
    const AngleSampling s = sample_angles(ellipse(2.0, 1.0, 2048), 512);
    const PointCurve back = points_from_angle(rotated(s.curve, s.rotation), s.origin);
    const std::vector<Vec2> pts(back.points().begin(), back.points().end());
    CHECK(oracle::distance_to_ellipse(pts, 2.0, 1.0) < 1e-3 * 4.0);
    const AngleCurve again = angle_from_points(back, 512);
    double worst = 0.0;
    for (std::size_t i = 0; i < again.size(); ++i) worst = std::max(worst, std::abs(again[i] - s.curve[i]));
    CHECK(worst < 1e-3);
}

TEST_CASE("curvature of circles and of the ellipse vertex") {
    for (double r : {1.0, 2.0}) {
        const auto kappa = curvature(exact_circle(r, 128));
        for (double k : kappa) CHECK(k == doctest::Approx(1.0 / r).epsilon(1e-12));
    }
    const AngleSampling s = sample_angles(ellipse(2.0, 1.0, 4096), 512);
    const auto kappa = curvature(s.curve);
    // the resample starts at (2, 0); kappa_{N-1} sits at that vertex
    CHECK(s.origin.x == doctest::Approx(2.0));
    CHECK(std::abs(kappa.back() - oracle::ellipse_curvature(2.0, 1.0, 0.0)) < 2e-2);
    CHECK(oracle::ellipse_curvature(2.0, 1.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("total turning identity") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> theta(97);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = 2.0 * oracle::pi * i / 97.0 + u(rng);
        const AngleCurve c(3.7, theta, 1);
        const auto kappa = curvature(c);
        const double total = std::accumulate(kappa.begin(), kappa.end(), 0.0) * c.step();
        CHECK(total == doctest::Approx(2.0 * oracle::pi).epsilon(1e-12));
    }
}

TEST_CASE("shoelace area examples") {
    CHECK(enclosed_area(ellipse(1.0, 1.0, 512)) == doctest::Approx(oracle::pi).epsilon(1e-4));
    CHECK(enclosed_area(unit_square(3)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(enclosed_area(ellipse(2.0, 1.0, 2048)) == doctest::Approx(2.0 * oracle::pi).epsilon(1e-3));
    const PointCurve e = ellipse(2.0, 1.0, 64);
    std::vector<Vec2> cw(e.points().rbegin(), e.points().rend());
    CHECK_THROWS_AS(enclosed_area(PointCurve(cw)), std::invalid_argument);
}

TEST_CASE("Gauss-Green area agrees with the literal double sum and with shoelace") {
    const AngleCurve unit = exact_circle(1.0, 1024);
    CHECK(area_gauss_green(unit) == doctest::Approx(oracle::pi).epsilon(1e-4));
    CHECK(area_gauss_green(exact_circle(2.0, 1024)) == doctest::Approx(4.0 * oracle::pi).epsilon(1e-4));
    const AngleCurve e = angle_from_points(ellipse(2.0, 1.0, 4096), 1024);
    const double dense = oracle::shoelace([] {
        std::vector<Vec2> pts(20000);
        for (int i = 0; i < 20000; ++i) {
            const double t = 2.0 * oracle::pi * i / 20000.0;
            pts[i] = {2.0 * std::cos(t), std::sin(t)};
        }
        return pts;
    }());
    CHECK(area_gauss_green(e) == doctest::Approx(dense).epsilon(1e-3));

    for (double amp : {0.1, 0.4, 0.6}) {
        const AngleCurve c = angle_from_points(polar(2048, amp, 2.0), 256);
        const std::vector<double> theta(c.theta().begin(), c.theta().end());
        const double literal = oracle::gauss_green_double_sum(theta, c.length());
        CHECK(area_gauss_green(c) == doctest::Approx(literal).epsilon(1e-12));
        const PointCurve pc = points_from_angle(c);
        const double poly = oracle::shoelace(std::vector<Vec2>(pc.points().begin(), pc.points().end()));
        CHECK(std::abs(area_gauss_green(c) - poly) <= 1e-4 * poly);
    }
}

TEST_CASE("width and diameter") {
    const WidthDiameter circle = width_diameter(ellipse(1.0, 1.0, 1024));
    CHECK(circle.width == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(circle.diameter == doctest::Approx(2.0).epsilon(1e-3));
    const WidthDiameter square = width_diameter(unit_square(4));
    CHECK(square.width == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(square.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    const WidthDiameter ell = width_diameter(ellipse(2.0, 1.0, 2048));
    CHECK(ell.width == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(ell.diameter == doctest::Approx(4.0).epsilon(1e-3));
    std::vector<Vec2> line;
    for (int i = 0; i < 10; ++i) line.push_back({static_cast<double>(i), 2.0 * i});
    CHECK_THROWS_AS(width_diameter(PointCurve(line)), std::invalid_argument);
}

TEST_CASE("convexity") {
    CHECK(is_convex(exact_circle(1.0, 64)));
    CHECK(is_convex(angle_from_points(ellipse(2.0, 1.0, 1024), 256)));
    // the closed-form curvature of the polar peanut changes sign
    double kmin = 1e300;
    for (int i = 0; i < 1000; ++i) kmin = std::min(kmin, oracle::polar_cos_curvature(0.6, 2.0, 2.0 * oracle::pi * i / 1000.0));
    CHECK(kmin < 0.0);
    CHECK_FALSE(is_convex(angle_from_points(polar(2048, 0.6, 2.0), 256)));
    const AngleCurve twice(1.0, std::vector<double>(16, 0.0), 2);
    CHECK_THROWS_AS(is_convex(twice), std::invalid_argument);
}

TEST_CASE("centroid examples") {
    const Vec2 c = centroid(ellipse(1.0, 1.0, 256, {3.0, -1.0}));
    CHECK(c.x == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(c.y + 1.0) < 1e-6);
    const Vec2 sq = centroid(unit_square(2));
    CHECK(sq.x == doctest::Approx(0.5));
    CHECK(sq.y == doctest::Approx(0.5));
    std::vector<Vec2> tri;
    for (int k = 0; k < 3; ++k) tri.push_back({k / 3.0, 0.0});
    for (int k = 0; k < 3; ++k) tri.push_back({1.0 - k / 3.0, k / 3.0});
    for (int k = 0; k < 3; ++k) tri.push_back({0.0, 1.0 - k / 3.0});
    const Vec2 t = centroid(PointCurve(tri));
    CHECK(t.x == doctest::Approx(1.0 / 3.0));
    CHECK(t.y == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("scaling covariance and rigid-motion invariance") {
    const PointCurve base = polar(1024, 0.3, 3.0);
    const CurveMetrics m = metrics(base);
    const AngleCurve ac = angle_from_points(base, 256);
    const auto kappa = curvature(ac);
    for (double lambda : {0.5, 3.0}) {
        const CurveMetrics s = metrics(scaled(base, lambda));
        CHECK(s.length == doctest::Approx(lambda * m.length).epsilon(1e-12));
        CHECK(s.area == doctest::Approx(lambda * lambda * m.area).epsilon(1e-12));
        CHECK(s.width == doctest::Approx(lambda * m.width).epsilon(1e-12));
        CHECK(s.diameter == doctest::Approx(lambda * m.diameter).epsilon(1e-12));
        const auto ks = curvature(scaled(ac, lambda));
        for (std::size_t i = 0; i < ks.size(); ++i)
            CHECK(ks[i] == doctest::Approx(kappa[i] / lambda).epsilon(1e-12));
    }
    const CurveMetrics r = metrics(rigid_motion(base, 0.7, {5.0, -2.0}));
    CHECK(r.length == doctest::Approx(m.length).epsilon(1e-10));
    CHECK(r.area == doctest::Approx(m.area).epsilon(1e-10));
    CHECK(r.width == doctest::Approx(m.width).epsilon(1e-10));
    CHECK(r.diameter == doctest::Approx(m.diameter).epsilon(1e-10));
    CHECK(r.convex == m.convex);
}

TEST_CASE("representation consistency over a family of smooth curves") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double amp = 0.5 * u(rng);
        const double k = 2.0 + std::floor(4.0 * u(rng));
        const AngleCurve c = angle_from_points(polar(2048, amp, k), 256);
        const double poly = enclosed_area(points_from_angle(c));
        CHECK(std::abs(area_gauss_green(c) - poly) <= 1e-4 * poly);
    }
}

TEST_CASE("closure projection") {
    std::vector<double> theta(64);
    for (std::size_t i = 0; i < 64; ++i) theta[i] = 2.0 * oracle::pi * i / 64.0 + 0.01 * std::sin(3.0 * i);
    const AngleCurve raw(2.0 * oracle::pi, theta);
    CHECK(closure_defect(raw) > 1e-4);
    const AngleCurve fixed = project_closure(raw);
    CHECK(closure_defect(fixed) <= 1e-8 * fixed.length());
    CHECK(fixed[0] == raw[0]);
}

TEST_CASE("continuous model helpers") {
    const AngleCurve c = exact_circle(1.0, 64);
    CHECK(theta_at(c, 0.5 * c.step()) == doctest::Approx(0.0));
    CHECK(theta_at(c, 1.5 * c.step()) == doctest::Approx(c[1]));
    CHECK(theta_at(c, c.length() + 0.5 * c.step()) == doctest::Approx(2.0 * oracle::pi));
    const auto re = resample_theta(c, 0.0, c.length(), 64);
    for (std::size_t i = 0; i < 64; ++i) CHECK(re[i] == doctest::Approx(c[i]).epsilon(1e-12));
}
