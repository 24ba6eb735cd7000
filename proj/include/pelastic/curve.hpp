#pragma once

// Discrete closed plane curves.
//
// Two representations are kept side by side:
//   * PointCurve - an implicitly closed polyline, used for I/O and for the
//     geometric predicates (area, hull, width, diameter, centroid).
//   * AngleCurve - tangent angles theta_i sampled on a uniform arc-length grid
//     of step ds = L/N, where theta_i is the direction of the i-th segment
//     [i ds, (i+1) ds]. Curvature is the forward difference of theta and lives
//     on the vertices between segments.
//
// Integration from angles to points is the midpoint rule, so the polygon
// reconstructed from an AngleCurve has N edges of length ds each.

#include <cstddef>
#include <span>
#include <vector>

#include "pelastic/vec2.hpp"

namespace pelastic {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Closure tolerance relative to the curve length.
inline constexpr double kDefaultCloseTol = 1e-8;

inline constexpr std::size_t kMinSamples = 8;

class PointCurve {
public:
    // Throws std::invalid_argument on fewer than 8 vertices, non-finite
    // coordinates, or repeated consecutive vertices (including last/first).
    explicit PointCurve(std::vector<Vec2> points);

    std::span<const Vec2> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Vec2 &operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<Vec2> points_;
};

class AngleCurve {
public:
    // Throws std::invalid_argument if length <= 0, fewer than 8 samples,
    // or any sample is non-finite. Closure is not checked here; see
    // closure_defect() and project_closure().
    AngleCurve(double length, std::vector<double> theta, int turning = 1);

    double length() const { return length_; }
    int turning() const { return turning_; }
    std::span<const double> theta() const { return theta_; }
    std::size_t size() const { return theta_.size(); }
    double step() const { return length_ / static_cast<double>(theta_.size()); }
    double operator[](std::size_t i) const { return theta_[i]; }

private:
    double length_;
    std::vector<double> theta_;
    int turning_;
};

struct CurveMetrics {
    double length = 0.0;
    double area = 0.0;
    double width = 0.0;
    double diameter = 0.0;
    bool convex = false;
    Vec2 centroid;
};

struct WidthDiameter {
    double width = 0.0;
    double diameter = 0.0;
};

// |ds sum cos theta_i| + |ds sum sin theta_i|
double closure_defect(const AngleCurve &curve);

// Minimum-norm Gauss-Newton projection of theta onto the closure set
// {sum cos = sum sin = 0}, keeping theta_0 fixed. Throws std::runtime_error
// if the defect cannot be brought below tol * L.
AngleCurve project_closure(const AngleCurve &curve, double tol = kDefaultCloseTol);

struct AngleSampling {
    AngleCurve curve;
    Vec2 origin;      // first resampled vertex
    double rotation;  // direction of the first segment, subtracted from theta
};

// Uniform arc-length resampling of a simple counterclockwise polyline. The
// result has theta_0 = 0, is unwrapped, and is projected onto the closure set.
// Throws std::invalid_argument for self-intersecting or clockwise input.
AngleCurve angle_from_points(const PointCurve &curve, std::size_t n);
AngleSampling sample_angles(const PointCurve &curve, std::size_t n);

// Cumulative midpoint-rule integration. The first vertex is origin.
// Throws std::invalid_argument if the closure defect exceeds tol * L.
PointCurve points_from_angle(const AngleCurve &curve, Vec2 origin = {},
                             double tol = kDefaultCloseTol);

// kappa_i = (theta_{i+1} - theta_i) / ds with theta_N = theta_0 + 2 pi turning.
std::vector<double> curvature(const AngleCurve &curve);

// Shoelace area. Throws std::invalid_argument unless strictly positive.
double enclosed_area(const PointCurve &curve);

// Signed shoelace area, no orientation check.
double signed_area(std::span<const Vec2> polygon);

// 1/2 ds^2 sum_i sum_{j<i} sin(theta_i - theta_j).
double area_gauss_green(const AngleCurve &curve);

// Width and diameter of the convex hull. Throws std::invalid_argument when
// the hull is degenerate.
WidthDiameter width_diameter(const PointCurve &curve);

// min_i (theta_{i+1} - theta_i) >= -tol, wrapping with +2 pi.
// Throws std::invalid_argument for turning != 1.
bool is_convex(const AngleCurve &curve, double tol = 1e-12);

// Area centroid of the enclosed region.
Vec2 centroid(const PointCurve &curve);

CurveMetrics metrics(const PointCurve &curve);
CurveMetrics metrics(const AngleCurve &curve);

// std(kappa) / mean(kappa)
double circularity(const AngleCurve &curve);

PointCurve scaled(const PointCurve &curve, double factor);
PointCurve rigid_motion(const PointCurve &curve, double angle, Vec2 shift);
AngleCurve scaled(const AngleCurve &curve, double factor);
AngleCurve rotated(const AngleCurve &curve, double angle);

// Continuous model of an AngleCurve: theta interpolated linearly between the
// segment midpoints (i + 1/2) ds, extended by theta(s + L) = theta(s) + 2 pi
// turning. Its derivative is the piecewise-constant curvature with kappa_i
// on [(i + 1/2) ds, (i + 3/2) ds].
double theta_at(const AngleCurve &curve, double s);

// Vertex i of the reconstructed polygon sits at arc length i * ds.
Vec2 polygon_point_at(std::span<const Vec2> vertices, double step, double s);

// Uniformly resamples theta over [s_begin, s_begin + span) into n samples
// using the continuous model.
std::vector<double> resample_theta(const AngleCurve &curve, double s_begin, double span,
                                   std::size_t n);

}  // namespace pelastic
