#include "pelastic/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pelastic/geometry.hpp"

namespace pelastic {

namespace {

double wrap_angle(double a) {
    // into (-pi, pi]
    a = std::remainder(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

}  // namespace

PointCurve::PointCurve(std::vector<Vec2> points) : points_(std::move(points)) {
    if (points_.size() < kMinSamples)
        throw std::invalid_argument("PointCurve needs at least 8 vertices, got " +
                                    std::to_string(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const Vec2 &p = points_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("PointCurve vertex " + std::to_string(i) +
                                        " is not finite");
        if (p == points_[(i + 1) % points_.size()])
            throw std::invalid_argument("PointCurve has repeated consecutive vertex at index " +
                                        std::to_string(i));
    }
}

AngleCurve::AngleCurve(double length, std::vector<double> theta, int turning)
    : length_(length), theta_(std::move(theta)), turning_(turning) {
    if (!(length_ > 0.0) || !std::isfinite(length_))
        throw std::invalid_argument("AngleCurve length must be positive and finite");
    if (theta_.size() < kMinSamples)
        throw std::invalid_argument("AngleCurve needs at least 8 samples, got " +
                                    std::to_string(theta_.size()));
    for (double t : theta_)
        if (!std::isfinite(t)) throw std::invalid_argument("AngleCurve sample is not finite");
}

double closure_defect(const AngleCurve &curve) {
    double cx = 0.0, cy = 0.0;
    for (double t : curve.theta()) {
        cx += std::cos(t);
        cy += std::sin(t);
    }
    return curve.step() * (std::abs(cx) + std::abs(cy));
}

AngleCurve project_closure(const AngleCurve &curve, double tol) {
    std::vector<double> theta(curve.theta().begin(), curve.theta().end());
    const double target = 1e-14 * curve.length();
    double defect = closure_defect(curve);
    for (int iter = 0; iter < 50 && defect > target; ++iter) {
        double cx = 0.0, cy = 0.0, a = 0.0, b = 0.0, c = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double co = std::cos(theta[i]), si = std::sin(theta[i]);
            cx += co;
            cy += si;
            if (i == 0) continue;
            // J J^T with J rows (-sin, cos), common factor ds dropped
            a += si * si;
            b -= si * co;
            c += co * co;
        }
        const double det = a * c - b * b;
        if (!(std::abs(det) > 0.0)) break;
        // solve (J J^T) m = residual
        const double mx = (c * cx - b * cy) / det;
        const double my = (a * cy - b * cx) / det;
        for (std::size_t i = 1; i < theta.size(); ++i) {
            theta[i] -= -std::sin(theta[i]) * mx + std::cos(theta[i]) * my;
        }
        AngleCurve next(curve.length(), theta, curve.turning());
        const double next_defect = closure_defect(next);
        if (!(next_defect < defect)) break;
        defect = next_defect;
    }
    if (defect > tol * curve.length())
        throw std::runtime_error("closure projection failed: defect " + std::to_string(defect));
    return AngleCurve(curve.length(), std::move(theta), curve.turning());
}

AngleSampling sample_angles(const PointCurve &curve, std::size_t n) {
    if (n < kMinSamples) throw std::invalid_argument("sample count must be at least 8");
    const auto pts = curve.points();
    if (!is_simple(pts)) throw std::invalid_argument("curve is self-intersecting");
    if (!(signed_area(pts) > 0.0))
        throw std::invalid_argument("curve is clockwise; counterclockwise orientation required");

    const std::size_t m = pts.size();
    std::vector<double> cumulative(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        cumulative[i + 1] = cumulative[i] + norm(pts[(i + 1) % m] - pts[i]);
    const double length = cumulative[m];

    std::vector<Vec2> samples(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = length * static_cast<double>(k) / static_cast<double>(n);
        while (seg + 1 < m && cumulative[seg + 1] <= s) ++seg;
        const double t = (s - cumulative[seg]) / (cumulative[seg + 1] - cumulative[seg]);
        samples[k] = pts[seg] + t * (pts[(seg + 1) % m] - pts[seg]);
    }

    std::vector<double> raw(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 d = samples[(k + 1) % n] - samples[k];
        if (d.x == 0.0 && d.y == 0.0)
            throw std::invalid_argument("resampling produced coincident points");
        raw[k] = std::atan2(d.y, d.x);
    }

    std::vector<double> theta(n);
    theta[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) theta[k] = theta[k - 1] + wrap_angle(raw[k] - raw[k - 1]);
    const double total = theta[n - 1] + wrap_angle(raw[0] - raw[n - 1]);
    const int turning = static_cast<int>(std::lround(total / kTwoPi));

    AngleCurve unprojected(length, std::move(theta), turning);
    return {project_closure(unprojected), samples[0], raw[0]};
}

AngleCurve angle_from_points(const PointCurve &curve, std::size_t n) {
    return sample_angles(curve, n).curve;
}

PointCurve points_from_angle(const AngleCurve &curve, Vec2 origin, double tol) {
    const double defect = closure_defect(curve);
    if (defect > tol * curve.length())
        throw std::invalid_argument("closure defect " + std::to_string(defect) +
                                    " exceeds tolerance");
    const double ds = curve.step();
    std::vector<Vec2> pts(curve.size());
    Vec2 p = origin;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        pts[i] = p;
        p += ds * unit_vector(curve[i]);
    }
    return PointCurve(std::move(pts));
}

std::vector<double> curvature(const AngleCurve &curve) {
    const std::size_t n = curve.size();
    const double ds = curve.step();
    std::vector<double> kappa(n);
    for (std::size_t i = 0; i + 1 < n; ++i) kappa[i] = (curve[i + 1] - curve[i]) / ds;
    kappa[n - 1] = (curve[0] + kTwoPi * curve.turning() - curve[n - 1]) / ds;
    return kappa;
}

double signed_area(std::span<const Vec2> polygon) {
    double twice = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
    return 0.5 * twice;
}

double enclosed_area(const PointCurve &curve) {
    const double a = signed_area(curve.points());
    if (!(a > 0.0))
        throw std::invalid_argument("non-positive enclosed area: curve is clockwise or degenerate");
    return a;
}

double area_gauss_green(const AngleCurve &curve) {
    // sin(t_i - t_j) = sin t_i cos t_j - cos t_i sin t_j, so the inner sum over
    // j < i collapses to running sums of cos and sin.
    double cos_sum = 0.0, sin_sum = 0.0, total = 0.0;
    for (double t : curve.theta()) {
        const double c = std::cos(t), s = std::sin(t);
        total += s * cos_sum - c * sin_sum;
        cos_sum += c;
        sin_sum += s;
    }
    const double ds = curve.step();
    return 0.5 * ds * ds * total;
}

WidthDiameter width_diameter(const PointCurve &curve) {
    const std::vector<Vec2> hull = convex_hull(curve.points());
    const std::size_t h = hull.size();
    if (h < 3) throw std::invalid_argument("degenerate (collinear) curve");

    // Rotating calipers: for every hull edge advance the antipodal vertex.
    WidthDiameter out{std::numeric_limits<double>::infinity(), 0.0};
    std::size_t j = 1;
    for (std::size_t i = 0; i < h; ++i) {
        const Vec2 &a = hull[i];
        const Vec2 &b = hull[(i + 1) % h];
        const Vec2 edge = b - a;
        while (cross(edge, hull[(j + 1) % h] - a) > cross(edge, hull[j] - a)) j = (j + 1) % h;
        out.width = std::min(out.width, cross(edge, hull[j] - a) / norm(edge));
        out.diameter = std::max({out.diameter, norm(hull[j] - a), norm(hull[j] - b)});
    }
    return out;
}

bool is_convex(const AngleCurve &curve, double tol) {
    if (curve.turning() != 1) throw std::invalid_argument("convexity test needs turning number 1");
    const std::size_t n = curve.size();
    double min_step = curve[0] + kTwoPi - curve[n - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) min_step = std::min(min_step, curve[i + 1] - curve[i]);
    return min_step >= -tol;
}

Vec2 centroid(const PointCurve &curve) {
    const auto pts = curve.points();
    const std::size_t n = pts.size();
    // Shift to the first vertex for conditioning.
    const Vec2 o = pts[0];
    double twice_area = 0.0;
    Vec2 acc;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = pts[i] - o;
        const Vec2 b = pts[(i + 1) % n] - o;
        const double w = cross(a, b);
        twice_area += w;
        acc += w * (a + b);
    }
    if (twice_area == 0.0) throw std::invalid_argument("centroid of a zero-area curve");
    return o + acc * (1.0 / (3.0 * twice_area));
}

namespace {

bool polygon_is_convex(std::span<const Vec2> pts) {
    const std::size_t n = pts.size();
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 &a = pts[i];
        const Vec2 &b = pts[(i + 1) % n];
        const Vec2 &c = pts[(i + 2) % n];
        if (orientation(a, b, c) < 0) return false;
        turning += std::atan2(cross(b - a, c - b), dot(b - a, c - b));
    }
    return std::abs(turning - kTwoPi) < 1e-6;
}

}  // namespace

CurveMetrics metrics(const PointCurve &curve) {
    CurveMetrics m;
    const auto pts = curve.points();
    for (std::size_t i = 0; i < pts.size(); ++i) m.length += norm(pts[(i + 1) % pts.size()] - pts[i]);
    m.area = enclosed_area(curve);
    const WidthDiameter wd = width_diameter(curve);
    m.width = wd.width;
    m.diameter = wd.diameter;
    m.convex = polygon_is_convex(pts);
    m.centroid = centroid(curve);
    return m;
}

CurveMetrics metrics(const AngleCurve &curve) {
    const PointCurve pts = points_from_angle(curve);
    CurveMetrics m = metrics(pts);
    m.length = curve.length();
    m.convex = curve.turning() == 1 && is_convex(curve);
    return m;
}

double circularity(const AngleCurve &curve) {
    const std::vector<double> kappa = curvature(curve);
    const double n = static_cast<double>(kappa.size());
    const double mean = std::accumulate(kappa.begin(), kappa.end(), 0.0) / n;
    double var = 0.0;
    for (double k : kappa) var += (k - mean) * (k - mean);
    return std::sqrt(var / n) / mean;
}

PointCurve scaled(const PointCurve &curve, double factor) {
    std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
    for (Vec2 &p : pts) p *= factor;
    return PointCurve(std::move(pts));
}

PointCurve rigid_motion(const PointCurve &curve, double angle, Vec2 shift) {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Vec2> pts;
    pts.reserve(curve.size());
    for (const Vec2 &p : curve.points()) pts.push_back({c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y});
    return PointCurve(std::move(pts));
}

AngleCurve scaled(const AngleCurve &curve, double factor) {
    return AngleCurve(curve.length() * factor, {curve.theta().begin(), curve.theta().end()},
                      curve.turning());
}

AngleCurve rotated(const AngleCurve &curve, double angle) {
    std::vector<double> theta(curve.theta().begin(), curve.theta().end());
    for (double &t : theta) t += angle;
    return AngleCurve(curve.length(), std::move(theta), curve.turning());
}

double theta_at(const AngleCurve &curve, double s) {
    const auto n = static_cast<long long>(curve.size());
    const double u = s / curve.step() - 0.5;
    const double fl = std::floor(u);
    const double frac = u - fl;
    const auto k = static_cast<long long>(fl);
    auto value = [&](long long idx) {
        long long wraps = idx >= 0 ? idx / n : -((-idx + n - 1) / n);
        const long long i = idx - wraps * n;
        return curve[static_cast<std::size_t>(i)] + kTwoPi * curve.turning() * static_cast<double>(wraps);
    };
    const double lo = value(k);
    const double hi = value(k + 1);
    return lo + frac * (hi - lo);
}

Vec2 polygon_point_at(std::span<const Vec2> vertices, double step, double s) {
    const std::size_t n = vertices.size();
    const double length = step * static_cast<double>(n);
    double t = std::fmod(s, length);
    if (t < 0.0) t += length;
    double u = t / step;
    auto i = static_cast<std::size_t>(std::floor(u));
    if (i >= n) i = n - 1;
    const double frac = u - static_cast<double>(i);
    return vertices[i] + frac * (vertices[(i + 1) % n] - vertices[i]);
}

std::vector<double> resample_theta(const AngleCurve &curve, double s_begin, double span,
                                   std::size_t n) {
    std::vector<double> out(n);
    const double h = span / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = theta_at(curve, s_begin + (static_cast<double>(j) + 0.5) * h);
    return out;
}

}  // namespace pelastic
