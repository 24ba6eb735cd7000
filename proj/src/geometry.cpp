#include "pelastic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace pelastic {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int exact_orientation(const Vec2 &a, const Vec2 &b, const Vec2 &c) {
    const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    const Rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

struct Box {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void add(const Vec2 &p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    bool overlaps(const Box &o) const {
        return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
    }
};

bool on_segment(const Vec2 &p, const Vec2 &q, const Vec2 &r) {
    // q collinear with p, r: is it inside the bounding box of pr?
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

}  // namespace

int orientation(const Vec2 &a, const Vec2 &b, const Vec2 &c) {
    const double l = (b.x - a.x) * (c.y - a.y);
    const double r = (b.y - a.y) * (c.x - a.x);
    const double det = l - r;
    // Shewchuk's static filter bound for orient2d, widened for the inexact
    // differences.
    const double bound = 1e-15 * (std::abs(l) + std::abs(r));
    if (det > bound) return 1;
    if (det < -bound) return -1;
    return exact_orientation(a, b, c);
}

bool segments_intersect(const Vec2 &p1, const Vec2 &p2, const Vec2 &q1, const Vec2 &q2) {
    if (std::max(p1.x, p2.x) < std::min(q1.x, q2.x) || std::max(q1.x, q2.x) < std::min(p1.x, p2.x) ||
        std::max(p1.y, p2.y) < std::min(q1.y, q2.y) || std::max(q1.y, q2.y) < std::min(p1.y, p2.y))
        return false;
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(p1, q1, p2)) return true;
    if (o2 == 0 && on_segment(p1, q2, p2)) return true;
    if (o3 == 0 && on_segment(q1, p1, q2)) return true;
    if (o4 == 0 && on_segment(q1, p2, q2)) return true;
    return false;
}

bool is_simple(std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    auto edge_start = [&](std::size_t i) -> const Vec2 & { return polygon[i % n]; };
    auto edge_end = [&](std::size_t i) -> const Vec2 & { return polygon[(i + 1) % n]; };

    // Adjacent edges may only share their common vertex.
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 &a = edge_start(i);
        const Vec2 &b = edge_end(i);
        const Vec2 &c = edge_end(i + 1);
        if (orientation(a, b, c) == 0 && dot(b - a, c - b) < 0) return false;
    }

    // Block bounding boxes prune the O(n^2) pair scan.
    constexpr std::size_t kBlock = 16;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<Box> boxes(blocks);
    for (std::size_t i = 0; i < n; ++i) {
        boxes[i / kBlock].add(edge_start(i));
        boxes[i / kBlock].add(edge_end(i));
    }
    for (std::size_t bi = 0; bi < blocks; ++bi) {
        for (std::size_t bj = bi; bj < blocks; ++bj) {
            if (!boxes[bi].overlaps(boxes[bj])) continue;
            const std::size_t i_end = std::min(n, (bi + 1) * kBlock);
            const std::size_t j_end = std::min(n, (bj + 1) * kBlock);
            for (std::size_t i = bi * kBlock; i < i_end; ++i) {
                const std::size_t j_begin = (bi == bj) ? i + 1 : bj * kBlock;
                for (std::size_t j = j_begin; j < j_end; ++j) {
                    const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
                    if (adjacent) continue;
                    if (segments_intersect(edge_start(i), edge_end(i), edge_start(j),
                                           edge_end(j)))
                        return false;
                }
            }
        }
    }
    return true;
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(),
              [](const Vec2 &a, const Vec2 &b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2 &p : pts) {
        while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && orientation(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

bool point_in_polygon(std::span<const Vec2> polygon, const Vec2 &p) {
    const std::size_t n = polygon.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 &a = polygon[i];
        const Vec2 &b = polygon[j];
        if (orientation(a, b, p) == 0 && on_segment(a, p, b)) return false;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace pelastic
