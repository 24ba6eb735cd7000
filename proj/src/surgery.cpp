#include "pelastic/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pelastic/geometry.hpp"

namespace pelastic {

namespace {

constexpr int kBisectionSteps = 200;

std::size_t wrap_index(long long k, std::size_t n) {
    const auto m = static_cast<long long>(n);
    long long r = k % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
}

// Smallest s' in [s, s_hi] with theta(s') >= theta(s) + pi, assuming theta is
// nondecreasing there. Returns s_hi when the target is never reached.
double antipodal_parameter(const AngleCurve &curve, double s, double s_hi) {
    const double target = theta_at(curve, s) + kPi;
    if (theta_at(curve, s_hi) < target) return s_hi;
    double lo = s, hi = s_hi;
    for (int it = 0; it < kBisectionSteps && hi - lo > 1e-15 * curve.length(); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (theta_at(curve, mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Polygon bounded by the arc [sa, sb] (sa < sb < sa + L) and the chord back.
std::vector<Vec2> arc_region(std::span<const Vec2> vertices, double step, double sa, double sb) {
    std::vector<Vec2> region;
    region.push_back(polygon_point_at(vertices, step, sa));
    const auto first = static_cast<long long>(std::floor(sa / step)) + 1;
    const auto last = static_cast<long long>(std::ceil(sb / step)) - 1;
    for (long long k = first; k <= last; ++k) region.push_back(vertices[wrap_index(k, vertices.size())]);
    region.push_back(polygon_point_at(vertices, step, sb));
    return region;
}

void require_convex(const AngleCurve &curve) {
    if (curve.turning() != 1) throw std::invalid_argument("surgery needs turning number 1");
    if (!is_convex(curve, 1e-9)) throw std::invalid_argument("surgery needs a convex curve");
}

Chord make_chord(const AngleCurve &curve, std::span<const Vec2> vertices, double s1, double s2,
                 double total_area) {
    Chord c;
    const double step = curve.step();
    c.area1 = signed_area(arc_region(vertices, step, s1, s2));
    c.area2 = total_area - c.area1;
    c.tangent_gap = std::abs(theta_at(curve, s2) - theta_at(curve, s1) - kPi);
    const double length = curve.length();
    if (s2 >= length) {
        // keep 0 <= s1 < s2 < L by naming the other endpoint first
        std::swap(s1, s2);
        s1 -= length;
        std::swap(c.area1, c.area2);
    }
    c.s1 = s1;
    c.s2 = s2;
    c.p1 = polygon_point_at(vertices, step, s1);
    c.p2 = polygon_point_at(vertices, step, s2);
    c.midpoint = 0.5 * (c.p1 + c.p2);
    return c;
}

// Closes the arc [sa, sa + span] with its rotation by pi; n samples in total.
AngleCurve close_by_rotation(const AngleCurve &curve, double sa, double span, std::size_t n) {
    if (n % 2 != 0) throw std::invalid_argument("rotation gluing needs an even sample count");
    std::vector<double> half = resample_theta(curve, sa, span, n / 2);
    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n / 2; ++j) {
        theta[j] = half[j];
        theta[j + n / 2] = half[j] + kPi;
    }
    return AngleCurve(2.0 * span, std::move(theta), 1);
}

}  // namespace

Chord find_equal_area_parallel_chord(const AngleCurve &curve) {
    require_convex(curve);
    const PointCurve poly = points_from_angle(curve);
    const auto vertices = poly.points();
    const double step = curve.step();
    const double length = curve.length();
    const double area = signed_area(vertices);

    auto delta = [&](double s) {
        const double s2 = antipodal_parameter(curve, s, s + length);
        return 2.0 * signed_area(arc_region(vertices, step, s, s2)) - area;
    };

    const double tol = 1e-6 * area;
    const double d0 = delta(0.0);
    const double half = antipodal_parameter(curve, 0.0, length);
    double lo = 0.0, hi = half;
    if (std::abs(d0) > 1e-13 * area) {
        // first sign change on a grid of one sample per cell, then bisection
        const auto cells = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(half / step)));
        bool bracketed = false;
        double prev = 0.0;
        for (std::size_t k = 1; k <= cells; ++k) {
            const double s = half * static_cast<double>(k) / static_cast<double>(cells);
            const double d = delta(s);
            if ((d > 0.0) != (d0 > 0.0) || d == 0.0) {
                lo = prev;
                hi = s;
                bracketed = true;
                break;
            }
            prev = s;
        }
        if (!bracketed) throw std::runtime_error("equal-area chord: no sign change over a half-period");
        for (int it = 0; it < kBisectionSteps && hi - lo > 1e-15 * length; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((delta(mid) > 0.0) == (d0 > 0.0))
                lo = mid;
            else
                hi = mid;
        }
    } else {
        hi = 0.0;
    }
    double s1 = std::abs(delta(lo)) <= std::abs(delta(hi)) ? lo : hi;
    if (std::abs(d0) <= 1e-13 * area) s1 = 0.0;
    double s2 = antipodal_parameter(curve, s1, s1 + length);
    double residual = delta(s1);
    if (std::abs(residual) > tol && s1 != 0.0) {
        // Delta jumps where the far endpoint crosses a straight run; every
        // point of that run is parallel, so slide the endpoint along it.
        s1 = lo;
        auto split = [&](double t) { return 2.0 * signed_area(arc_region(vertices, step, s1, t)) - area; };
        double a = antipodal_parameter(curve, lo, lo + length);
        double b = antipodal_parameter(curve, hi, hi + length);
        const bool rising = split(a) < 0.0;
        for (int it = 0; it < kBisectionSteps && b - a > 1e-15 * length; ++it) {
            const double mid = 0.5 * (a + b);
            if ((split(mid) < 0.0) == rising)
                a = mid;
            else
                b = mid;
        }
        s2 = std::abs(split(a)) <= std::abs(split(b)) ? a : b;
        residual = split(s2);
    }
    if (std::abs(residual) > tol) {
        std::ostringstream msg;
        msg << "equal-area chord: area imbalance " << residual << " exceeds " << tol
            << "; refine the grid";
        throw std::runtime_error(msg.str());
    }
    return make_chord(curve, vertices, s1, s2, area);
}

SurgeryReport centrosymmetrize(const AngleCurve &curve, const CurvatureIntegrand &f) {
    if (curve.size() % 2 != 0) throw std::invalid_argument("centrosymmetrize needs an even sample count");
    const Chord chord = find_equal_area_parallel_chord(curve);
    const double length = curve.length();
    const double e1 = arc_energy(curve, f, chord.s1, chord.s2);
    const double e2 = arc_energy(curve, f, chord.s2, chord.s1 + length);
    const bool first = e1 <= e2;
    const double start = first ? chord.s1 : chord.s2;
    const double span = first ? chord.s2 - chord.s1 : chord.s1 + length - chord.s2;

    SurgeryReport r{"centrosymmetrize", curve, close_by_rotation(curve, start, span, curve.size())};
    r.energy_before = energy_Ef(curve, f);
    r.energy_after = energy_Ef(r.output, f);
    r.area_before = area_gauss_green(curve);
    r.area_after = area_gauss_green(r.output);
    r.chords.push_back(chord);
    r.segments.emplace_back(chord.p1, chord.p2);
    return r;
}

bool is_centrosymmetric(const AngleCurve &curve, double tol) {
    const std::size_t n = curve.size();
    if (n % 2 != 0) return false;
    for (std::size_t i = 0; i < n / 2; ++i)
        if (std::abs(curve[i + n / 2] - curve[i] - kPi) > tol) return false;
    return true;
}

Perturbation perturb_theta_eps(const AngleCurve &curve, double eps, double p) {
    require_convex(curve);
    if (!is_centrosymmetric(curve))
        throw std::invalid_argument("perturb_theta_eps needs a centrosymmetric curve");
    const double step = curve.step();
    const double length = curve.length();
    if (!(eps >= 4.0 * step))
        throw std::invalid_argument("perturb_theta_eps: eps below grid resolution (needs eps >= 4 ds)");
    if (!(eps < 0.5 * length)) throw std::invalid_argument("perturb_theta_eps: eps must be below L/2");
    if (!(p > 1.0)) throw std::invalid_argument("exponent p must be > 1");

    const double theta0 = theta_at(curve, 0.0);
    const double theta_eps = theta_at(curve, eps);
    auto perturbed_half = [&](double s) {
        if (s <= 0.5 * eps) return theta0 + (2.0 * s / eps) * (theta_eps - theta0);
        if (s <= eps) return theta_eps;
        return theta_at(curve, s);
    };
    const std::size_t n = curve.size();
    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n / 2; ++j) {
        theta[j] = perturbed_half((static_cast<double>(j) + 0.5) * step);
        theta[j + n / 2] = theta[j] + kPi;
    }
    Perturbation out{AngleCurve(length, std::move(theta), 1), {}};

    auto half_power = [p](const AngleCurve &c) { return std::pow(energy_Fp(c, p), 0.5 * p); };
    PerturbationEstimates &e = out.estimates;
    e.eps = eps;
    e.delta = curvature(curve).back();
    e.dE_measured = half_power(out.perturbed) - half_power(curve);
    e.dE_bound = eps * std::pow(std::abs(e.delta), p) * std::pow(2.0, p - 1.0);
    e.dA_measured = area_gauss_green(out.perturbed) - area_gauss_green(curve);
    e.plateau_length = 0.5 * eps;
    return out;
}

NotchRemoval notch_removal(const AngleCurve &curve, const CurvatureIntegrand &f) {
    if (curve.turning() != 1) throw std::invalid_argument("notch_removal needs turning number 1");
    const std::size_t n = curve.size();
    struct Run {
        std::size_t start;  // first sample of the run
        std::size_t cells;  // zero-curvature cells, the run spans cells + 1 samples
        double angle;
    };
    auto next_theta = [&](std::size_t i) { return i + 1 < n ? curve[i + 1] : curve[0] + kTwoPi; };
    auto flat = [&](std::size_t i) { return std::abs(next_theta(i) - curve[i]) <= 1e-12; };

    std::vector<Run> runs;
    std::size_t begin = 0;
    bool all_flat = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!flat(i)) {
            begin = i + 1;
            all_flat = false;
            break;
        }
    if (all_flat) throw std::invalid_argument("notch_removal: curve has no curvature");
    // scan cyclically from a curved cell so no run straddles the start
    for (std::size_t k = 0; k < n;) {
        const std::size_t i = (begin + k) % n;
        if (!flat(i)) {
            ++k;
            continue;
        }
        std::size_t len = 0;
        while (k + len < n && flat((begin + k + len) % n)) ++len;
        runs.push_back({i, len, curve[i]});
        k += len;
    }

    const Run *best_a = nullptr;
    const Run *best_b = nullptr;
    std::size_t best_cells = 0;
    for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b) {
            const double gap = std::remainder(runs[b].angle - runs[a].angle - kPi, kTwoPi);
            if (std::abs(gap) > 1e-9) continue;
            const std::size_t cells = std::min(runs[a].cells, runs[b].cells);
            if (cells > best_cells) {
                best_cells = cells;
                best_a = &runs[a];
                best_b = &runs[b];
            }
        }
    if (best_cells == 0) throw std::invalid_argument("notch_removal: no pair of antipodal straight segments");

    const double step = curve.step();
    const PointCurve poly = points_from_angle(curve);
    const auto vertices = poly.points();
    std::vector<bool> drop(n, false);
    NotchRemoval out{SurgeryReport{"notch_removal", curve, curve}, 0.0, 0.0, 0.0};
    for (const Run *run : {best_a, best_b}) {
        for (std::size_t j = 1; j <= best_cells; ++j) drop[(run->start + j) % n] = true;
        out.report.segments.emplace_back(vertices[run->start],
                                         vertices[(run->start + run->cells + 1) % n]);
    }
    std::vector<double> theta;
    theta.reserve(n - 2 * best_cells);
    for (std::size_t i = 0; i < n; ++i)
        if (!drop[i]) theta.push_back(curve[i]);
    const double sigma = static_cast<double>(best_cells) * step;
    const auto kept = static_cast<double>(theta.size());
    // the kept samples keep their spacing ds, so the new length is L - 2 sigma
    out.report.output = AngleCurve(step * kept, std::move(theta), 1);

    out.report.energy_before = energy_Ef(curve, f);
    out.report.energy_after = energy_Ef(out.report.output, f);
    out.report.area_before = area_gauss_green(curve);
    out.report.area_after = area_gauss_green(out.report.output);
    out.segment_length = sigma;
    out.input_width = width_diameter(poly).width;
    out.area_drop = out.report.area_before - out.report.area_after;
    return out;
}

Reduction reduce_two_convex_arcs(const AngleCurve &curve, const CurvatureIntegrand &f) {
    if (curve.turning() != 1) throw std::invalid_argument("reduce_two_convex_arcs needs turning number 1");
    const std::size_t n = curve.size();
    if (n % 2 != 0) throw std::invalid_argument("reduce_two_convex_arcs needs an even sample count");
    const std::vector<double> kappa = curvature(curve);
    const double step = curve.step();
    const double length = curve.length();

    std::size_t begin = n;
    for (std::size_t i = 0; i < n; ++i)
        if (kappa[i] < 0.0) {
            begin = i + 1;
            break;
        }
    if (begin == n) throw NotApplicable("curve is convex; no lobes to reduce");

    const PointCurve poly = points_from_angle(curve);
    const auto vertices = poly.points();
    if (!is_simple(vertices)) throw std::invalid_argument("reduce_two_convex_arcs needs a simple curve");
    const double cos_tol = std::sin(kTwoPi / static_cast<double>(n));

    struct Candidate {
        double sa = 0.0;
        double sb = 0.0;
        double area = -1.0;
    };
    std::vector<Candidate> best;

    auto chord_inside = [&](double sa, double sb, const Vec2 &pa, const Vec2 &pb) {
        const auto ia = static_cast<long long>(std::floor(sa / step));
        const auto ib = static_cast<long long>(std::floor(sb / step));
        for (std::size_t e = 0; e < n; ++e) {
            bool near = false;
            for (long long d = -1; d <= 1; ++d)
                near = near || e == wrap_index(ia + d, n) || e == wrap_index(ib + d, n);
            if (near) continue;
            if (segments_intersect(pa, pb, vertices[e], vertices[(e + 1) % n])) return false;
        }
        return point_in_polygon(vertices, 0.5 * (pa + pb));
    };
    auto corners_convex = [&](double sa, double sb, const Vec2 &pa, const Vec2 &pb) {
        const Vec2 chord = pa - pb;
        const double chord_len = norm(chord);
        if (!(chord_len > 0.0)) return false;
        const Vec2 back = chord * (1.0 / chord_len);
        const double incoming = curve[wrap_index(static_cast<long long>(std::ceil(sb / step)) - 1, n)];
        const double outgoing = curve[wrap_index(static_cast<long long>(std::floor(sa / step)), n)];
        return cross(unit_vector(incoming), back) >= -cos_tol && cross(back, unit_vector(outgoing)) >= -cos_tol;
    };

    for (std::size_t k = 0; k < n;) {
        const std::size_t c0 = begin + k;
        if (kappa[c0 % n] < 0.0) {
            ++k;
            continue;
        }
        std::size_t cells = 0;
        while (k + cells < n && kappa[(c0 + cells) % n] >= 0.0) ++cells;
        k += cells;

        const double run_lo = (static_cast<double>(c0) + 0.5) * step;
        const double run_hi = run_lo + static_cast<double>(cells) * step;
        const double theta_hi = theta_at(curve, run_hi);
        Candidate pick;
        const double h = 0.25 * step;
        for (double sa = run_lo; sa < run_hi && theta_at(curve, sa) + kPi <= theta_hi; sa += h) {
            const double sb = antipodal_parameter(curve, sa, run_hi);
            const Vec2 pa = polygon_point_at(vertices, step, sa);
            const Vec2 pb = polygon_point_at(vertices, step, sb);
            if (!corners_convex(sa, sb, pa, pb) || !chord_inside(sa, sb, pa, pb)) continue;
            const double area = signed_area(arc_region(vertices, step, sa, sb));
            if (area > pick.area) pick = {sa, sb, area};
        }
        if (pick.area > 0.0) best.push_back(pick);
    }
    if (best.size() < 2) throw NotApplicable("fewer than two convex lobes cut off by parallel-tangent chords");

    std::stable_sort(best.begin(), best.end(), [](const Candidate &a, const Candidate &b) { return a.area > b.area; });
    best.resize(2);
    std::sort(best.begin(), best.end(), [length](const Candidate &a, const Candidate &b) {
        return std::fmod(a.sa, length) < std::fmod(b.sa, length);
    });

    Reduction out;
    const double e_input = energy_Ef(curve, f);
    for (const Candidate &c : best) {
        SurgeryReport &r = out.reports.emplace_back(
            SurgeryReport{"reduce_two_convex_arcs", curve, close_by_rotation(curve, c.sa, c.sb - c.sa, n)});
        r.energy_before = 2.0 * arc_energy(curve, f, c.sa, c.sb);
        r.energy_after = energy_Ef(r.output, f);
        r.area_before = 2.0 * c.area;
        r.area_after = area_gauss_green(r.output);
        Chord ch;
        ch.s1 = std::fmod(c.sa, length);
        ch.s2 = std::fmod(c.sb, length);
        ch.p1 = polygon_point_at(vertices, step, c.sa);
        ch.p2 = polygon_point_at(vertices, step, c.sb);
        ch.midpoint = 0.5 * (ch.p1 + ch.p2);
        ch.tangent_gap = std::abs(theta_at(curve, c.sb) - theta_at(curve, c.sa) - kPi);
        ch.area1 = c.area;
        ch.area2 = area_gauss_green(curve) - c.area;
        r.chords.push_back(ch);
        r.segments.emplace_back(ch.p1, ch.p2);
    }

    ReductionComparison &cmp = out.comparison;
    cmp.e_input = e_input;
    cmp.area1 = out.reports[0].area_after;
    cmp.area2 = out.reports[1].area_after;
    cmp.mean_e_halves = 0.5 * (out.reports[0].energy_after + out.reports[1].energy_after);
    cmp.mean_e_discs = 0.5 * (disc_energy(std::sqrt(cmp.area1 / kPi), f) +
                              disc_energy(std::sqrt(cmp.area2 / kPi), f));
    cmp.disc_radius = std::sqrt((cmp.area1 + cmp.area2) / kTwoPi);
    cmp.e_disc = disc_energy(cmp.disc_radius, f);
    return out;
}

}  // namespace pelastic
