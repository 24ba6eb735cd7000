#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pelastic/geometry.hpp"

namespace pelastic::gen {

namespace {

std::mt19937_64 rng_for(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
    return std::mt19937_64(seq);
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) {
    return seed * 1000003ull + static_cast<std::uint64_t>(index);
}

PointCurve polar_points(std::size_t m, auto radius) {
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
        pts[i] = radius(t) * unit_vector(t);
    }
    return PointCurve(std::move(pts));
}

// Arcs of radius rho around each hull vertex joined by the offset edges.
PointCurve round_polygon(const std::vector<Vec2> &hull, double rho, std::size_t m) {
    const std::size_t h = hull.size();
    double perimeter = kTwoPi * rho;
    for (std::size_t i = 0; i < h; ++i) perimeter += norm(hull[(i + 1) % h] - hull[i]);
    const double spacing = perimeter / static_cast<double>(m);
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < h; ++i) {
        const Vec2 prev = hull[(i + h - 1) % h], cur = hull[i], next = hull[(i + 1) % h];
        const Vec2 din = cur - prev, dout = next - cur;
        double a0 = std::atan2(din.y, din.x) - 0.5 * kPi;
        double a1 = std::atan2(dout.y, dout.x) - 0.5 * kPi;
        while (a1 <= a0) a1 += kTwoPi;
        const auto arc_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((a1 - a0) * rho / spacing)));
        for (std::size_t k = 0; k <= arc_steps; ++k)
            pts.push_back(cur + rho * unit_vector(a0 + (a1 - a0) * static_cast<double>(k) / static_cast<double>(arc_steps)));
        const Vec2 from = cur + rho * unit_vector(a1);
        const Vec2 to = next + rho * unit_vector(a1);
        const auto edge_steps = static_cast<std::size_t>(std::ceil(norm(to - from) / spacing));
        for (std::size_t k = 1; k < edge_steps; ++k)
            pts.push_back(from + (static_cast<double>(k) / static_cast<double>(edge_steps)) * (to - from));
    }
    return PointCurve(std::move(pts));
}

std::vector<std::string> split_words(const std::string &spec) {
    std::istringstream in(spec);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

double number_arg(const std::vector<std::string> &w, std::size_t i, const std::string &spec) {
    if (i >= w.size()) throw std::invalid_argument("generator \"" + spec + "\": missing argument");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(w[i], &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != w[i].size() || !std::isfinite(v))
        throw std::invalid_argument("generator \"" + spec + "\": bad number \"" + w[i] + "\"");
    return v;
}

std::uint64_t seed_arg(const std::vector<std::string> &w, std::size_t i, const std::string &spec) {
    const double v = number_arg(w, i, spec);
    if (v < 0.0 || v != std::floor(v)) throw std::invalid_argument("generator \"" + spec + "\": seed must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::size_t dense_size(std::size_t n) { return std::max<std::size_t>(2048, 4 * n); }

AngleCurve circle(double radius, std::size_t n) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    return AngleCurve(kTwoPi * radius, std::move(theta), 1);
}

PointCurve ellipse_points(double a, double b, std::size_t m) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
        pts[i] = {a * std::cos(t), b * std::sin(t)};
    }
    return PointCurve(std::move(pts));
}

PointCurve peanut_points(double amp, int k, std::size_t m) {
    if (!(amp >= 0.0 && amp < 1.0)) throw std::invalid_argument("peanut amplitude must lie in [0, 1)");
    if (k < 1) throw std::invalid_argument("peanut lobe count must be positive");
    return polar_points(m, [&](double t) { return 1.0 + amp * std::cos(k * t); });
}

PointCurve rounded_polygon_points(std::uint64_t seed, std::size_t m) {
    auto rng = rng_for(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> hull;
    while (hull.size() < 3) {
        std::vector<Vec2> raw(10);
        for (Vec2 &v : raw) v = {u(rng), u(rng)};
        hull = convex_hull(raw);
    }
    return round_polygon(hull, 0.2, m);
}

PointCurve support_points(const std::vector<double> &amp, const std::vector<double> &phase, std::size_t m) {
    std::vector<Vec2> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
        double h = 1.0, dh = 0.0;
        for (std::size_t j = 0; j < amp.size(); ++j) {
            const double k = static_cast<double>(j + 2);
            h += amp[j] * std::cos(k * t + phase[j]);
            dh -= k * amp[j] * std::sin(k * t + phase[j]);
        }
        pts[i] = {h * std::cos(t) - dh * std::sin(t), h * std::sin(t) + dh * std::cos(t)};
    }
    return PointCurve(std::move(pts));
}

PointCurve oval_points(std::uint64_t seed, std::size_t m) {
    auto rng = rng_for(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> amp(4), phase(4);
    double budget = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        const double k = static_cast<double>(j + 2);
        amp[j] = u(rng) / (k * k);
        phase[j] = kTwoPi * u(rng);
        budget += (k * k - 1.0) * amp[j];
    }
    const double scale = 0.7 * u(rng) / budget;
    for (double &a : amp) a *= scale;
    return support_points(amp, phase, m);
}

PointCurve egg_points(std::size_t m) { return support_points({0.12, 0.06}, {0.0, 0.0}, m); }

PointCurve perturbed_circle_points(std::uint64_t seed, std::size_t m) {
    auto rng = rng_for(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double e = std::exp(std::log(1e-4) + u(rng) * (std::log(0.15) - std::log(1e-4)));
    std::vector<double> c(5), d(5);
    double total = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
        c[j] = 2.0 * u(rng) - 1.0;
        d[j] = kTwoPi * u(rng);
        total += std::abs(c[j]);
    }
    return polar_points(m, [&](double t) {
        double r = 1.0;
        for (std::size_t j = 0; j < 5; ++j) r += e * c[j] / total * std::cos(static_cast<double>(j + 2) * t + d[j]);
        return r;
    });
}

PointCurve rounded_square_points(double rho, std::size_t m) {
    if (!(rho > 0.0 && rho < 0.5)) throw std::invalid_argument("rounded-square radius must lie in (0, 0.5)");
    const double c = 0.5 - rho;
    return round_polygon({{-c, -c}, {c, -c}, {c, c}, {-c, c}}, rho, m);
}

NamedCurve make_generator(const std::string &spec, std::size_t n) {
    const std::vector<std::string> w = split_words(spec);
    if (w.empty()) throw std::invalid_argument("empty generator spec");
    const std::string &name = w[0];
    const std::size_t m = dense_size(n);
    std::size_t expected = 0;
    NamedCurve out{"", circle(1.0, n)};
    if (name == "circle") {
        expected = 2;
        const double r = number_arg(w, 1, spec);
        out = {"circle-" + fmt(r), circle(r, n)};
    } else if (name == "ellipse") {
        expected = 3;
        const double a = number_arg(w, 1, spec), b = number_arg(w, 2, spec);
        out = {"ellipse-" + fmt(a) + "-" + fmt(b), angle_from_points(ellipse_points(a, b, m), n)};
    } else if (name == "peanut") {
        expected = 3;
        const double amp = number_arg(w, 1, spec), k = number_arg(w, 2, spec);
        if (k != std::floor(k)) throw std::invalid_argument("peanut lobe count must be an integer");
        out = {"peanut-" + fmt(amp) + "-" + fmt(k), angle_from_points(peanut_points(amp, static_cast<int>(k), m), n)};
    } else if (name == "polygon-smooth") {
        expected = 2;
        const std::uint64_t s = seed_arg(w, 1, spec);
        out = {"polygon-smooth-" + std::to_string(s), angle_from_points(rounded_polygon_points(s, m), n)};
    } else if (name == "oval") {
        expected = 2;
        const std::uint64_t s = seed_arg(w, 1, spec);
        out = {"oval-" + std::to_string(s), angle_from_points(oval_points(s, m), n)};
    } else if (name == "egg") {
        expected = 1;
        out = {"egg", angle_from_points(egg_points(m), n)};
    } else if (name == "perturbed-circle") {
        expected = 2;
        const std::uint64_t s = seed_arg(w, 1, spec);
        out = {"perturbed-circle-" + std::to_string(s), angle_from_points(perturbed_circle_points(s, m), n)};
    } else if (name == "rounded-square") {
        expected = 2;
        const double rho = number_arg(w, 1, spec);
        out = {"rounded-square-" + fmt(rho), angle_from_points(rounded_square_points(rho, m), n)};
    } else {
        throw std::invalid_argument("unknown generator \"" + name + "\"");
    }
    if (w.size() != expected) throw std::invalid_argument("generator \"" + spec + "\": wrong number of arguments");
    return out;
}

const std::vector<std::string> &family_names() {
    static const std::vector<std::string> names{"circles", "perturbed-circles", "convex", "peanuts", "mixed"};
    return names;
}

std::vector<NamedCurve> make_family(const std::string &family, std::size_t count, std::uint64_t seed,
                                    std::size_t n) {
    if (std::find(family_names().begin(), family_names().end(), family) == family_names().end())
        throw std::invalid_argument("unknown family \"" + family + "\"");
    const std::size_t m = dense_size(n);
    std::vector<NamedCurve> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = sample_seed(seed, i);
        std::string kind = family;
        if (family == "mixed") {
            static const char *cycle[] = {"perturbed-circles", "convex", "peanuts", "circles"};
            kind = cycle[i % 4];
        }
        if (kind == "circles") {
            auto rng = rng_for(s);
            const double r = std::exp(std::uniform_real_distribution<double>(std::log(0.25), std::log(4.0))(rng));
            out.push_back({"circle-" + std::to_string(i), circle(r, n)});
        } else if (kind == "perturbed-circles") {
            out.push_back({"perturbed-circle-" + std::to_string(s), angle_from_points(perturbed_circle_points(s, m), n)});
        } else if (kind == "convex") {
            if (i % 2 == 0)
                out.push_back({"oval-" + std::to_string(s), angle_from_points(oval_points(s, m), n)});
            else
                out.push_back({"polygon-smooth-" + std::to_string(s), angle_from_points(rounded_polygon_points(s, m), n)});
        } else {
            auto rng = rng_for(s);
            const double amp = std::uniform_real_distribution<double>(0.3, 0.7)(rng);
            out.push_back({"peanut-" + std::to_string(s), angle_from_points(peanut_points(amp, 2, m), n)});
        }
    }
    return out;
}

}  // namespace pelastic::gen
