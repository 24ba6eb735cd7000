#include "pelastic/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pelastic/energy.hpp"
#include "pelastic/geometry.hpp"

namespace pelastic {

void OptimizerConfig::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be > 1");
    if (!(target_area > 0.0)) throw std::invalid_argument("target_area must be > 0");
    if (max_outer < 1 || max_inner < 1) throw std::invalid_argument("iteration caps must be >= 1");
    if (!(penalty_init > 0.0) || !(penalty_growth > 1.0))
        throw std::invalid_argument("penalty_init must be > 0 and penalty_growth > 1");
    if (!(step_tol > 0.0) || !(grad_tol > 0.0) || !(constraint_tol > 0.0))
        throw std::invalid_argument("tolerances must be > 0");
    if (n < kMinSamples) throw std::invalid_argument("N must be at least 8");
}

ObjectiveGradient objective_and_gradient(std::span<const double> theta, double length, double p) {
    const std::size_t n = theta.size();
    const double ds = length / static_cast<double>(n);
    // S = ds sum |kappa|^p = ds^(1-p) sum |d_i|^p, d_i = theta_{i+1} - theta_i
    std::vector<double> slope(n);  // p |d|^(p-1) sgn d
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double next = (i + 1 < n) ? theta[i + 1] : theta[0] + kTwoPi;
        const double d = next - theta[i];
        const double a = std::abs(d);
        sum += std::pow(a, p);
        const double m = a > 0.0 ? p * std::pow(a, p - 1.0) : 0.0;
        slope[i] = d < 0.0 ? -m : m;
    }
    const double scale = std::pow(ds, 1.0 - p);
    const double s_val = scale * sum;
    const double c = std::pow(0.5, 2.0 / p);

    ObjectiveGradient out;
    out.value = c * std::pow(s_val, 2.0 / p);
    const double df_ds = s_val > 0.0 ? c * (2.0 / p) * std::pow(s_val, 2.0 / p - 1.0) : 0.0;
    out.d_theta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double prev = slope[(j + n - 1) % n];
        out.d_theta[j] = df_ds * scale * (prev - slope[j]);
    }
    out.d_length = df_ds * (1.0 - p) * s_val / length;
    return out;
}

ConstraintValues constraints(std::span<const double> theta, double length, double target_area) {
    const std::size_t n = theta.size();
    const double ds = length / static_cast<double>(n);
    std::vector<double> co(n), si(n);
    for (std::size_t i = 0; i < n; ++i) {
        co[i] = std::cos(theta[i]);
        si[i] = std::sin(theta[i]);
    }

    ConstraintValues out;
    for (auto &row : out.d_theta) row.resize(n);

    double cx = 0.0, cy = 0.0, twice_area = 0.0;
    std::vector<double> below_c(n), below_s(n);  // running sums over j < i
    for (std::size_t i = 0; i < n; ++i) {
        below_c[i] = cx;
        below_s[i] = cy;
        twice_area += si[i] * cx - co[i] * cy;
        cx += co[i];
        cy += si[i];
    }
    const double area = 0.5 * ds * ds * twice_area;

    out.value = {ds * cx, ds * cy, area - target_area};
    for (std::size_t k = 0; k < n; ++k) {
        out.d_theta[0][k] = -ds * si[k];
        out.d_theta[1][k] = ds * co[k];
        // sum_{j<k} cos(t_k - t_j) - sum_{i>k} cos(t_i - t_k)
        const double lower = co[k] * below_c[k] + si[k] * below_s[k];
        const double upper_c = cx - below_c[k] - co[k];
        const double upper_s = cy - below_s[k] - si[k];
        const double upper = co[k] * upper_c + si[k] * upper_s;
        out.d_theta[2][k] = 0.5 * ds * ds * (lower - upper);
    }
    out.d_length = {cx / static_cast<double>(n), cy / static_cast<double>(n), 2.0 * area / length};
    return out;
}

ElFit el_residual(const AngleCurve &curve, double p) {
    if (curve.turning() != 1) throw std::invalid_argument("EL residual needs turning number 1");
    const std::size_t n = curve.size();
    const double ds = curve.step();
    std::vector<Vec2> pts(n);
    Vec2 cur;
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = cur;
        cur += ds * unit_vector(curve[i]);
    }
    const Vec2 center = centroid(PointCurve(pts));
    const std::vector<double> kappa = curvature(curve);

    double yh = 0.0, hh = 0.0, yy = 0.0;
    std::vector<double> y(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double next = (i + 1 < n) ? curve[i + 1] : curve[0] + kTwoPi;
        const Vec2 normal = perp(unit_vector(0.5 * (curve[i] + next)));
        h[i] = dot(pts[(i + 1) % n] - center, normal);
        const double mag = std::pow(std::abs(kappa[i]), p);
        y[i] = kappa[i] < 0.0 ? -mag : mag;
        yh += y[i] * h[i];
        hh += h[i] * h[i];
        yy += y[i] * y[i];
    }
    const double scale = curve.length() * curve.length() * static_cast<double>(n);
    if (!(hh > 1e-24 * scale)) throw std::invalid_argument("degenerate EL fit: support values vanish");
    ElFit fit;
    fit.alpha = yh / hh;
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.alpha * h[i];
        rr += r * r;
    }
    fit.residual = yy > 0.0 ? std::sqrt(rr / yy) : 0.0;
    return fit;
}

namespace {

// Scaled problem: variables x = (theta_0..theta_{n-1}, ell) with L = ell * L_ref,
// objective F / F_ref, constraints (c_x / L_ref, c_y / L_ref, c_A / a).
class AugmentedLagrangian {
public:
    static constexpr double kMaxPenalty = 1e10;

    AugmentedLagrangian(const OptimizerConfig &cfg, std::size_t n) : cfg_(cfg), n_(n) {
        length_ref_ = 2.0 * std::sqrt(kPi * cfg.target_area);
        // F_p of the circle with the target area
        f_ref_ = std::pow(kPi, 2.0 / cfg.p) * std::pow(length_ref_ / kTwoPi, 2.0 * (1.0 - cfg.p) / cfg.p);
    }

    struct Eval {
        double f = 0.0;          // F / F_ref
        double f_raw = 0.0;      // F
        double phi = 0.0;        // augmented objective
        std::array<double, 3> c{};
        std::vector<double> grad;          // of phi, theta_0 masked
        double area = 0.0;
    };

    Eval evaluate(std::span<const double> x) const {
        const std::span<const double> theta = x.first(n_);
        const double length = x[n_] * length_ref_;
        const ObjectiveGradient obj = objective_and_gradient(theta, length, cfg_.p);
        const ConstraintValues con = constraints(theta, length, cfg_.target_area);

        Eval e;
        e.f_raw = obj.value;
        e.f = obj.value / f_ref_;
        const std::array<double, 3> cscale{length_ref_, length_ref_, cfg_.target_area};
        std::array<double, 3> weight{};  // d phi / d c_k (scaled)
        e.phi = e.f;
        for (int k = 0; k < 3; ++k) {
            e.c[k] = con.value[k] / cscale[k];
            e.phi += -lambda_[k] * e.c[k] + 0.5 * mu_ * e.c[k] * e.c[k];
            weight[k] = (-lambda_[k] + mu_ * e.c[k]) / cscale[k];
        }
        e.area = con.value[2] + cfg_.target_area;

        e.grad.assign(n_ + 1, 0.0);
        for (std::size_t i = 1; i < n_; ++i) {
            const double df = obj.d_theta[i] / f_ref_;
            double g = df;
            for (int k = 0; k < 3; ++k) g += weight[k] * con.d_theta[k][i];
            e.grad[i] = g;
        }
        double gL = obj.d_length / f_ref_;
        for (int k = 0; k < 3; ++k) gL += weight[k] * con.d_length[k];
        e.grad[n_] = gL * length_ref_;
        return e;
    }

    struct Stationarity {
        std::array<double, 3> lambda{};
        std::vector<double> residual;  // grad f - J^T lambda, theta_0 masked
    };

    // First-order least-squares multipliers: argmin |grad f - J^T lambda|.
    Stationarity stationarity(std::span<const double> x) const {
        const std::span<const double> theta = x.first(n_);
        const double length = x[n_] * length_ref_;
        const ObjectiveGradient obj = objective_and_gradient(theta, length, cfg_.p);
        const ConstraintValues con = constraints(theta, length, cfg_.target_area);
        const std::array<double, 3> cscale{length_ref_, length_ref_, cfg_.target_area};

        auto jac = [&](int k, std::size_t i) {
            return i < n_ ? con.d_theta[k][i] / cscale[k] : con.d_length[k] * length_ref_ / cscale[k];
        };
        auto gf = [&](std::size_t i) {
            return i < n_ ? obj.d_theta[i] / f_ref_ : obj.d_length * length_ref_ / f_ref_;
        };
        double a[3][3] = {}, b[3] = {};
        for (std::size_t i = 1; i <= n_; ++i) {
            for (int r = 0; r < 3; ++r) {
                b[r] += jac(r, i) * gf(i);
                for (int c = 0; c < 3; ++c) a[r][c] += jac(r, i) * jac(c, i);
            }
        }
        // Cramer's rule on the 3x3 normal equations
        auto det3 = [](const double m[3][3]) {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        Stationarity out;
        const double det = det3(a);
        if (std::abs(det) > 1e-300) {
            for (int k = 0; k < 3; ++k) {
                double m[3][3];
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) m[r][c] = (c == k) ? b[r] : a[r][c];
                out.lambda[k] = det3(m) / det;
            }
        }
        out.residual.assign(n_ + 1, 0.0);
        for (std::size_t i = 1; i <= n_; ++i) {
            double r = gf(i);
            for (int k = 0; k < 3; ++k) r -= out.lambda[k] * jac(k, i);
            out.residual[i] = r;
        }
        return out;
    }

    void set_multipliers(const std::array<double, 3> &lambda) { lambda_ = lambda; }

    void update_multipliers(const std::array<double, 3> &c) {
        for (int k = 0; k < 3; ++k) lambda_[k] -= mu_ * c[k];
    }

    void grow_penalty() { mu_ = std::min(mu_ * cfg_.penalty_growth, kMaxPenalty); }
    void shrink_penalty() { mu_ = std::max(mu_ / cfg_.penalty_growth, cfg_.penalty_init); }
    void set_penalty(double mu) { mu_ = mu; }
    double length_ref() const { return length_ref_; }

private:
    const OptimizerConfig &cfg_;
    std::size_t n_;
    double length_ref_ = 1.0;
    double f_ref_ = 1.0;
    std::array<double, 3> lambda_{};
    double mu_ = 1.0;
};

double sup_norm(std::span<const double> g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

// Gradient measure comparable across N: the theta part is scaled by N so it
// approximates the sup norm of the functional derivative.
double grad_measure(std::span<const double> g, std::size_t n) {
    return std::max(static_cast<double>(n) * sup_norm(g.first(n)), std::abs(g[n]));
}

double dot_product(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool polyline_simple(std::span<const double> theta, double length) {
    const std::size_t n = theta.size();
    const double ds = length / static_cast<double>(n);
    std::vector<Vec2> pts(n);
    Vec2 cur;
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = cur;
        cur += ds * unit_vector(theta[i]);
    }
    return is_simple(pts);
}

}  // namespace

OptimizationResult minimize_Fp(const AngleCurve &initial, const OptimizerConfig &cfg) {
    cfg.validate();
    if (initial.turning() != 1) throw std::invalid_argument("initial curve must have turning number 1");

    // Resample onto the configured grid with theta_0 = 0.
    const std::size_t n = cfg.n;
    std::vector<double> theta =
        (initial.size() == n) ? std::vector<double>(initial.theta().begin(), initial.theta().end())
                              : resample_theta(initial, 0.0, initial.length(), n);
    const double shift = theta[0];
    for (double &t : theta) t -= shift;

    AugmentedLagrangian al(cfg, n);
    std::vector<double> x(n + 1);
    std::copy(theta.begin(), theta.end(), x.begin());
    // start from the length that matches the target area at the initial shape
    {
        AngleCurve start(initial.length(), theta, 1);
        const double a0 = area_gauss_green(start);
        const double length = a0 > 0.0 ? initial.length() * std::sqrt(cfg.target_area / a0) : initial.length();
        x[n] = length / al.length_ref();
    }

    OptimizationResult result{AngleCurve(initial.length(), theta, 1)};
    al.set_penalty(cfg.penalty_init);
    al.set_multipliers(al.stationarity(x).lambda);

    auto record = [&](int outer, int inner, const AugmentedLagrangian::Eval &e) {
        IterationRecord r;
        r.outer = outer;
        r.inner = inner;
        r.f_p = e.f_raw;
        r.augmented = e.phi;
        r.area_defect = e.c[2];
        r.closure_defect = (std::abs(e.c[0]) + std::abs(e.c[1])) / x[n];
        r.grad_norm = grad_measure(e.grad, n);
        r.q_p = std::pow(e.f_raw, cfg.p / (cfg.p - 1.0)) * e.area;
        result.history.push_back(r);
    };

    AugmentedLagrangian::Eval cur = al.evaluate(x);
    double prev_violation = std::numeric_limits<double>::infinity();
    double inner_tol = std::max(cfg.grad_tol, 1e-2);
    int total_inner = 0;
    int accepted_since_check = 0;
    std::vector<double> trial(n + 1), prev_x, prev_g;

    for (int outer = 1; outer <= cfg.max_outer; ++outer) {
        result.outer_iterations = outer;
        cur = al.evaluate(x);
        record(outer, 0, cur);
        prev_x.clear();
        prev_g.clear();
        double step = 1e-3;

        for (int inner = 1; inner <= cfg.max_inner; ++inner) {
            const double gnorm = grad_measure(cur.grad, n);
            if (gnorm <= inner_tol) break;

            if (!prev_x.empty()) {
                double ss = 0.0, sy = 0.0;
                for (std::size_t i = 0; i <= n; ++i) {
                    const double s = x[i] - prev_x[i];
                    const double y = cur.grad[i] - prev_g[i];
                    ss += s * s;
                    sy += s * y;
                }
                if (sy > 0.0) step = std::clamp(ss / sy, 1e-12, 1e6);
                else step = std::min(step * 4.0, 1e6);
            }

            const double gg = dot_product(cur.grad, cur.grad);
            bool accepted = false;
            AugmentedLagrangian::Eval next;
            while (step * std::sqrt(gg) > cfg.step_tol) {
                for (std::size_t i = 0; i <= n; ++i) trial[i] = x[i] - step * cur.grad[i];
                if (trial[n] > 0.0) {
                    next = al.evaluate(trial);
                    const bool finite = std::isfinite(next.phi);
                    const bool pinched = next.area < 0.5 * cfg.target_area;
                    if (finite && !pinched && next.phi <= cur.phi - 1e-4 * step * gg) {
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!accepted) {
                if (inner == 1 && outer == 1 && total_inner == 0) {
                    std::ostringstream msg;
                    msg << "line search failed at the initial iterate (gradient measure " << gnorm << ")";
                    throw std::runtime_error(msg.str());
                }
                break;  // stalled at floating-point resolution
            }
            prev_x = x;
            prev_g = cur.grad;
            x = trial;
            cur = std::move(next);
            ++total_inner;
            record(outer, inner, cur);

            if (++accepted_since_check >= cfg.simplicity_check_every) {
                accepted_since_check = 0;
                if (!polyline_simple(std::span<const double>(x).first(n), x[n] * al.length_ref()))
                    result.left_simple_class = true;
            }
        }

        const double violation = std::max({std::abs(cur.c[0]), std::abs(cur.c[1]), std::abs(cur.c[2])});
        const double lagrange_norm = grad_measure(al.stationarity(x).residual, n);
        if (violation <= cfg.constraint_tol && lagrange_norm <= cfg.grad_tol) {
            result.converged = true;
            break;
        }
        // At a feasible point rho * c is rounding noise times a large penalty,
        // and a large penalty leaves steps too short to register in phi.
        if (violation <= cfg.constraint_tol) {
            al.set_multipliers(al.stationarity(x).lambda);
            al.shrink_penalty();
        } else {
            al.update_multipliers(cur.c);
        }
        if (violation > cfg.constraint_tol && violation > 0.5 * prev_violation) al.grow_penalty();
        prev_violation = violation;
        inner_tol = std::max(cfg.grad_tol, 0.1 * inner_tol);
        cur = al.evaluate(x);
    }

    const double length = x[n] * al.length_ref();
    std::vector<double> final_theta(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    result.curve = AngleCurve(length, std::move(final_theta), 1);
    result.inner_iterations = total_inner;
    cur = al.evaluate(x);
    result.f_p = cur.f_raw;
    result.area_defect = cur.c[2];
    result.closure_defect = closure_defect(result.curve) / length;
    result.grad_norm = grad_measure(al.stationarity(x).residual, n);
    result.q_p = quotient_Qp(result.curve, cfg.p);
    result.circularity = circularity(result.curve);
    const ElFit fit = el_residual(result.curve, cfg.p);
    result.el_alpha = fit.alpha;
    result.el_residual = fit.residual;
    result.convex = is_convex(result.curve);
    if (!polyline_simple(result.curve.theta(), length)) result.left_simple_class = true;
    result.message = result.converged ? "converged" : "iteration limit reached before convergence";
    return result;
}

}  // namespace pelastic
