#pragma once

// Minimization of F_p over AngleCurves at fixed enclosed area.
//
// Variables are the angle samples theta_0..theta_{N-1} and the length L, with
// theta_0 pinned and the total turn fixed at 2 pi. Closure (two equations) and
// the area are imposed as equality constraints through an augmented
// Lagrangian; each subproblem is solved by gradient descent with a
// Barzilai-Borwein initial step and Armijo backtracking.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pelastic/curve.hpp"

namespace pelastic {

struct OptimizerConfig {
    double p = 2.0;
    double target_area = kPi;
    int max_outer = 40;
    int max_inner = 200000;
    double penalty_init = 100.0;
    double penalty_growth = 10.0;
    double step_tol = 1e-15;
    double grad_tol = 1e-4;
    double constraint_tol = 1e-10;
    std::size_t n = 256;
    // accepted steps between self-intersection checks
    int simplicity_check_every = 500;

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

struct ObjectiveGradient {
    double value = 0.0;
    std::vector<double> d_theta;
    double d_length = 0.0;
};

// Discrete F_p as a function of (theta, L), turning number 1, and its exact
// gradient.
ObjectiveGradient objective_and_gradient(std::span<const double> theta, double length, double p);

struct ConstraintValues {
    // closure x, closure y, area - target
    std::array<double, 3> value{};
    std::array<std::vector<double>, 3> d_theta;
    std::array<double, 3> d_length{};
};

ConstraintValues constraints(std::span<const double> theta, double length, double target_area);

struct IterationRecord {
    int outer = 0;
    int inner = 0;
    double f_p = 0.0;
    double augmented = 0.0;
    double area_defect = 0.0;     // (A - target) / target
    double closure_defect = 0.0;  // (|c_x| + |c_y|) / L
    double grad_norm = 0.0;
    double q_p = 0.0;
};

struct ElFit {
    double alpha = 0.0;
    double residual = 0.0;
};

// Least-squares fit of kappa^p = alpha (gamma - centroid) . n over all
// vertices; residual is relative in the 2-norm. Signed powers are used for
// negative curvature. Throws std::invalid_argument when the support values
// vanish identically.
ElFit el_residual(const AngleCurve &curve, double p);

struct OptimizationResult {
    AngleCurve curve;
    std::vector<IterationRecord> history;
    double el_alpha = 0.0;
    double el_residual = 0.0;
    double circularity = 0.0;
    double q_p = 0.0;
    double f_p = 0.0;
    double area_defect = 0.0;
    double closure_defect = 0.0;
    double grad_norm = 0.0;
    int outer_iterations = 0;
    int inner_iterations = 0;
    bool converged = false;
    bool left_simple_class = false;
    bool convex = false;
    std::string message;
};

// Throws std::invalid_argument for turning != 1 or a bad config, and
// std::runtime_error if no step can be accepted from some iterate.
OptimizationResult minimize_Fp(const AngleCurve &initial, const OptimizerConfig &cfg);

}  // namespace pelastic
