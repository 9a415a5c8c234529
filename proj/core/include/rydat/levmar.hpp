#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace rydat {

/// Damped least squares (Levenberg-Marquardt) with a numerically differenced
/// Jacobian. The caller's residual function should already fold in any
/// per-point weights; parameter transforms (log for positive quantities) are
/// the caller's business too.
struct LevMarOptions {
    int max_iterations = 200;
    double relative_cost_tolerance = 1e-10;
    double step_tolerance = 1e-8;          // scaled step norm
    double jacobian_relative_step = 1e-6;
    double initial_lambda = 1e-3;
    /// Per-parameter magnitude floors used for difference steps and the step
    /// norm; empty means a floor of 1 for every parameter.
    Eigen::VectorXd parameter_scales;
};

struct LevMarResult {
    Eigen::VectorXd parameters;
    Eigen::VectorXd standard_errors;  // sqrt(diag(covariance))
    Eigen::MatrixXd covariance;       // (JᵀJ)⁻¹ scaled by reduced chi-squared
    double chi2 = 0.0;
    double chi2_reduced = 0.0;
    int iterations = 0;
    long residual_evaluations = 0;
    bool converged = false;
    std::string message;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

LevMarResult levmar_fit(const ResidualFn& residuals, Eigen::VectorXd initial,
                        const LevMarOptions& options = {});

} // namespace rydat
