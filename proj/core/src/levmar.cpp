#include "rydat/levmar.hpp"

#include <cmath>

#include "rydat/errors.hpp"

namespace rydat {

namespace {

double scale_for(const LevMarOptions& opt, const Eigen::VectorXd& p, int j) {
    const double floor = (opt.parameter_scales.size() > j && opt.parameter_scales[j] > 0)
                             ? opt.parameter_scales[j]
                             : 1.0;
    return std::max(std::abs(p[j]), floor);
}

// Covariance through an eigendecomposition so degenerate directions produce
// large but finite errors instead of exploding the whole matrix.
Eigen::MatrixXd covariance_from_normal_matrix(const Eigen::MatrixXd& jtj, double chi2_red) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj);
    const auto& vals = eig.eigenvalues();
    const double vmax = vals.cwiseAbs().maxCoeff();
    const double cutoff = std::max(vmax, 1e-300) * 1e-12;
    Eigen::VectorXd inv(vals.size());
    for (int i = 0; i < vals.size(); ++i)
        inv[i] = 1.0 / std::max(vals[i], cutoff);
    const double scale = chi2_red > 0 ? chi2_red : 1.0;
    return scale * eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace

LevMarResult levmar_fit(const ResidualFn& residuals, Eigen::VectorXd p,
                        const LevMarOptions& opt) {
    LevMarResult result;
    const int np = static_cast<int>(p.size());
    if (np == 0) throw ConfigError("levmar_fit needs at least one parameter");

    Eigen::VectorXd r = residuals(p);
    ++result.residual_evaluations;
    const long nr = r.size();
    if (nr < np) throw InsufficientDataError("fewer residuals than parameters");
    double cost = r.squaredNorm();

    double lambda = opt.initial_lambda;
    Eigen::MatrixXd jacobian(nr, np);
    std::string stop_reason = "iteration cap reached";
    bool converged = false;

    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        // forward-difference Jacobian at the current point
        for (int j = 0; j < np; ++j) {
            const double step = opt.jacobian_relative_step * scale_for(opt, p, j);
            Eigen::VectorXd pj = p;
            pj[j] += step;
            jacobian.col(j) = (residuals(pj) - r) / step;
            ++result.residual_evaluations;
        }
        const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
        const Eigen::VectorXd grad = jacobian.transpose() * r;

        bool accepted = false;
        while (lambda < 1e14) {
            Eigen::MatrixXd damped = jtj;
            for (int j = 0; j < np; ++j)
                damped(j, j) += lambda * std::max(jtj(j, j), 1e-30);
            const Eigen::VectorXd delta = damped.ldlt().solve(-grad);

            const Eigen::VectorXd p_try = p + delta;
            const Eigen::VectorXd r_try = residuals(p_try);
            ++result.residual_evaluations;
            const double cost_try = r_try.squaredNorm();

            if (std::isfinite(cost_try) && cost_try <= cost) {
                double step_norm = 0.0;
                for (int j = 0; j < np; ++j) {
                    const double s = delta[j] / scale_for(opt, p, j);
                    step_norm += s * s;
                }
                step_norm = std::sqrt(step_norm);
                const double decrease = (cost - cost_try) / std::max(cost, 1e-300);

                p = p_try;
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;

                if (decrease < opt.relative_cost_tolerance) {
                    converged = true;
                    stop_reason = "relative cost decrease below tolerance";
                } else if (step_norm < opt.step_tolerance) {
                    converged = true;
                    stop_reason = "step norm below tolerance";
                }
                break;
            }
            lambda *= 10.0;
        }

        if (!accepted) {
            // no damping makes progress: we are at a numerical minimum
            converged = true;
            stop_reason = "no further cost reduction possible";
        }
        if (converged) {
            ++iter;
            break;
        }
    }

    // curvature at the optimum for the reported errors
    for (int j = 0; j < np; ++j) {
        const double step = opt.jacobian_relative_step * scale_for(opt, p, j);
        Eigen::VectorXd pj = p;
        pj[j] += step;
        jacobian.col(j) = (residuals(pj) - r) / step;
        ++result.residual_evaluations;
    }
    const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
    const double dof = static_cast<double>(nr - np);
    result.chi2 = cost;
    result.chi2_reduced = dof > 0 ? cost / dof : 0.0;
    result.covariance = covariance_from_normal_matrix(jtj, result.chi2_reduced);
    result.standard_errors = result.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    result.parameters = p;
    result.iterations = iter;
    result.converged = converged;
    result.message = stop_reason;
    return result;
}

} // namespace rydat
