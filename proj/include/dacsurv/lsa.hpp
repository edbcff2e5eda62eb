#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "dacsurv/dac.hpp"

namespace dacsurv {

// Quadratic surrogate for the penalized partial likelihood: the weighted
// lasso problem  min 1/2 ||y0 - x0 b||^2 + lambda sum_j w_j |b_j|  with
// x0 = info^{1/2} and y0 = x0 beta_tilde. A coordinate with beta_tilde
// exactly zero gets weight +inf and is excluded from the path.
struct LsaProblem {
  Eigen::MatrixXd x0;
  Eigen::VectorXd y0;
  Eigen::VectorXd beta_tilde;
  Eigen::VectorXd weights;  // |beta_tilde_j|^{-gamma}, +inf excludes
  double gamma = 1.0;
  std::int64_t n0 = 0;
  std::int64_t d0 = 0;
};

// Unique symmetric PSD square root via spectral decomposition. Eigenvalues in
// [-1e-10, 0) are clamped to zero; asymmetry or more negative eigenvalues are
// errors.
Eigen::MatrixXd matrix_sqrt_spd(const Eigen::MatrixXd& a);

LsaProblem build_lsa_problem(const Eigen::VectorXd& beta_tilde,
                             const Eigen::MatrixXd& info, std::int64_t n0,
                             std::int64_t d0, double gamma = 1.0);
LsaProblem build_lsa_problem(const DacUnpenalized& fit, double gamma = 1.0);

// Cyclic coordinate descent with soft-thresholding; converged when the
// largest coordinate change in a sweep is <= 1e-10. init defaults to
// beta_tilde, which makes the lambda = 0 solve return beta_tilde exactly.
Eigen::VectorXd solve_weighted_lasso(const LsaProblem& problem, double lambda,
                                     const std::optional<Eigen::VectorXd>& init =
                                         std::nullopt);

// Largest KKT residual of the weighted lasso at beta: for zero coordinates
// the excess |grad_j| - lambda w_j, for active ones |grad_j + lambda w_j
// sign(b_j)|.
double kkt_violation(const LsaProblem& problem, double lambda,
                     const Eigen::VectorXd& beta);

struct PathConfig {
  int n_lambda = 100;
  double lambda_min_ratio = 1e-4;
};

struct PathResult {
  std::vector<double> lambdas;  // descending
  std::vector<Eigen::VectorXd> betas;
  std::vector<int> dfs;
  std::vector<double> bics;  // BIC with log(d0) df penalty through the surrogate
  int selected_index = 0;    // argmin of bics, ties resolved toward larger lambda
};

// Log-spaced path from lambda_max (all coordinates zero) down to
// lambda_max * lambda_min_ratio, warm-started along the way.
PathResult fit_lsa_path(const LsaProblem& problem, const PathConfig& config = {});

}  // namespace dacsurv
