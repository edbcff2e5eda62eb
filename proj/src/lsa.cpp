#include "dacsurv/lsa.hpp"

#include <cmath>
#include <limits>

#include "dacsurv/common.hpp"

namespace dacsurv {

namespace {

constexpr double kCdTol = 1e-10;
constexpr int kCdMaxSweeps = 10000;
constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

Eigen::MatrixXd matrix_sqrt_spd(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DataError("matrix_sqrt_spd: matrix not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw DataError("matrix_sqrt_spd: input not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success)
    throw NumericalError("matrix_sqrt_spd: eigendecomposition failed");

  Eigen::VectorXd eigenvalues = es.eigenvalues();
  if (eigenvalues.minCoeff() < -1e-10 * scale)
    throw DataError("matrix_sqrt_spd: input not positive semidefinite");
  eigenvalues = eigenvalues.cwiseMax(0.0).cwiseSqrt();

  Eigen::MatrixXd root =
      es.eigenvectors() * eigenvalues.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

LsaProblem build_lsa_problem(const Eigen::VectorXd& beta_tilde,
                             const Eigen::MatrixXd& info, std::int64_t n0,
                             std::int64_t d0, double gamma) {
  if (info.rows() != beta_tilde.size())
    throw DataError("build_lsa_problem: dimension mismatch");
  if (gamma <= 0.0) throw DataError("build_lsa_problem: gamma must be positive");
  if (n0 < 1 || d0 < 1) throw DataError("build_lsa_problem: need n0 >= 1 and d0 >= 1");

  LsaProblem problem;
  problem.x0 = matrix_sqrt_spd(info);
  problem.beta_tilde = beta_tilde;
  problem.y0 = problem.x0 * beta_tilde;
  problem.gamma = gamma;
  problem.n0 = n0;
  problem.d0 = d0;
  problem.weights.resize(beta_tilde.size());
  for (Eigen::Index j = 0; j < beta_tilde.size(); ++j)
    problem.weights[j] =
        beta_tilde[j] == 0.0 ? kInf : std::pow(std::fabs(beta_tilde[j]), -gamma);
  return problem;
}

LsaProblem build_lsa_problem(const DacUnpenalized& fit, double gamma) {
  return build_lsa_problem(fit.beta_tilde, fit.info_dac, fit.n0, fit.d0, gamma);
}

Eigen::VectorXd solve_weighted_lasso(const LsaProblem& problem, double lambda,
                                     const std::optional<Eigen::VectorXd>& init) {
  const Eigen::Index p = problem.x0.cols();
  if (lambda < 0.0) throw DataError("solve_weighted_lasso: lambda must be >= 0");

  Eigen::VectorXd beta = init.value_or(problem.beta_tilde);
  if (beta.size() != p) throw DataError("solve_weighted_lasso: init has wrong length");
  for (Eigen::Index j = 0; j < p; ++j)
    if (problem.weights[j] == kInf) beta[j] = 0.0;

  Eigen::VectorXd col_norms(p);
  for (Eigen::Index j = 0; j < p; ++j) col_norms[j] = problem.x0.col(j).squaredNorm();

  // Residual tracking: res = y0 - x0 beta, updated incrementally per
  // coordinate change.
  Eigen::VectorXd residual = problem.y0 - problem.x0 * beta;

  for (int sweep = 0; sweep < kCdMaxSweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (problem.weights[j] == kInf || col_norms[j] <= 0.0) continue;
      const double z = beta[j] + problem.x0.col(j).dot(residual) / col_norms[j];
      const double updated =
          soft_threshold(z, lambda * problem.weights[j] / col_norms[j]);
      if (updated != beta[j]) {
        residual.noalias() += problem.x0.col(j) * (beta[j] - updated);
        max_change = std::max(max_change, std::fabs(updated - beta[j]));
        beta[j] = updated;
      }
    }
    if (max_change <= kCdTol) return beta;
  }
  throw NumericalError("solve_weighted_lasso: coordinate descent did not converge");
}

double kkt_violation(const LsaProblem& problem, double lambda,
                     const Eigen::VectorXd& beta) {
  const Eigen::VectorXd grad =
      problem.x0.transpose() * (problem.x0 * beta - problem.y0);
  double violation = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (problem.weights[j] == kInf) {
      violation = std::max(violation, std::fabs(beta[j]) > 0.0 ? kInf : 0.0);
    } else if (beta[j] == 0.0) {
      violation = std::max(violation, std::fabs(grad[j]) - lambda * problem.weights[j]);
    } else {
      violation = std::max(
          violation, std::fabs(grad[j] + lambda * problem.weights[j] *
                                             (beta[j] > 0.0 ? 1.0 : -1.0)));
    }
  }
  return std::max(violation, 0.0);
}

PathResult fit_lsa_path(const LsaProblem& problem, const PathConfig& config) {
  if (config.n_lambda < 1) throw DataError("fit_lsa_path: n_lambda must be >= 1");
  if (!(config.lambda_min_ratio > 0.0 && config.lambda_min_ratio < 1.0))
    throw DataError("fit_lsa_path: lambda_min_ratio must be in (0,1)");

  // Smallest lambda that zeroes every (included) coordinate:
  // max_j |(x0' y0)_j| / w_j.
  const Eigen::VectorXd c = problem.x0.transpose() * problem.y0;
  double lambda_max = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (problem.weights[j] != kInf)
      lambda_max = std::max(lambda_max, std::fabs(c[j]) / problem.weights[j]);
  if (lambda_max <= 0.0)
    throw NumericalError("fit_lsa_path: degenerate problem, no active candidates");

  PathResult path;
  path.lambdas.resize(config.n_lambda);
  const double log_max = std::log(lambda_max);
  const double log_step =
      config.n_lambda > 1
          ? std::log(config.lambda_min_ratio) / (config.n_lambda - 1)
          : 0.0;
  for (int i = 0; i < config.n_lambda; ++i)
    path.lambdas[i] = std::exp(log_max + log_step * i);
  path.lambdas[0] = lambda_max;  // exact boundary: the all-zero solution

  const double log_d0 = std::log(static_cast<double>(problem.d0));
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(problem.x0.cols());
  path.betas.reserve(config.n_lambda);
  for (int i = 0; i < config.n_lambda; ++i) {
    warm = solve_weighted_lasso(problem, path.lambdas[i], warm);
    const int df = static_cast<int>((warm.array() != 0.0).count());
    const double quad =
        (problem.y0 - problem.x0 * warm).squaredNorm() * static_cast<double>(problem.n0);
    path.betas.push_back(warm);
    path.dfs.push_back(df);
    path.bics.push_back(quad + log_d0 * df);
  }

  // Ties go to the larger lambda (earlier index), preferring sparsity.
  path.selected_index = 0;
  for (int i = 1; i < config.n_lambda; ++i)
    if (path.bics[i] < path.bics[path.selected_index]) path.selected_index = i;
  return path;
}

}  // namespace dacsurv
