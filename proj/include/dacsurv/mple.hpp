#pragma once

#include <Eigen/Dense>
#include <optional>

#include "dacsurv/partial_likelihood.hpp"

namespace dacsurv {

struct NewtonConfig {
  int max_iter = 100;
  double grad_tol = 1e-9;      // converged when ||score||_inf <= grad_tol
  int step_halving_max = 20;
  double ridge_fallback = 1e-8;
};

struct MpleFit {
  Eigen::VectorXd beta;
  PLDerivatives derivs;  // evaluated at the final beta
  int iterations = 0;    // accepted Newton updates
};

// Newton-Raphson maximizer of the unpenalized partial likelihood with step
// halving; the accepted log-likelihood sequence is non-decreasing. The Newton
// direction is solved by Cholesky of the information matrix; on factorization
// failure a ridge of ridge_fallback * I is added and the solve retried once
// before signalling separation/collinearity.
MpleFit fit_mple(const SurvivalDataset& data, const NewtonConfig& config = {},
                 const std::optional<Eigen::VectorXd>& init = std::nullopt);

}  // namespace dacsurv
