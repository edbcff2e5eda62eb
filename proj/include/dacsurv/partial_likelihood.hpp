#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "dacsurv/data_model.hpp"

namespace dacsurv {

enum class DerivOrder : int { value = 0, gradient = 1, hessian = 2 };

// Log partial likelihood and its derivatives at a given beta, all scaled as
// per-subject averages so that shard-level quantities combine by plain
// averaging. info is the negative Hessian, symmetrized on output.
struct PLDerivatives {
  double loglik = 0.0;
  Eigen::VectorXd score;  // filled when order >= gradient
  Eigen::MatrixXd info;   // filled when order >= hessian
  std::int64_t n_omega = 0;
};

// Single descending-time sweep with running risk-set sums of exp(beta'Z),
// Z exp(beta'Z) and ZZ' exp(beta'Z): O(n p^2) after sorting. The risk set at
// an event time t is the rows with start < t <= stop; tied event times share
// one denominator (Breslow). Linear predictors are centered by their maximum
// before exponentiation.
//
// Throws NumericalError("linear predictor overflow") when |beta'Z| > 700.
PLDerivatives pl_derivatives(const SurvivalDataset& data, const Eigen::VectorXd& beta,
                             DerivOrder order = DerivOrder::hessian);

namespace detail {

// use_entry_removal selects the general counting-process sweep (rows leave
// the risk set when t drops past their start). The time-independent
// specialization skips the removal scan; on start=0 data both paths perform
// the identical arithmetic and agree bitwise.
PLDerivatives pl_derivatives_impl(const SurvivalDataset& data,
                                  const Eigen::VectorXd& beta, DerivOrder order,
                                  bool use_entry_removal);

}  // namespace detail

}  // namespace dacsurv
