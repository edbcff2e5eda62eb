#include "dacsurv/partial_likelihood.hpp"

#include <cmath>
#include <numeric>

#include "dacsurv/common.hpp"

namespace dacsurv {

namespace detail {

PLDerivatives pl_derivatives_impl(const SurvivalDataset& data,
                                  const Eigen::VectorXd& beta, DerivOrder order,
                                  bool use_entry_removal) {
  const int p = data.p();
  if (static_cast<int>(beta.size()) != p)
    throw DataError("pl_derivatives: beta has length " + std::to_string(beta.size()) +
                    ", expected " + std::to_string(p));
  if (!beta.allFinite()) throw DataError("pl_derivatives: beta must be finite");

  const std::int64_t n = data.n_rows();
  const bool want_score = order >= DerivOrder::gradient;
  const bool want_info = order >= DerivOrder::hessian;

  Eigen::VectorXd eta = data.covariates() * beta;
  if (eta.cwiseAbs().maxCoeff() > 700.0)
    throw NumericalError("linear predictor overflow");
  const double shift = eta.maxCoeff();
  Eigen::ArrayXd w = (eta.array() - shift).exp();

  // Rows leave the risk set in start-descending order. The dataset caches
  // this order when any start is positive; build it locally if the general
  // path is forced on start=0 data.
  const std::vector<std::int64_t>* removal = &data.start_desc_order();
  std::vector<std::int64_t> local_removal;
  if (use_entry_removal && removal->empty()) {
    local_removal.resize(n);
    std::iota(local_removal.begin(), local_removal.end(), std::int64_t{0});
    std::stable_sort(local_removal.begin(), local_removal.end(),
                     [&](std::int64_t a, std::int64_t b) {
                       return data.starts()[a] > data.starts()[b];
                     });
    removal = &local_removal;
  }

  double s0 = 0.0;
  Eigen::VectorXd s1;
  Eigen::MatrixXd s2;
  if (want_score) s1 = Eigen::VectorXd::Zero(p);
  if (want_info) s2 = Eigen::MatrixXd::Zero(p, p);

  PLDerivatives out;
  out.n_omega = data.n_subjects();
  if (want_score) out.score = Eigen::VectorXd::Zero(p);
  if (want_info) out.info = Eigen::MatrixXd::Zero(p, p);

  const auto& stops = data.stops();
  const auto& starts = data.starts();
  const auto& events = data.events();
  const auto& z = data.covariates();

  double loglik = 0.0;
  Eigen::VectorXd zbar(want_score ? p : 0);
  std::int64_t add_ptr = 0, rem_ptr = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (!events[i]) continue;
    const double t = stops[i];

    while (add_ptr < n && stops[add_ptr] >= t) {
      const double wi = w[add_ptr];
      s0 += wi;
      if (want_score) s1.noalias() += wi * z.row(add_ptr).transpose();
      if (want_info)
        s2.selfadjointView<Eigen::Lower>().rankUpdate(z.row(add_ptr).transpose(), wi);
      ++add_ptr;
    }
    if (use_entry_removal) {
      while (rem_ptr < n && starts[(*removal)[rem_ptr]] >= t) {
        const std::int64_t r = (*removal)[rem_ptr];
        const double wr = w[r];
        s0 -= wr;
        if (want_score) s1.noalias() -= wr * z.row(r).transpose();
        if (want_info)
          s2.selfadjointView<Eigen::Lower>().rankUpdate(z.row(r).transpose(), -wr);
        ++rem_ptr;
      }
    }

    loglik += eta[i] - shift - std::log(s0);
    if (want_score) {
      zbar = s1 / s0;
      out.score.noalias() += z.row(i).transpose() - zbar;
    }
    if (want_info) {
      out.info.triangularView<Eigen::Lower>() += s2 * (1.0 / s0);
      out.info.selfadjointView<Eigen::Lower>().rankUpdate(zbar, -1.0);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(out.n_omega);
  out.loglik = loglik * inv_n;
  if (want_score) out.score *= inv_n;
  if (want_info) {
    out.info *= inv_n;
    out.info = out.info.selfadjointView<Eigen::Lower>();  // exact symmetrization
  }
  return out;
}

}  // namespace detail

PLDerivatives pl_derivatives(const SurvivalDataset& data, const Eigen::VectorXd& beta,
                             DerivOrder order) {
  return detail::pl_derivatives_impl(data, beta, order, data.has_entry_times());
}

}  // namespace dacsurv
