#include "dacsurv/mple.hpp"

#include <cmath>
#include <limits>

#include "dacsurv/common.hpp"

namespace dacsurv {

namespace {

// Newton direction from the (negative Hessian) information matrix.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& info,
                                 const Eigen::VectorXd& score, double ridge) {
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() == Eigen::Success) return llt.solve(score);
  Eigen::MatrixXd ridged = info;
  ridged.diagonal().array() += ridge;
  llt.compute(ridged);
  if (llt.info() == Eigen::Success) return llt.solve(score);
  throw NumericalError(
      "fit_mple: singular information matrix (possible separation or collinearity)");
}

}  // namespace

MpleFit fit_mple(const SurvivalDataset& data, const NewtonConfig& config,
                 const std::optional<Eigen::VectorXd>& init) {
  if (config.max_iter <= 0 || config.grad_tol <= 0.0 ||
      config.step_halving_max <= 0 || config.ridge_fallback <= 0.0)
    throw DataError("fit_mple: NewtonConfig fields must be positive");
  if (data.d0() < 1) throw DataError("fit_mple: dataset has no events");

  MpleFit fit;
  fit.beta = init.value_or(Eigen::VectorXd::Zero(data.p()));
  if (static_cast<int>(fit.beta.size()) != data.p())
    throw DataError("fit_mple: init has wrong length");
  fit.derivs = pl_derivatives(data, fit.beta, DerivOrder::hessian);

  for (int iter = 0; iter < config.max_iter; ++iter) {
    if (fit.derivs.score.cwiseAbs().maxCoeff() <= config.grad_tol) return fit;

    const Eigen::VectorXd direction =
        newton_direction(fit.derivs.info, fit.derivs.score, config.ridge_fallback);

    // Backtrack on the full Newton step until the log likelihood does not
    // decrease; an overflowing trial step counts as a decrease. The slack
    // admits ties at floating-point resolution, where quadratic convergence
    // makes the true improvement smaller than the rounding noise of loglik.
    const double slack = 1e-13 * (1.0 + std::fabs(fit.derivs.loglik));
    bool accepted = false;
    double step = 1.0;
    for (int h = 0; h <= config.step_halving_max; ++h, step *= 0.5) {
      const Eigen::VectorXd candidate = fit.beta + step * direction;
      PLDerivatives trial;
      try {
        trial = pl_derivatives(data, candidate, DerivOrder::hessian);
      } catch (const NumericalError&) {
        continue;
      }
      if (trial.loglik >= fit.derivs.loglik - slack) {
        fit.beta = candidate;
        fit.derivs = std::move(trial);
        fit.iterations = iter + 1;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NumericalError("fit_mple: step halving failed to improve the likelihood");
  }

  if (fit.derivs.score.cwiseAbs().maxCoeff() <= config.grad_tol) return fit;
  throw NumericalError("fit_mple: no convergence after " +
                       std::to_string(config.max_iter) + " iterations");
}

}  // namespace dacsurv
