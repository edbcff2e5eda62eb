#pragma once

// Independent reference implementations used only by the test suites. These
// deliberately avoid the library's sweep/descent code paths: risk sets are
// found by direct scans, derivatives by finite differences, and model
// selection by plain matrix arithmetic.

#include <Eigen/Dense>
#include <functional>

#include "dacsurv/data_model.hpp"
#include "dacsurv/lsa.hpp"
#include "dacsurv/partial_likelihood.hpp"
#include "dacsurv/rng.hpp"

namespace dacsurv::testing {

// Direct O(n^2) evaluation of the partial likelihood and its derivatives:
// for every event row, scan all rows for risk-set membership
// (start < t <= stop). No centering, no prefix sums.
PLDerivatives brute_force_pl(const SurvivalDataset& data, const Eigen::VectorXd& beta);

// Newton iteration driven entirely by brute_force_pl.
Eigen::VectorXd brute_force_newton(const SurvivalDataset& data, double grad_tol,
                                   int max_iter);

// Central finite differences.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h);
Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h);

// Full-data BIC with log(d0) degrees-of-freedom penalty, computed from the
// exact log partial likelihood rather than the quadratic surrogate.
double bic_exact(const SurvivalDataset& data, const Eigen::VectorXd& beta);

// Random test datasets. Time-independent when counting_process is false;
// otherwise one to four contiguous intervals per subject with
// interval-specific covariates. with_ties coarsens stop times to a grid
// (time-independent only).
SurvivalDataset random_dataset(SplitMix64& rng, std::int64_t n_subjects, int p,
                               bool counting_process, bool with_ties = false);

Eigen::VectorXd random_beta(SplitMix64& rng, int p, double scale);

// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf);

}  // namespace dacsurv::testing
