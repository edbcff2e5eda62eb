#include "dacsurv/simgen.hpp"

#include <cmath>

#include "dacsurv/rng.hpp"
#include "dacsurv/stats.hpp"

namespace dacsurv {

Scenario scenario_from_string(const std::string& name) {
  if (name == "I") return Scenario::I;
  if (name == "II") return Scenario::II;
  if (name == "III") return Scenario::III;
  if (name == "IV") return Scenario::IV;
  throw DataError("unknown scenario '" + name + "' (expected I, II, III or IV)");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::I: return "I";
    case Scenario::II: return "II";
    case Scenario::III: return "III";
    case Scenario::IV: return "IV";
  }
  throw DataError("invalid scenario");
}

namespace {

Eigen::VectorXd repeat_pattern(const std::vector<std::pair<double, int>>& blocks,
                               int p) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  int j = 0;
  for (const auto& [value, count] : blocks)
    for (int r = 0; r < count; ++r) beta[j++] = value;
  return beta;
}

TrueBeta with_active_set(Eigen::VectorXd values) {
  TrueBeta tb;
  tb.values = std::move(values);
  for (Eigen::Index j = 0; j < tb.values.size(); ++j)
    if (tb.values[j] != 0.0) tb.active_set.push_back(static_cast<int>(j));
  return tb;
}

double standard_normal(SplitMix64& rng) { return normal_quantile(rng.uniform01()); }
double standard_exponential(SplitMix64& rng) { return -std::log(rng.uniform01()); }

void check_common(const ScenarioConfig& config) {
  if (config.n0 < 2) throw DataError("scenario config: n0 must be >= 2");
  if (!(config.v >= 0.0 && config.v < 1.0))
    throw DataError("scenario config: v must be in [0,1)");
}

}  // namespace

TrueBeta true_beta(Scenario scenario, int p) {
  switch (scenario) {
    case Scenario::I:
      if (p < 9) throw DataError("scenario I needs p >= 9");
      return with_active_set(repeat_pattern({{0.8, 3}, {0.4, 3}, {0.2, 3}}, p));
    case Scenario::II:
      if (p < 16) throw DataError("scenario II needs p >= 16");
      return with_active_set(
          repeat_pattern({{0.4, 4}, {0.2, 4}, {0.1, 4}, {0.05, 4}}, p));
    case Scenario::III:
      if (p < 11) throw DataError("scenario III needs p >= 11");
      return with_active_set(repeat_pattern(
          {{1.0, 1}, {0.5, 1}, {0.2, 2}, {0.1, 2}, {0.05, 2}, {0.035, 3}}, p));
    case Scenario::IV:
      throw DataError("scenario IV uses true_beta_time_dependent(p_ind, p_dep)");
  }
  throw DataError("invalid scenario");
}

TrueBeta true_beta_time_dependent(int p_ind, int p_dep) {
  if (p_ind < 9 || p_dep < 9)
    throw DataError("scenario IV needs p_ind >= 9 and p_dep >= 9");
  Eigen::VectorXd beta(p_ind + p_dep);
  beta.head(p_ind) = repeat_pattern({{0.08, 3}, {0.04, 3}, {0.02, 3}}, p_ind);
  beta.tail(p_dep) = repeat_pattern({{0.08, 3}, {0.04, 3}, {0.02, 3}}, p_dep);
  return with_active_set(std::move(beta));
}

TrueBeta true_beta(const ScenarioConfig& config) {
  if (config.scenario == Scenario::IV)
    return true_beta_time_dependent(config.p_ind, config.p_dep);
  return true_beta(config.scenario, config.p);
}

SurvivalDataset gen_time_independent(
    const ScenarioConfig& config, const std::optional<Eigen::VectorXd>& beta_override) {
  check_common(config);
  if (config.scenario == Scenario::IV)
    throw DataError("gen_time_independent: scenario IV is time-dependent");

  const Eigen::VectorXd beta =
      beta_override ? *beta_override : true_beta(config).values;
  const int p = config.p;
  if (static_cast<int>(beta.size()) != p)
    throw DataError("gen_time_independent: beta override has wrong length");

  const double sq1mv = std::sqrt(1.0 - config.v);
  const double sqv = std::sqrt(config.v);
  const double censor_scale = std::exp(-0.5);  // 1 / rate

  std::vector<SurvivalRecord> records;
  records.reserve(config.n0);
  Eigen::VectorXd z(p);
  for (std::int64_t i = 0; i < config.n0; ++i) {
    // Per-subject stream, fixed draw order: shared factor, p covariate
    // normals, event exponential, censoring exponential.
    SplitMix64 rng = derive_stream(config.seed, static_cast<std::uint64_t>(i));
    const double shared = sqv * standard_normal(rng);
    for (int j = 0; j < p; ++j) z[j] = sq1mv * standard_normal(rng) + shared;

    const double rate = 0.5 * std::exp(beta.dot(z));
    const double t = std::sqrt(standard_exponential(rng) / rate);
    const double c = standard_exponential(rng) * censor_scale;

    SurvivalRecord r;
    r.subject_id = i;
    r.start = 0.0;
    r.stop = std::min(t, c);
    r.event = t <= c;
    r.covariates = z;
    records.push_back(std::move(r));
  }
  return validate_dataset(std::move(records));
}

SurvivalDataset gen_time_dependent(
    const ScenarioConfig& config, const std::optional<Eigen::VectorXd>& beta_override) {
  check_common(config);
  if (config.scenario != Scenario::IV)
    throw DataError("gen_time_dependent: only scenario IV is time-dependent");

  const Eigen::VectorXd beta =
      beta_override ? *beta_override : true_beta(config).values;
  const int p_ind = config.p_ind;
  const int p_dep = config.p_dep;
  if (static_cast<int>(beta.size()) != p_ind + p_dep)
    throw DataError("gen_time_dependent: beta override has wrong length");

  constexpr double kBoundaries[4] = {0.0, 1.0, 2.0, 3.0};
  constexpr double kAdminCensor = 4.0;
  const double sq1mv = std::sqrt(1.0 - config.v);
  const double sqv = std::sqrt(config.v);
  const int q = p_ind + 4 * p_dep;

  std::vector<SurvivalRecord> records;
  records.reserve(config.n0 * 2);
  Eigen::VectorXd latent(q);
  double lp[4];
  for (std::int64_t i = 0; i < config.n0; ++i) {
    SplitMix64 rng = derive_stream(config.seed, static_cast<std::uint64_t>(i));
    const double shared = sqv * standard_normal(rng);
    for (int j = 0; j < q; ++j) latent[j] = sq1mv * standard_normal(rng) + shared;

    // Linear predictor on each interval: time-independent block plus that
    // interval's time-dependent block.
    const double lp_ind = beta.head(p_ind).dot(latent.head(p_ind));
    for (int m = 0; m < 4; ++m)
      lp[m] = lp_ind + beta.tail(p_dep).dot(latent.segment(p_ind + m * p_dep, p_dep));

    // Invert the piecewise cumulative hazard 0.05 exp(lp_m) t^2 against an
    // exponential draw.
    const double draw = standard_exponential(rng);
    double cumulative = 0.0;
    double t = 0.0;
    for (int m = 0; m < 4; ++m) {
      const double rate = 0.05 * std::exp(lp[m]);
      const double lo = kBoundaries[m];
      if (m < 3) {
        const double hi = kBoundaries[m + 1];
        const double segment = rate * (hi * hi - lo * lo);
        if (cumulative + segment < draw) {
          cumulative += segment;
          continue;
        }
      }
      t = std::sqrt(lo * lo + (draw - cumulative) / rate);
      break;
    }

    const double x = std::min(t, kAdminCensor);
    const bool event = t <= kAdminCensor;

    // One row per interval entered; boundaries only at {1, 2, 3}.
    for (int m = 0; m < 4; ++m) {
      const double lo = kBoundaries[m];
      if (x <= lo) break;
      const double hi = m < 3 ? std::min(x, kBoundaries[m + 1]) : x;
      SurvivalRecord r;
      r.subject_id = i;
      r.start = lo;
      r.stop = hi;
      r.event = event && hi == x;
      r.covariates.resize(p_ind + p_dep);
      r.covariates.head(p_ind) = latent.head(p_ind);
      r.covariates.tail(p_dep) = latent.segment(p_ind + m * p_dep, p_dep);
      records.push_back(std::move(r));
    }
  }
  return validate_dataset(std::move(records));
}

SurvivalDataset generate(const ScenarioConfig& config) {
  return config.scenario == Scenario::IV ? gen_time_dependent(config)
                                         : gen_time_independent(config);
}

}  // namespace dacsurv
