#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dacsurv/common.hpp"

namespace dacsurv {

// One constant-covariate interval (start, stop] of one subject. Time-independent
// data is the degenerate case start = 0 with a single row per subject.
struct SurvivalRecord {
  std::int64_t subject_id = 0;
  double start = 0.0;
  double stop = 0.0;
  bool event = false;          // Delta: event observed at stop
  Eigen::VectorXd covariates;  // Z on (start, stop]
};

// Row-major so a row's covariates are contiguous in the likelihood sweep.
using CovariateMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Columnar survival data, validated and sorted. Storage order is stop time
// descending with event rows before censoring rows at equal stop times; the
// order is a structural invariant that the likelihood sweep relies on.
class SurvivalDataset {
 public:
  std::int64_t n_rows() const { return static_cast<std::int64_t>(ids_.size()); }
  int p() const { return p_; }
  std::int64_t n_subjects() const { return n_subjects_; }
  std::int64_t d0() const { return d0_; }
  bool has_entry_times() const { return has_entry_times_; }

  const std::vector<std::int64_t>& subject_ids() const { return ids_; }
  const Eigen::VectorXd& starts() const { return start_; }
  const Eigen::VectorXd& stops() const { return stop_; }
  const std::vector<std::uint8_t>& events() const { return event_; }
  const CovariateMatrix& covariates() const { return z_; }

  // Row indices sorted by start time descending; empty when all starts are 0.
  const std::vector<std::int64_t>& start_desc_order() const { return start_desc_order_; }

  std::vector<SurvivalRecord> to_records() const;

  bool operator==(const SurvivalDataset& other) const;

 private:
  SurvivalDataset() = default;
  static SurvivalDataset build(std::vector<SurvivalRecord> records,
                               bool require_two_subjects);

  friend SurvivalDataset validate_dataset(std::vector<SurvivalRecord> records);
  friend SurvivalDataset shard_dataset(const SurvivalDataset& dataset,
                                       const struct ShardPlan& plan, int shard);

  std::vector<std::int64_t> ids_;
  Eigen::VectorXd start_;
  Eigen::VectorXd stop_;
  std::vector<std::uint8_t> event_;
  CovariateMatrix z_;
  std::vector<std::int64_t> start_desc_order_;
  int p_ = 0;
  std::int64_t n_subjects_ = 0;
  std::int64_t d0_ = 0;
  bool has_entry_times_ = false;
};

// Checks record invariants (uniform dimension, start < stop, per-subject
// intervals disjoint and contiguous, event only on the final interval),
// then sorts and packs into columnar form.
SurvivalDataset validate_dataset(std::vector<SurvivalRecord> records);

// Deterministic balanced partition of subject ids into k shards. All rows of
// a subject land in the same shard.
struct ShardPlan {
  int k_shards = 1;
  std::unordered_map<std::int64_t, int> assignment;
  std::vector<std::int64_t> sizes;
  std::uint64_t seed = 0;

  int shard_of(std::int64_t subject_id) const;
};

ShardPlan make_shard_plan(const SurvivalDataset& dataset, int k_shards,
                          std::uint64_t seed);

// Extracts shard k as its own dataset, inheriting the parent's sorted order.
SurvivalDataset shard_dataset(const SurvivalDataset& dataset, const ShardPlan& plan,
                              int shard);

// CSV schema: header `id,start,stop,event,z1,...,zp`; the start column is
// optional on input (absent means 0). event is 0 or 1. Values round-trip
// exactly (written with 17 significant digits).
std::vector<SurvivalRecord> read_records_csv(const std::string& path);
SurvivalDataset read_dataset_csv(const std::string& path);
std::string dataset_to_csv(const SurvivalDataset& dataset);
void write_dataset_csv(const SurvivalDataset& dataset, const std::string& path);

}  // namespace dacsurv
