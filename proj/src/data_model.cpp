#include "dacsurv/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "dacsurv/rng.hpp"

namespace dacsurv {

namespace {

std::vector<std::int64_t> sorted_start_order(const Eigen::VectorXd& start) {
  std::vector<std::int64_t> order(start.size());
  std::iota(order.begin(), order.end(), std::int64_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) { return start[a] > start[b]; });
  return order;
}

}  // namespace

SurvivalDataset SurvivalDataset::build(std::vector<SurvivalRecord> records,
                                       bool require_two_subjects) {
  if (records.empty()) throw DataError("validate_dataset: no records");

  const int p = static_cast<int>(records.front().covariates.size());
  if (p < 1) throw DataError("validate_dataset: covariate dimension must be >= 1");

  for (const auto& r : records) {
    if (r.subject_id < 0) throw DataError("validate_dataset: negative subject id");
    if (static_cast<int>(r.covariates.size()) != p)
      throw DataError("validate_dataset: covariate dimension mismatch across rows");
    if (!(r.start >= 0.0)) throw DataError("validate_dataset: negative start time");
    if (!(r.start < r.stop))
      throw DataError("validate_dataset: start >= stop for subject " +
                      std::to_string(r.subject_id));
    if (!std::isfinite(r.start) || !std::isfinite(r.stop) ||
        !r.covariates.allFinite())
      throw DataError("validate_dataset: non-finite value in record");
  }

  // Per-subject interval structure: rows sorted by start must tile
  // (first start, last stop] with no gaps or overlaps, event on the last
  // interval only.
  std::map<std::int64_t, std::vector<const SurvivalRecord*>> by_subject;
  for (const auto& r : records) by_subject[r.subject_id].push_back(&r);
  std::int64_t d0 = 0;
  for (auto& [id, rows] : by_subject) {
    std::sort(rows.begin(), rows.end(),
              [](const SurvivalRecord* a, const SurvivalRecord* b) {
                return a->start < b->start;
              });
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      if (rows[i + 1]->start < rows[i]->stop)
        throw DataError("validate_dataset: overlapping intervals for subject " +
                        std::to_string(id));
      if (rows[i + 1]->start > rows[i]->stop)
        throw DataError("validate_dataset: non-contiguous intervals for subject " +
                        std::to_string(id));
      if (rows[i]->event)
        throw DataError("validate_dataset: event on non-final interval for subject " +
                        std::to_string(id));
    }
    if (rows.back()->event) ++d0;
  }

  const auto n_subjects = static_cast<std::int64_t>(by_subject.size());
  if (require_two_subjects && n_subjects < 2)
    throw DataError("validate_dataset: need at least 2 subjects");

  // Storage order: stop descending, event rows before censoring rows at
  // equal stop times, stable beyond that.
  std::stable_sort(records.begin(), records.end(),
                   [](const SurvivalRecord& a, const SurvivalRecord& b) {
                     if (a.stop != b.stop) return a.stop > b.stop;
                     return a.event > b.event;
                   });

  SurvivalDataset ds;
  const auto n = static_cast<std::int64_t>(records.size());
  ds.ids_.resize(n);
  ds.start_.resize(n);
  ds.stop_.resize(n);
  ds.event_.resize(n);
  ds.z_.resize(n, p);
  bool any_entry = false;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    ds.ids_[i] = r.subject_id;
    ds.start_[i] = r.start;
    ds.stop_[i] = r.stop;
    ds.event_[i] = r.event ? 1 : 0;
    ds.z_.row(i) = r.covariates.transpose();
    any_entry = any_entry || r.start > 0.0;
  }
  ds.p_ = p;
  ds.n_subjects_ = n_subjects;
  ds.d0_ = d0;
  ds.has_entry_times_ = any_entry;
  if (any_entry) ds.start_desc_order_ = sorted_start_order(ds.start_);
  return ds;
}

SurvivalDataset validate_dataset(std::vector<SurvivalRecord> records) {
  return SurvivalDataset::build(std::move(records), /*require_two_subjects=*/true);
}

std::vector<SurvivalRecord> SurvivalDataset::to_records() const {
  std::vector<SurvivalRecord> out(static_cast<std::size_t>(n_rows()));
  for (std::int64_t i = 0; i < n_rows(); ++i) {
    out[i].subject_id = ids_[i];
    out[i].start = start_[i];
    out[i].stop = stop_[i];
    out[i].event = event_[i] != 0;
    out[i].covariates = z_.row(i).transpose();
  }
  return out;
}

bool SurvivalDataset::operator==(const SurvivalDataset& other) const {
  return ids_ == other.ids_ && event_ == other.event_ && p_ == other.p_ &&
         n_subjects_ == other.n_subjects_ && d0_ == other.d0_ &&
         has_entry_times_ == other.has_entry_times_ &&
         start_.size() == other.start_.size() && start_ == other.start_ &&
         stop_ == other.stop_ && z_.rows() == other.z_.rows() && z_ == other.z_;
}

int ShardPlan::shard_of(std::int64_t subject_id) const {
  auto it = assignment.find(subject_id);
  if (it == assignment.end())
    throw DataError("ShardPlan: unknown subject id " + std::to_string(subject_id));
  return it->second;
}

ShardPlan make_shard_plan(const SurvivalDataset& dataset, int k_shards,
                          std::uint64_t seed) {
  const std::int64_t n_subjects = dataset.n_subjects();
  if (k_shards < 1 || k_shards > n_subjects)
    throw DataError("make_shard_plan: k_shards must be in [1, n_subjects]");

  // Distinct subject ids in ascending order, then a seeded Fisher-Yates
  // shuffle and round-robin assignment: shard sizes differ by at most one.
  std::vector<std::int64_t> ids = dataset.subject_ids();
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  SplitMix64 rng(seed);
  for (std::size_t i = ids.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(
        (static_cast<unsigned __int128>(rng.next()) * (i + 1)) >> 64);
    std::swap(ids[i], ids[j]);
  }

  ShardPlan plan;
  plan.k_shards = k_shards;
  plan.seed = seed;
  plan.sizes.assign(k_shards, 0);
  plan.assignment.reserve(ids.size());
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const int shard = static_cast<int>(pos % static_cast<std::size_t>(k_shards));
    plan.assignment.emplace(ids[pos], shard);
    ++plan.sizes[shard];
  }
  return plan;
}

SurvivalDataset shard_dataset(const SurvivalDataset& dataset, const ShardPlan& plan,
                              int shard) {
  if (shard < 0 || shard >= plan.k_shards)
    throw DataError("shard_dataset: shard index out of range");

  // Gather rows in parent storage order; the sorted-order invariant is
  // inherited, only the counters need recomputing.
  std::vector<std::int64_t> rows;
  for (std::int64_t i = 0; i < dataset.n_rows(); ++i)
    if (plan.shard_of(dataset.subject_ids()[i]) == shard) rows.push_back(i);
  if (rows.empty()) throw DataError("shard_dataset: empty shard");

  SurvivalDataset out;
  const auto n = static_cast<std::int64_t>(rows.size());
  out.ids_.resize(n);
  out.start_.resize(n);
  out.stop_.resize(n);
  out.event_.resize(n);
  out.z_.resize(n, dataset.p());
  bool any_entry = false;
  std::int64_t d0 = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t src = rows[i];
    out.ids_[i] = dataset.subject_ids()[src];
    out.start_[i] = dataset.starts()[src];
    out.stop_[i] = dataset.stops()[src];
    out.event_[i] = dataset.events()[src];
    out.z_.row(i) = dataset.covariates().row(src);
    any_entry = any_entry || out.start_[i] > 0.0;
    d0 += out.event_[i];
  }
  out.p_ = dataset.p();
  out.n_subjects_ = plan.sizes[shard];
  out.d0_ = d0;
  out.has_entry_times_ = any_entry;
  if (any_entry) out.start_desc_order_ = sorted_start_order(out.start_);
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return v;
}

void append_double(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

std::vector<SurvivalRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open csv file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty csv file: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "id")
    throw DataError("csv header must start with id[,start],stop,event,z1,...");

  bool has_start = header.size() > 1 && header[1] == "start";
  const std::size_t z_begin = has_start ? 4 : 3;
  if (header.size() <= z_begin || header[z_begin - 2] != "stop" ||
      header[z_begin - 1] != "event")
    throw DataError("csv header must be id[,start],stop,event,z1,...,zp");
  const auto p = static_cast<int>(header.size() - z_begin);

  std::vector<SurvivalRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    SurvivalRecord r;
    r.subject_id = parse_int(fields[0], line_no);
    r.start = has_start ? parse_double(fields[1], line_no) : 0.0;
    r.stop = parse_double(fields[z_begin - 2], line_no);
    const std::int64_t ev = parse_int(fields[z_begin - 1], line_no);
    if (ev != 0 && ev != 1)
      throw DataError("csv line " + std::to_string(line_no) + ": event must be 0 or 1");
    r.event = ev == 1;
    r.covariates.resize(p);
    for (int j = 0; j < p; ++j) r.covariates[j] = parse_double(fields[z_begin + j], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

SurvivalDataset read_dataset_csv(const std::string& path) {
  return validate_dataset(read_records_csv(path));
}

std::string dataset_to_csv(const SurvivalDataset& dataset) {
  std::string out = "id,start,stop,event";
  for (int j = 1; j <= dataset.p(); ++j) out += ",z" + std::to_string(j);
  out += "\n";
  for (std::int64_t i = 0; i < dataset.n_rows(); ++i) {
    out += std::to_string(dataset.subject_ids()[i]);
    out += ',';
    append_double(out, dataset.starts()[i]);
    out += ',';
    append_double(out, dataset.stops()[i]);
    out += ',';
    out += dataset.events()[i] ? '1' : '0';
    for (int j = 0; j < dataset.p(); ++j) {
      out += ',';
      append_double(out, dataset.covariates()(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_dataset_csv(const SurvivalDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write csv file: " + path);
  out << dataset_to_csv(dataset);
  if (!out) throw DataError("failed writing csv file: " + path);
}

}  // namespace dacsurv
