#include <doctest.h>

#include <fstream>
#include <set>

#include "dacsurv/data_model.hpp"
#include "dacsurv/simgen.hpp"
#include "oracles.hpp"

using namespace dacsurv;

namespace {

SurvivalRecord make_record(std::int64_t id, double start, double stop, bool event,
                           std::vector<double> z) {
  SurvivalRecord r;
  r.subject_id = id;
  r.start = start;
  r.stop = stop;
  r.event = event;
  r.covariates = Eigen::Map<Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
  return r;
}

}  // namespace

TEST_CASE("validate_dataset counts and sorts") {
  auto ds = validate_dataset({make_record(0, 0, 1.0, true, {1.0}),
                              make_record(1, 0, 2.0, false, {0.0})});
  CHECK(ds.p() == 1);
  CHECK(ds.n_subjects() == 2);
  CHECK(ds.d0() == 1);
  CHECK_FALSE(ds.has_entry_times());
  // Descending stop order.
  CHECK(ds.stops()[0] == 2.0);
  CHECK(ds.stops()[1] == 1.0);
}

TEST_CASE("validate_dataset rejects bad input") {
  CHECK_THROWS_AS(validate_dataset({}), DataError);

  // event on a non-final interval
  CHECK_THROWS_WITH_AS(
      validate_dataset({make_record(0, 0, 1, true, {1.0}),
                        make_record(0, 1, 2, false, {1.0}),
                        make_record(1, 0, 1, false, {0.0})}),
      doctest::Contains("event on non-final interval"), DataError);

  // overlapping and non-contiguous intervals
  CHECK_THROWS_WITH_AS(
      validate_dataset({make_record(0, 0, 1.5, false, {1.0}),
                        make_record(0, 1.0, 2.5, true, {1.0}),
                        make_record(1, 0, 1, false, {0.0})}),
      doctest::Contains("overlapping"), DataError);
  CHECK_THROWS_WITH_AS(
      validate_dataset({make_record(0, 0, 1.0, false, {1.0}),
                        make_record(0, 1.5, 2.5, true, {1.0}),
                        make_record(1, 0, 1, false, {0.0})}),
      doctest::Contains("non-contiguous"), DataError);

  // start >= stop, dimension mismatch
  CHECK_THROWS_AS(validate_dataset({make_record(0, 1.0, 1.0, true, {1.0}),
                                    make_record(1, 0, 1, false, {0.0})}),
                  DataError);
  CHECK_THROWS_AS(validate_dataset({make_record(0, 0, 1, true, {1.0, 2.0}),
                                    make_record(1, 0, 1, false, {0.0})}),
                  DataError);
}

TEST_CASE("validate_dataset event count matches a direct recount") {
  ScenarioConfig config;
  config.scenario = Scenario::I;
  config.n0 = 100;
  config.p = 9;
  config.v = 0.2;
  config.seed = 11;
  const auto ds = gen_time_independent(config);
  std::int64_t events = 0;
  for (const auto& r : ds.to_records()) events += r.event ? 1 : 0;
  CHECK(ds.d0() == events);
}

TEST_CASE("validate_dataset is idempotent") {
  SplitMix64 rng(42);
  const auto ds = testing::random_dataset(rng, 50, 3, true);
  CHECK(validate_dataset(ds.to_records()) == ds);
}

TEST_CASE("storage order is input-order invariant for untied data") {
  SplitMix64 rng(7);
  auto records = testing::random_dataset(rng, 60, 2, false).to_records();
  auto ds1 = validate_dataset(records);
  // Rotate and reverse the input.
  std::rotate(records.begin(), records.begin() + 17, records.end());
  std::reverse(records.begin(), records.end());
  CHECK(validate_dataset(records) == ds1);
}

TEST_CASE("make_shard_plan balances subjects") {
  SplitMix64 rng(5);
  const auto ds = testing::random_dataset(rng, 10, 2, false);

  auto plan = make_shard_plan(ds, 5, 1);
  for (auto s : plan.sizes) CHECK(s == 2);

  auto single = make_shard_plan(ds, 1, 1);
  CHECK(single.sizes == std::vector<std::int64_t>{10});
  CHECK(shard_dataset(ds, single, 0) == ds);

  auto plan3 = make_shard_plan(ds, 3, 99);
  std::vector<std::int64_t> sizes = plan3.sizes;
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::int64_t>{3, 3, 4});

  CHECK_THROWS_AS(make_shard_plan(ds, 0, 1), DataError);
  CHECK_THROWS_AS(make_shard_plan(ds, 11, 1), DataError);
}

TEST_CASE("shard plans are seed-reproducible and partition the data") {
  SplitMix64 rng(9);
  const auto ds = testing::random_dataset(rng, 37, 2, true);

  const auto plan_a = make_shard_plan(ds, 4, 123);
  const auto plan_b = make_shard_plan(ds, 4, 123);
  CHECK(plan_a.assignment == plan_b.assignment);

  // Union of shards = full dataset, disjoint by subject.
  std::set<std::int64_t> seen;
  std::int64_t total_rows = 0;
  for (int k = 0; k < 4; ++k) {
    const auto shard = shard_dataset(ds, plan_a, k);
    total_rows += shard.n_rows();
    for (auto id : shard.subject_ids()) {
      CHECK(plan_a.shard_of(id) == k);
      seen.insert(id);
    }
  }
  CHECK(total_rows == ds.n_rows());
  CHECK(static_cast<std::int64_t>(seen.size()) == ds.n_subjects());
}

TEST_CASE("csv round trip is exact") {
  SplitMix64 rng(13);
  const auto ds = testing::random_dataset(rng, 25, 3, true);
  const std::string path = "roundtrip_test.csv";
  write_dataset_csv(ds, path);
  CHECK(read_dataset_csv(path) == ds);
  std::remove(path.c_str());
}

TEST_CASE("csv start column is optional") {
  const std::string path = "nostart_test.csv";
  {
    std::ofstream out(path);
    out << "id,stop,event,z1,z2\n0,1.5,1,0.25,-1\n1,2.5,0,1,0.5\n";
  }
  const auto ds = read_dataset_csv(path);
  CHECK(ds.starts().cwiseAbs().maxCoeff() == 0.0);
  CHECK(ds.p() == 2);
  CHECK(ds.d0() == 1);
  std::remove(path.c_str());
}

TEST_CASE("csv rejects malformed input") {
  const std::string path = "badcsv_test.csv";
  {
    std::ofstream out(path);
    out << "id,stop,event,z1\n0,1.5,2,0.25\n";
  }
  CHECK_THROWS_WITH_AS(read_dataset_csv(path), doctest::Contains("event"), DataError);
  {
    std::ofstream out(path);
    out << "id,stop,event,z1\n0,oops,1,0.25\n";
  }
  CHECK_THROWS_AS(read_dataset_csv(path), DataError);
  std::remove(path.c_str());
}
