#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fedforge/errors.hpp"
#include "fedforge/logreg/callbacks.hpp"
#include "fedforge/logreg/split.hpp"
#include "fedforge/paradigm/compare.hpp"
#include "fedforge/paradigm/node_app.hpp"
#include "fedforge/paradigm/phases.hpp"
#include "fedforge/paradigm/suite.hpp"
#include "test_support.hpp"

namespace fedforge::paradigm {
namespace {

using logreg::ModelVector;
using transport::DeliverySchedule;

// Ports 24000-24999 belong to this file.
constexpr std::uint16_t kPortBase = 24000;

const logreg::Dataset& surrogate() {
  static const logreg::Dataset ds = logreg::load_sna_csv(testing::surrogate_csv());
  return ds;
}

void expect_close(const ModelVector& got, const ModelVector& want) {
  EXPECT_NEAR(got.b0, want.b0, 1e-12 * std::abs(want.b0));
  EXPECT_NEAR(got.b1, want.b1, 1e-12 * std::abs(want.b1));
}

// Reference values from an independent reimplementation of the split,
// training and evaluation pipeline run on the bundled file.
TEST(PhaseTest, SurrogateMatchesIndependentPipeline) {
  auto p1 = phase1_seq_base_case(surrogate());
  ASSERT_EQ(p1.models.size(), 1u);
  expect_close(p1.models[0], {0.2414677185053497, 1.9471701294773804});
  EXPECT_EQ(p1.accuracy, 0.8);

  auto p2 = phase2_federated_sequential(surrogate());
  ASSERT_EQ(p2.models.size(), 3u);
  expect_close(p2.models[0], {0.10756608309196215, 1.6676450624096377});
  expect_close(p2.models[1], {0.2908032396599527, 1.679291313470025});
  expect_close(p2.aggregate(), {0.19918466137595742, 1.6734681879398314});
  EXPECT_EQ(p2.accuracy, 0.8);
}

TEST(PhaseTest, Deterministic) {
  auto a = phase1_seq_base_case(surrogate());
  auto b = phase1_seq_base_case(surrogate());
  EXPECT_EQ(a.models, b.models);
  EXPECT_EQ(phase2_federated_sequential(surrogate()).models,
            phase2_federated_sequential(surrogate()).models);
}

TEST(PhaseTest, ZeroEpochs) {
  auto p1 = phase1_seq_base_case(surrogate(), kSplitSeed, {0.001, 0});
  EXPECT_EQ(p1.models[0], (ModelVector{0, 0}));
}

TEST(PhaseTest, SinglePartitionIsPhaseOne) {
  auto p1 = phase1_seq_base_case(surrogate());
  auto p2 = phase2_federated_sequential(surrogate(), kSplitSeed, {}, 1);
  EXPECT_EQ(p2.aggregate(), p1.models[0]);
  EXPECT_EQ(p2.accuracy, p1.accuracy);
}

TEST(PhaseTest, CallbacksBitIdenticalToSequential) {
  for (std::size_t k : {1u, 2u, 3u, 5u}) {
    for (std::uint64_t seed : {42u, 7u}) {
      auto p2 = phase2_federated_sequential(surrogate(), seed, {}, k);
      auto p3 = phase3_federated_callbacks(surrogate(), seed, {}, k);
      EXPECT_EQ(p3.models, p2.models) << k;
      EXPECT_EQ(p3.accuracy, p2.accuracy) << k;
      EXPECT_TRUE(compare_reports(p2, p3, kExact).bit_identical);
    }
  }
}

TEST(PhaseTest, CallbackCallPattern) {
  std::vector<std::string> calls;
  auto real = logreg::centralized_callbacks();
  LogRegCallbacks spy{
      [&](const logreg::PrivateData& pd, std::span<const Bytes> u) {
        calls.push_back("server/" + std::to_string(u.size()) + (pd ? "/data" : "/none"));
        return real.server(pd, u);
      },
      [&](const Bytes& local, const logreg::PrivateData& pd, const Bytes& msg) {
        EXPECT_EQ(local, logreg::serialize_model({0, 0}));
        EXPECT_EQ(msg, logreg::serialize_model({0, 0}));
        calls.push_back("client/" + std::to_string(pd->x.size()));
        return real.client(local, pd, msg);
      }};
  phase3_federated_callbacks(surrogate(), kSplitSeed, {}, 2, spy);
  EXPECT_EQ(calls, (std::vector<std::string>{"client/160", "client/160", "server/2/none"}));
}

TEST(CompareTest, Examples) {
  RunReport ref{2, {{0.2, 1.5}}, 0.9};
  EXPECT_TRUE(compare_reports(ref, ref, 0.0).pass);
  EXPECT_TRUE(compare_reports(ref, ref, 0.0).bit_identical);

  RunReport drift{2, {{0.2 * 1.0889, 1.5}}, 0.9};
  auto r = compare_reports(ref, drift, 0.05);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.relative_errors[0], 0.0889, 1e-12);
  EXPECT_EQ(r.relative_errors[1], 0.0);

  RunReport zero{1, {{0.0, 1.0}}, 0.5};
  RunReport tiny{2, {{1e-9, 1.0}}, 0.5};
  EXPECT_TRUE(compare_reports(zero, tiny, 1e-6).pass);
  EXPECT_FALSE(compare_reports(zero, tiny, 1e-6).bit_identical);
}

TEST(CompareTest, AccuracyAndShape) {
  RunReport a{1, {{1, 1}}, 0.9};
  RunReport b{2, {{1, 1}}, 0.8};
  EXPECT_FALSE(compare_reports(a, b, Tolerance{0.15, 0.0}).pass);
  EXPECT_TRUE(compare_reports(a, b, Tolerance{0.0, 0.11}).pass);

  RunReport two{2, {{1, 1}, {2, 2}}, 0.9};
  RunReport three{3, {{1, 1}, {2, 2}, {1.5, 1.5}}, 0.9};
  EXPECT_THROW(compare_reports(two, three, 0.0), ComparisonError);
  RunReport empty{3, {}, 0.9};
  EXPECT_THROW(compare_reports(a, empty, 0.0), ComparisonError);
  // Single model against a list: aggregates only.
  EXPECT_EQ(compare_reports(a, three, 1.0).relative_errors.size(), 2u);
}

TEST(CompareTest, RelativeError) {
  EXPECT_EQ(relative_error(1.1, 1.0), std::abs(1.1 - 1.0));
  EXPECT_EQ(relative_error(3.0, -2.0), 2.5);
  EXPECT_EQ(relative_error(-0.5, 0.0), 0.5);
}

TEST(NodeAppTest, PartitionMapping) {
  EXPECT_EQ(partitions_for(Algorithm::kCentralized, 3), 2u);
  EXPECT_EQ(partitions_for(Algorithm::kDecentralized, 3), 3u);
  EXPECT_EQ(partition_of(Algorithm::kCentralized, 3, 0, 0), -1);
  EXPECT_EQ(partition_of(Algorithm::kCentralized, 3, 1, 0), 0);
  EXPECT_EQ(partition_of(Algorithm::kCentralized, 3, 2, 0), 1);
  EXPECT_EQ(partition_of(Algorithm::kCentralized, 3, 1, 1), -1);
  EXPECT_EQ(partition_of(Algorithm::kCentralized, 3, 0, 1), 0);
  EXPECT_EQ(partition_of(Algorithm::kCentralized, 3, 2, 1), 1);
  for (int id = 0; id < 4; ++id)
    EXPECT_EQ(partition_of(Algorithm::kDecentralized, 4, id, 0), id);
}

TEST(NodeAppTest, SimCentralizedMatchesReferent) {
  auto ref = phase3_federated_callbacks(surrogate());
  transport::TransportStats stats;
  auto out = run_phase4_sim(surrogate(), Algorithm::kCentralized, 3, DeliverySchedule::fifo(),
                            1, 0, kSplitSeed, {}, &stats);
  EXPECT_EQ(logreg::deserialize_model(out[0]), ref.aggregate());
  EXPECT_EQ(logreg::deserialize_model(out[1]), ref.models[0]);
  EXPECT_EQ(logreg::deserialize_model(out[2]), ref.models[1]);
  EXPECT_EQ(stats.data_sent, 4u);
}

TEST(NodeAppTest, SimCentralizedWithOtherServer) {
  auto ref = phase3_federated_callbacks(surrogate());
  auto out = run_phase4_sim(surrogate(), Algorithm::kCentralized, 3,
                            DeliverySchedule::random(1), 1, 2);
  EXPECT_EQ(logreg::deserialize_model(out[2]), ref.aggregate());
}

TEST(NodeAppTest, SimDecentralizedTwoNodesBitExact) {
  auto ref = phase3_federated_callbacks(surrogate());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto out = run_phase4_sim(surrogate(), Algorithm::kDecentralized, 2,
                              DeliverySchedule::random(seed));
    EXPECT_EQ(logreg::deserialize_model(out[0]), ref.aggregate());
    EXPECT_EQ(logreg::deserialize_model(out[1]), ref.aggregate());
  }
}

TEST(NodeAppTest, SimDecentralizedThreeNodesCloseToReferent) {
  auto ref = phase3_federated_callbacks(surrogate(), kSplitSeed, {}, 3);
  transport::TransportStats stats;
  auto out = run_phase4_sim(surrogate(), Algorithm::kDecentralized, 3,
                            DeliverySchedule::phase_two_first(9), 1, 0, kSplitSeed, {}, &stats);
  EXPECT_EQ(stats.data_sent, 12u);
  for (int id = 0; id < 3; ++id) {
    auto outcome = check_against_referent(surrogate(), Algorithm::kDecentralized, 3, id, 0, 1,
                                          out[id]);
    EXPECT_TRUE(outcome.checked);
    EXPECT_TRUE(outcome.matches_referent) << outcome.max_relative_error;
    expect_close(outcome.model, ref.aggregate());
  }
}

TEST(NodeAppTest, ReferentCheckCatchesMismatch) {
  auto bad = logreg::serialize_model({1, 1});
  auto o = check_against_referent(surrogate(), Algorithm::kCentralized, 3, 0, 0, 1, bad);
  EXPECT_TRUE(o.checked);
  EXPECT_FALSE(o.matches_referent);
  auto multi = check_against_referent(surrogate(), Algorithm::kCentralized, 3, 0, 0, 2, bad);
  EXPECT_FALSE(multi.checked);
}

TEST(SuiteTest, ExactLegsPassAndReorderSweepHolds) {
  testing::TempDir tmp;
  SuiteOptions opts;
  opts.dataset = testing::surrogate_csv();
  opts.executable = testing::cli_path();
  opts.work_dir = tmp.path();
  opts.base_port = kPortBase;
  opts.reorder_seeds = 10;
  std::ostringstream log;
  opts.log = &log;
  auto reports = run_equivalence_suite(opts);
  ASSERT_EQ(reports.size(), 5u + 2u * 10u);
  EXPECT_EQ(reports[0].reference_phase, 1);
  EXPECT_EQ(reports[0].candidate_phase, 2);
  EXPECT_EQ(reports[0].accuracy_delta, 0.0);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    EXPECT_TRUE(reports[i].pass) << reports[i].summary();
    EXPECT_TRUE(reports[i].bit_identical) << reports[i].summary();
  }
}

TEST(SuiteTest, BrokenAggregationFailsTwoToThree) {
  testing::TempDir tmp;
  SuiteOptions opts;
  opts.dataset = testing::surrogate_csv();
  opts.executable = testing::cli_path();
  opts.work_dir = tmp.path();
  opts.base_port = kPortBase + 50;
  opts.reorder_seeds = 1;
  auto real = logreg::centralized_callbacks();
  opts.phase3_callbacks = LogRegCallbacks{
      [](const logreg::PrivateData&, std::span<const Bytes> u) {
        ModelVector sum{0, 0};
        for (const auto& b : u) {
          auto m = logreg::deserialize_model(b);
          sum.b0 += m.b0;
          sum.b1 += m.b1;
        }
        return logreg::serialize_model(sum);
      },
      real.client};
  auto reports = run_equivalence_suite(opts);
  EXPECT_FALSE(reports[1].pass);
  EXPECT_THROW(ensure_all_pass(reports), SuiteError);
}

}  // namespace
}  // namespace fedforge::paradigm
