#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fedforge/engine/engine.hpp"
#include "fedforge/logreg/callbacks.hpp"
#include "fedforge/logreg/dataset.hpp"
#include "fedforge/logreg/model.hpp"

namespace fedforge::paradigm {

inline constexpr double kTestFraction = 0.20;
inline constexpr std::uint64_t kSplitSeed = 42;

// Output of one development phase. Phase 1 holds a single model; the
// federated phases hold the k client models followed by the aggregate.
struct RunReport {
  int phase = 1;
  std::vector<logreg::ModelVector> models;
  double accuracy = 0.0;

  const logreg::ModelVector& aggregate() const { return models.back(); }
};

using LogRegCallbacks = engine::CallbackPair<logreg::PrivateData>;

// Sequential referent: split, train on the whole training set, evaluate.
RunReport phase1_seq_base_case(const logreg::Dataset& ds,
                               std::uint64_t split_seed = kSplitSeed,
                               const logreg::TrainConfig& cfg = {});

// Federated sequential: k horizontal partitions trained from (0, 0) one
// after another, averaged, evaluated.
RunReport phase2_federated_sequential(const logreg::Dataset& ds,
                                      std::uint64_t split_seed = kSplitSeed,
                                      const logreg::TrainConfig& cfg = {},
                                      std::size_t k = 2);

// Federated sequential with callbacks: the phase-2 computation routed
// through the client callback (once per partition, with local data and
// server message both (0, 0)) and the server callback (once, on the
// client updates in partition order). `callbacks` defaults to
// logreg::centralized_callbacks(cfg).
RunReport phase3_federated_callbacks(const logreg::Dataset& ds,
                                     std::uint64_t split_seed = kSplitSeed,
                                     const logreg::TrainConfig& cfg = {},
                                     std::size_t k = 2,
                                     const std::optional<LogRegCallbacks>& callbacks = {});

}  // namespace fedforge::paradigm
