#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fedforge/paradigm/compare.hpp"
#include "fedforge/paradigm/phases.hpp"

namespace fedforge::paradigm {

// Tolerances of the phase chain.
inline constexpr Tolerance kPhase1To2{0.15, 0.0};
inline constexpr Tolerance kExact{0.0, 0.0};

struct SuiteOptions {
  std::filesystem::path dataset;
  // CLI binary used for the distributed legs (`<exe> node ...`).
  std::filesystem::path executable;
  std::filesystem::path work_dir;
  std::uint16_t base_port = 6100;
  int watchdog_seconds = 60;
  int reorder_seeds = 10;
  std::uint64_t split_seed = kSplitSeed;
  logreg::TrainConfig train;
  // Replaces the phase-3 callbacks; used to inject faults.
  std::optional<LogRegCallbacks> phase3_callbacks;
  // Child output; nullptr discards it.
  std::ostream* log = nullptr;
};

// Reads a 16-byte result file written by a phase-4 node.
logreg::ModelVector read_result_file(const std::filesystem::path& path);

// Phases 1-3 in-process, then the 3-node centralized and 2-node
// decentralized runs through the launcher over TCP, then the decentralized
// run under `reorder_seeds` random delivery schedules. Reports, in order:
//   1->2, 2->3, 3->4 centralized, 3->4 decentralized node 0 and node 1,
//   and one 3->4 report per reorder seed and node.
// Throws SuiteError if a distributed leg does not exit cleanly.
std::vector<EquivalenceReport> run_equivalence_suite(const SuiteOptions& opts);

// Throws SuiteError naming every failing phase pair.
void ensure_all_pass(const std::vector<EquivalenceReport>& reports);

}  // namespace fedforge::paradigm
