#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fedforge/launcher/cli.hpp"
#include "fedforge/logreg/split.hpp"
#include "fedforge/paradigm/phases.hpp"
#include "fedforge/transport/sim_transport.hpp"
#include "fedforge/transport/transport.hpp"

namespace fedforge::paradigm {

using launcher::Algorithm;

// Number of training partitions a run needs: one per client when
// centralized, one per node when decentralized.
std::size_t partitions_for(Algorithm algo, int no_nodes);

// Partition index of a node, or -1 for the centralized server. Clients are
// ranked by id with the server skipped, so updates sorted by source id line
// up with partition order.
int partition_of(Algorithm algo, int no_nodes, int node_id, int srv_id);

struct NodeSetup {
  Bytes local_data;
  logreg::PrivateData private_data;
  LogRegCallbacks callbacks;
};

// Local data (0, 0), the node's partition and the algorithm's callbacks.
NodeSetup make_node_setup(const logreg::SplitData& data, Algorithm algo, int no_nodes,
                          int node_id, int srv_id, const logreg::TrainConfig& cfg = {});

// Phase-4 body shared by the TCP and simulated runs.
Bytes run_node(transport::Transport& net, const NodeConfig& cfg, Algorithm algo,
               const logreg::SplitData& data, int iterations,
               const logreg::TrainConfig& train = {});

// Runs every node of one phase-4 run in-process over the simulated
// transport. Returns final local data in node-id order.
std::vector<Bytes> run_phase4_sim(const logreg::Dataset& ds, Algorithm algo, int no_nodes,
                                  transport::DeliverySchedule schedule,
                                  int iterations = 1, int srv_id = 0,
                                  std::uint64_t split_seed = kSplitSeed,
                                  const logreg::TrainConfig& train = {},
                                  transport::TransportStats* total_stats = nullptr);

struct NodeOutcome {
  logreg::ModelVector model;
  double accuracy = 0.0;
  bool checked = false;         // a phase-3 referent applied to this node
  bool matches_referent = true;
  double max_relative_error = 0.0;
};

// Compares a node's final model with the phase-3 referent of the same
// data. Centralized nodes and 2-node decentralized runs must match bit for
// bit; a larger decentralized clique sums the same models in a rotated
// order, so it is held to 1e-12 relative error instead.
NodeOutcome check_against_referent(const logreg::Dataset& ds, Algorithm algo, int no_nodes,
                                   int node_id, int srv_id, int iterations,
                                   const Bytes& final_local,
                                   std::uint64_t split_seed = kSplitSeed,
                                   const logreg::TrainConfig& train = {});

// Entry point of `fedforge node`: starts the TCP transport, runs the
// engine, evaluates, checks the referent, writes the result file. Returns
// the process exit status.
int node_main(const launcher::NodeRunRequest& req, std::ostream& log);

}  // namespace fedforge::paradigm
