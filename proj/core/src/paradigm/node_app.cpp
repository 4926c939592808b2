#include "fedforge/paradigm/node_app.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>

#include "fedforge/engine/engine.hpp"
#include "fedforge/errors.hpp"
#include "fedforge/paradigm/compare.hpp"
#include "fedforge/transport/tcp_transport.hpp"

namespace fedforge::paradigm {

std::size_t partitions_for(Algorithm algo, int no_nodes) {
  return static_cast<std::size_t>(algo == Algorithm::kCentralized ? no_nodes - 1 : no_nodes);
}

int partition_of(Algorithm algo, int /*no_nodes*/, int node_id, int srv_id) {
  if (algo == Algorithm::kDecentralized) return node_id;
  if (node_id == srv_id) return -1;
  return node_id < srv_id ? node_id : node_id - 1;
}

NodeSetup make_node_setup(const logreg::SplitData& data, Algorithm algo, int no_nodes,
                          int node_id, int srv_id, const logreg::TrainConfig& cfg) {
  NodeSetup setup;
  setup.local_data = logreg::serialize_model({0.0, 0.0});
  const int part = partition_of(algo, no_nodes, node_id, srv_id);
  if (part >= 0) {
    auto parts = logreg::partition_horizontal(data.x_train, data.y_train,
                                              partitions_for(algo, no_nodes));
    setup.private_data = std::move(parts[static_cast<std::size_t>(part)]);
  }
  setup.callbacks = algo == Algorithm::kCentralized ? logreg::centralized_callbacks(cfg)
                                                    : logreg::decentralized_callbacks(cfg);
  return setup;
}

Bytes run_node(transport::Transport& net, const NodeConfig& cfg, Algorithm algo,
               const logreg::SplitData& data, int iterations,
               const logreg::TrainConfig& train) {
  NodeSetup setup =
      make_node_setup(data, algo, cfg.no_nodes, cfg.node_id, cfg.fl_srv_id, train);
  if (algo == Algorithm::kCentralized) {
    return engine::fl_centralized(net, cfg, setup.callbacks, std::move(setup.local_data),
                                  setup.private_data, iterations);
  }
  return engine::fl_decentralized(net, cfg, setup.callbacks, std::move(setup.local_data),
                                  setup.private_data, iterations);
}

std::vector<Bytes> run_phase4_sim(const logreg::Dataset& ds, Algorithm algo, int no_nodes,
                                  transport::DeliverySchedule schedule, int iterations,
                                  int srv_id, std::uint64_t split_seed,
                                  const logreg::TrainConfig& train,
                                  transport::TransportStats* total_stats) {
  const auto data = logreg::split(ds, kTestFraction, split_seed);
  std::vector<Bytes> results(static_cast<std::size_t>(no_nodes));
  auto net = transport::sim_transport(no_nodes, std::move(schedule));
  net->run_or_throw([&](int id, transport::Transport& t) {
    NodeConfig cfg;
    cfg.no_nodes = no_nodes;
    cfg.node_id = id;
    cfg.fl_srv_id = srv_id;
    results[static_cast<std::size_t>(id)] = run_node(t, cfg, algo, data, iterations, train);
  });
  if (total_stats) *total_stats = net->total_stats();
  return results;
}

NodeOutcome check_against_referent(const logreg::Dataset& ds, Algorithm algo, int no_nodes,
                                   int node_id, int srv_id, int iterations,
                                   const Bytes& final_local, std::uint64_t split_seed,
                                   const logreg::TrainConfig& train) {
  NodeOutcome out;
  out.model = logreg::deserialize_model(final_local);
  const auto data = logreg::split(ds, kTestFraction, split_seed);
  out.accuracy = logreg::evaluate(data.x_test, data.y_test, out.model).accuracy;
  if (iterations != 1) return out;

  const RunReport ref =
      phase3_federated_callbacks(ds, split_seed, train, partitions_for(algo, no_nodes));
  const int part = partition_of(algo, no_nodes, node_id, srv_id);
  const logreg::ModelVector& expected =
      (algo == Algorithm::kCentralized && part >= 0)
          ? ref.models[static_cast<std::size_t>(part)]
          : ref.aggregate();

  out.checked = true;
  out.max_relative_error = std::max(relative_error(out.model.b0, expected.b0),
                                    relative_error(out.model.b1, expected.b1));
  const bool exact = logreg::serialize_model(out.model) == logreg::serialize_model(expected);
  if (algo == Algorithm::kDecentralized && no_nodes > 2) {
    out.matches_referent = out.max_relative_error <= 1e-12;
  } else {
    out.matches_referent = exact;
  }
  return out;
}

int node_main(const launcher::NodeRunRequest& req, std::ostream& log) {
  using launcher::kExitOk;
  using launcher::kExitRuntime;
  using launcher::kExitUsage;

  logreg::Dataset ds;
  try {
    ds = logreg::load_sna_csv(req.dataset_path);
  } catch (const ParseError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const NodeConfig cfg = req.node_config();
  try {
    cfg.validate(2);
    const auto data = logreg::split(ds, kTestFraction, kSplitSeed);
    Bytes final_local;
    {
      auto net = transport::start_node(cfg);
      final_local = run_node(*net, cfg, req.algorithm, data, req.iterations);
    }

    const NodeOutcome outcome =
        check_against_referent(ds, req.algorithm, req.no_nodes, req.node_id,
                               req.fl_srv_id, req.iterations, final_local);
    log << std::setprecision(17) << "b0=" << outcome.model.b0 << " b1=" << outcome.model.b1
        << " accuracy=" << outcome.accuracy << '\n';

    if (req.result_path) {
      std::ofstream f(*req.result_path, std::ios::binary | std::ios::trunc);
      f.write(reinterpret_cast<const char*>(final_local.data()),
              static_cast<std::streamsize>(final_local.size()));
      if (!f) throw Error("cannot write result file " + req.result_path->string());
    }

    if (outcome.checked && !outcome.matches_referent) {
      log << "error: b0 and b1 must be equal to the referent (max relative error "
          << outcome.max_relative_error << ")\n";
      return kExitRuntime;
    }
    if (outcome.checked) log << "matches the phase-3 referent\n";
    return kExitOk;
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace fedforge::paradigm
