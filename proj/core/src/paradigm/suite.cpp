#include "fedforge/paradigm/suite.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "fedforge/errors.hpp"
#include "fedforge/launcher/spawn.hpp"
#include "fedforge/logreg/split.hpp"
#include "fedforge/paradigm/node_app.hpp"

namespace fedforge::paradigm {
namespace {

using launcher::Algorithm;

void run_leg(const SuiteOptions& opts, const launcher::LaunchSpec& spec,
             const std::string& leg) {
  std::ostringstream sink;
  std::ostream* out = opts.log ? opts.log : &sink;
  launcher::LaunchResult result;
  try {
    result = launcher::spawn_all(spec, opts.executable, out, out);
  } catch (const LauncherError& e) {
    throw SuiteError(leg + ": " + e.what());
  }
  if (result.aggregate_status() != launcher::kExitOk) {
    std::string codes;
    for (int c : result.exit_codes) codes += " " + std::to_string(c);
    throw SuiteError(leg + ": nodes exited with" + codes + "\n" + sink.str());
  }
}

}  // namespace

logreg::ModelVector read_result_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SuiteError("missing result file " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return logreg::deserialize_model(bytes);
}

std::vector<EquivalenceReport> run_equivalence_suite(const SuiteOptions& opts) {
  const logreg::Dataset ds = logreg::load_sna_csv(opts.dataset);
  const auto data = logreg::split(ds, kTestFraction, opts.split_seed);
  auto accuracy_of = [&](const logreg::ModelVector& m) {
    return logreg::evaluate(data.x_test, data.y_test, m).accuracy;
  };

  std::vector<EquivalenceReport> reports;
  const RunReport p1 = phase1_seq_base_case(ds, opts.split_seed, opts.train);
  const RunReport p2 = phase2_federated_sequential(ds, opts.split_seed, opts.train, 2);
  const RunReport p3 =
      phase3_federated_callbacks(ds, opts.split_seed, opts.train, 2, opts.phase3_callbacks);
  reports.push_back(compare_reports(p1, p2, kPhase1To2));
  reports.push_back(compare_reports(p2, p3, kExact));

  std::filesystem::create_directories(opts.work_dir);

  // Centralized: server 0 plus two clients.
  {
    launcher::LaunchSpec spec;
    spec.no_nodes = 3;
    spec.fl_srv_id = 0;
    spec.algorithm = Algorithm::kCentralized;
    spec.base_port = opts.base_port;
    spec.dataset_path = opts.dataset;
    spec.watchdog_seconds = opts.watchdog_seconds;
    spec.result_dir = opts.work_dir / "centralized";
    run_leg(opts, spec, "3->4 centralized");

    RunReport p4;
    p4.phase = 4;
    for (int id = 0; id < spec.no_nodes; ++id) {
      if (id != spec.fl_srv_id) {
        p4.models.push_back(read_result_file(launcher::result_file(*spec.result_dir, id)));
      }
    }
    p4.models.push_back(
        read_result_file(launcher::result_file(*spec.result_dir, spec.fl_srv_id)));
    p4.accuracy = accuracy_of(p4.aggregate());
    auto report = compare_reports(p3, p4, kExact);
    report.name = "3->4 centralized";
    reports.push_back(report);
  }

  // Decentralized: two peers, both must reproduce the aggregate.
  {
    launcher::LaunchSpec spec;
    spec.no_nodes = 2;
    spec.algorithm = Algorithm::kDecentralized;
    spec.base_port = static_cast<std::uint16_t>(opts.base_port + 10);
    spec.dataset_path = opts.dataset;
    spec.watchdog_seconds = opts.watchdog_seconds;
    spec.result_dir = opts.work_dir / "decentralized";
    run_leg(opts, spec, "3->4 decentralized");

    for (int id = 0; id < spec.no_nodes; ++id) {
      RunReport p4;
      p4.phase = 4;
      p4.models.push_back(read_result_file(launcher::result_file(*spec.result_dir, id)));
      p4.accuracy = accuracy_of(p4.aggregate());
      auto report = compare_reports(p3, p4, kExact);
      report.name = "3->4 decentralized node " + std::to_string(id);
      reports.push_back(report);
    }
  }

  for (int seed = 0; seed < opts.reorder_seeds; ++seed) {
    const auto finals = run_phase4_sim(
        ds, Algorithm::kDecentralized, 2,
        transport::DeliverySchedule::random(static_cast<std::uint64_t>(seed)), 1, 0,
        opts.split_seed, opts.train);
    for (std::size_t id = 0; id < finals.size(); ++id) {
      RunReport p4;
      p4.phase = 4;
      p4.models.push_back(logreg::deserialize_model(finals[id]));
      p4.accuracy = accuracy_of(p4.aggregate());
      auto report = compare_reports(p3, p4, kExact);
      report.name = "3->4 decentralized sim seed " + std::to_string(seed) + " node " +
                    std::to_string(id);
      reports.push_back(report);
    }
  }
  return reports;
}

void ensure_all_pass(const std::vector<EquivalenceReport>& reports) {
  std::string failing;
  for (const auto& r : reports) {
    if (!r.pass) failing += "\n  " + r.summary();
  }
  if (!failing.empty()) throw SuiteError("phase equivalence failed:" + failing);
}

}  // namespace fedforge::paradigm
