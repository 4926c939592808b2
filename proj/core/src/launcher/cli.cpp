#include "fedforge/launcher/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "fedforge/errors.hpp"

namespace fedforge::launcher {
namespace {

std::uint16_t parse_port(std::string_view text) {
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value < 1024 ||
      value > 65535) {
    throw UsageError("invalid base port '" + std::string(text) + "'");
  }
  return static_cast<std::uint16_t>(value);
}

void require_dataset(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.empty() || !std::filesystem::is_regular_file(path, ec)) {
    throw UsageError("dataset not found: " + path.string());
  }
}

}  // namespace

std::string_view to_string(Algorithm a) {
  return a == Algorithm::kCentralized ? "centralized" : "decentralized";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "centralized") return Algorithm::kCentralized;
  if (s == "decentralized") return Algorithm::kDecentralized;
  throw UsageError("unknown algorithm '" + std::string(s) +
                   "' (expected centralized or decentralized)");
}

NodeConfig NodeRunRequest::node_config() const {
  NodeConfig cfg;
  cfg.no_nodes = no_nodes;
  cfg.node_id = node_id;
  cfg.fl_srv_id = fl_srv_id;
  cfg.base_port = base_port;
  return cfg;
}

Command parse_cli(const std::vector<std::string>& args,
                  std::optional<std::string> env_base_port) {
  CLI::App app{"Federated learning testbed: SPMD launcher and node runner", "fedforge"};
  app.require_subcommand(1);

  int nodes = 0;
  int id = 0;
  int srv_id = 0;
  std::string algo;
  int iters = 1;
  std::string base_port;
  std::string data;
  int watchdog = 120;
  std::string result;

  auto* launch = app.add_subcommand("launch", "spawn one process per node and wait");
  launch->add_option("--nodes", nodes, "number of nodes")->required();
  launch->add_option("--srv-id", srv_id, "server node id (centralized)");
  launch->add_option("--algo", algo, "centralized | decentralized")->required();
  launch->add_option("--iters", iters, "number of iterations");
  launch->add_option("--base-port", base_port, "port of node 0");
  launch->add_option("--data", data, "dataset CSV")->required();
  launch->add_option("--watchdog", watchdog, "seconds before all nodes are killed");
  launch->add_option("--result-dir", result, "directory for per-node result files");

  auto* node = app.add_subcommand("node", "run a single instance");
  node->add_option("--nodes", nodes, "number of nodes")->required();
  node->add_option("--id", id, "this node's id")->required();
  node->add_option("--srv-id", srv_id, "server node id (centralized)");
  node->add_option("--algo", algo, "centralized | decentralized")->required();
  node->add_option("--iters", iters, "number of iterations");
  node->add_option("--base-port", base_port, "port of node 0");
  node->add_option("--data", data, "dataset CSV")->required();
  node->add_option("--result", result, "file receiving the final 16-byte model");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::uint16_t port = kDefaultBasePort;
  if (!base_port.empty()) {
    port = parse_port(base_port);
  } else if (env_base_port && !env_base_port->empty()) {
    port = parse_port(*env_base_port);
  }
  const Algorithm algorithm = parse_algorithm(algo);
  if (iters < 1) throw UsageError("--iters must be at least 1");

  NodeConfig topology;
  topology.no_nodes = nodes;
  topology.node_id = id;
  topology.fl_srv_id = srv_id;
  topology.base_port = port;
  topology.validate(2);
  require_dataset(data);

  if (launch->parsed()) {
    if (watchdog < 1) throw UsageError("--watchdog must be a positive number of seconds");
    LaunchSpec spec;
    spec.no_nodes = nodes;
    spec.fl_srv_id = srv_id;
    spec.algorithm = algorithm;
    spec.iterations = iters;
    spec.base_port = port;
    spec.dataset_path = data;
    spec.watchdog_seconds = watchdog;
    if (!result.empty()) spec.result_dir = result;
    return spec;
  }

  NodeRunRequest req;
  req.no_nodes = nodes;
  req.node_id = id;
  req.fl_srv_id = srv_id;
  req.algorithm = algorithm;
  req.iterations = iters;
  req.base_port = port;
  req.dataset_path = data;
  if (!result.empty()) req.result_path = result;
  return req;
}

Command parse_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  std::optional<std::string> env;
  if (const char* v = std::getenv(kBasePortEnv)) env = v;
  return parse_cli(args, env);
}

std::vector<std::string> child_args(const LaunchSpec& spec, int id) {
  std::vector<std::string> args = {
      "node",
      "--nodes", std::to_string(spec.no_nodes),
      "--id", std::to_string(id),
      "--srv-id", std::to_string(spec.fl_srv_id),
      "--algo", std::string(to_string(spec.algorithm)),
      "--iters", std::to_string(spec.iterations),
      "--base-port", std::to_string(spec.base_port),
      "--data", spec.dataset_path.string(),
  };
  if (spec.result_dir) {
    args.push_back("--result");
    args.push_back(result_file(*spec.result_dir, id).string());
  }
  return args;
}

std::filesystem::path result_file(const std::filesystem::path& dir, int id) {
  return dir / ("node" + std::to_string(id) + ".bin");
}

}  // namespace fedforge::launcher
