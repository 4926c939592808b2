// fedforge: SPMD launcher and node runner for the logistic-regression FLA.
//
//   fedforge launch --nodes 3 --algo centralized --data sna.csv
//   fedforge node --nodes 3 --id 1 --algo centralized --data sna.csv
#include <iostream>
#include <variant>

#include "fedforge/errors.hpp"
#include "fedforge/launcher/cli.hpp"
#include "fedforge/launcher/spawn.hpp"
#include "fedforge/paradigm/node_app.hpp"

namespace {

using namespace fedforge;

int run_launch(const launcher::LaunchSpec& spec) {
  try {
    const auto result = launcher::spawn_all(spec, launcher::self_executable());
    for (std::size_t i = 0; i < result.exit_codes.size(); ++i) {
      std::cout << "node " << i << " exited with " << result.exit_codes[i] << '\n';
    }
    return result.aggregate_status();
  } catch (const WatchdogTimeoutError& e) {
    std::cerr << "fedforge: " << e.what() << '\n';
    return launcher::kExitTimeout;
  } catch (const std::exception& e) {
    std::cerr << "fedforge: " << e.what() << '\n';
    return launcher::kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  launcher::Command cmd;
  try {
    cmd = launcher::parse_cli(argc, argv);
  } catch (const launcher::HelpRequested& help) {
    std::cout << help.what();
    return launcher::kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "fedforge: " << e.what() << "\nRun with --help for usage.\n";
    return launcher::kExitUsage;
  }

  if (auto* spec = std::get_if<launcher::LaunchSpec>(&cmd)) return run_launch(*spec);
  return paradigm::node_main(std::get<launcher::NodeRunRequest>(cmd), std::cerr);
}
