#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fedforge/launcher/cli.hpp"

namespace fedforge::launcher {

struct ProcessSpec {
  std::filesystem::path executable;
  std::vector<std::string> args;  // excluding argv[0]
  std::string label;              // output prefix, e.g. "node 2"
};

struct LaunchOptions {
  std::chrono::milliseconds watchdog{std::chrono::seconds(120)};
  // Prefixed child stdout / stderr go here; nullptr means std::cout / std::cerr.
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

struct SpawnRecord {
  int node_id = 0;
  std::filesystem::path executable;
  std::vector<std::string> args;
  int pid = 0;
};

struct LaunchResult {
  std::vector<int> exit_codes;  // node-id order; 128 + signal when killed
  std::vector<SpawnRecord> records;

  // 0 when every child succeeded, otherwise the most severe of the
  // nonzero codes (timeout > runtime > usage; unknown codes count as runtime).
  int aggregate_status() const;
};

// Starts every process, forwards its output line by line with a
// "[label] " prefix and waits for all. On watchdog expiry every survivor is
// killed and WatchdogTimeoutError names them. Spawn failures throw
// LauncherError after the already started children are killed.
LaunchResult run_processes(const std::vector<ProcessSpec>& procs,
                           const LaunchOptions& opts = {});

// SPMD launch: `executable` is started spec.no_nodes times with
// child_args(spec, id).
LaunchResult spawn_all(const LaunchSpec& spec, const std::filesystem::path& executable,
                       std::ostream* out = nullptr, std::ostream* err = nullptr);

// Path of the running executable.
std::filesystem::path self_executable();

}  // namespace fedforge::launcher
