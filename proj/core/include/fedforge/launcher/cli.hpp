#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fedforge/node_config.hpp"

namespace fedforge::launcher {

// Process exit statuses used by the CLI and its children.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitTimeout = 3;

inline constexpr const char* kBasePortEnv = "FEDFORGE_BASE_PORT";

enum class Algorithm { kCentralized, kDecentralized };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

struct LaunchSpec {
  int no_nodes = 2;
  int fl_srv_id = 0;
  Algorithm algorithm = Algorithm::kCentralized;
  int iterations = 1;
  std::uint16_t base_port = kDefaultBasePort;
  std::filesystem::path dataset_path;
  int watchdog_seconds = 120;
  // When set, node i writes its final model to result_dir/node<i>.bin.
  std::optional<std::filesystem::path> result_dir;

  friend bool operator==(const LaunchSpec&, const LaunchSpec&) = default;
};

// One instance, as spawned by `launch`.
struct NodeRunRequest {
  int no_nodes = 2;
  int node_id = 0;
  int fl_srv_id = 0;
  Algorithm algorithm = Algorithm::kCentralized;
  int iterations = 1;
  std::uint16_t base_port = kDefaultBasePort;
  std::filesystem::path dataset_path;
  std::optional<std::filesystem::path> result_path;

  NodeConfig node_config() const;

  friend bool operator==(const NodeRunRequest&, const NodeRunRequest&) = default;
};

using Command = std::variant<LaunchSpec, NodeRunRequest>;

// Thrown for --help; what() is the help text.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

// Parses `launch ...` or `node ...` (args exclude the program name). The
// base port comes from --base-port, else `env_base_port`, else 6000.
// Throws UsageError on any invalid input, including a missing dataset file.
Command parse_cli(const std::vector<std::string>& args,
                  std::optional<std::string> env_base_port = std::nullopt);

// argc/argv form; reads FEDFORGE_BASE_PORT from the environment.
Command parse_cli(int argc, const char* const* argv);

// Arguments (after the executable) that `launch` gives node `id`.
std::vector<std::string> child_args(const LaunchSpec& spec, int id);

std::filesystem::path result_file(const std::filesystem::path& dir, int id);

}  // namespace fedforge::launcher
