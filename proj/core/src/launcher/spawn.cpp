#include "fedforge/launcher/spawn.hpp"

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <iostream>
#include <mutex>
#include <thread>

#include "fedforge/errors.hpp"

extern char** environ;

namespace fedforge::launcher {
namespace {

std::mutex g_output_mu;

// Copies `fd` to `sink` line by line with a prefix; returns at EOF.
void forward_lines(int fd, std::string prefix, std::ostream& sink) {
  std::string pending;
  char buf[4096];
  while (true) {
    ssize_t n = ::read(fd, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    pending.append(buf, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = pending.find('\n')) != std::string::npos) {
      std::lock_guard lock(g_output_mu);
      sink << prefix << std::string_view(pending).substr(0, nl + 1) << std::flush;
      pending.erase(0, nl + 1);
    }
  }
  if (!pending.empty()) {
    std::lock_guard lock(g_output_mu);
    sink << prefix << pending << '\n' << std::flush;
  }
  ::close(fd);
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return kExitRuntime;
}

struct Child {
  pid_t pid = -1;
  bool done = false;
  int exit_code = -1;
};

void kill_and_reap(std::vector<Child>& children) {
  for (auto& c : children) {
    if (c.pid > 0 && !c.done) ::kill(c.pid, SIGKILL);
  }
  for (auto& c : children) {
    if (c.pid > 0 && !c.done) {
      int status = 0;
      while (::waitpid(c.pid, &status, 0) < 0 && errno == EINTR) {
      }
      c.done = true;
      c.exit_code = decode_status(status);
    }
  }
}

}  // namespace

int LaunchResult::aggregate_status() const {
  int worst = kExitOk;
  for (int code : exit_codes) {
    if (code == kExitOk) continue;
    const int severity = (code == kExitUsage || code == kExitRuntime || code == kExitTimeout)
                             ? code
                             : kExitRuntime;
    worst = std::max(worst, severity);
  }
  return worst;
}

LaunchResult run_processes(const std::vector<ProcessSpec>& procs, const LaunchOptions& opts) {
  std::ostream& out = opts.out ? *opts.out : std::cout;
  std::ostream& err = opts.err ? *opts.err : std::cerr;

  LaunchResult result;
  std::vector<Child> children(procs.size());
  std::vector<std::thread> forwarders;

  auto abort_all = [&] {
    kill_and_reap(children);
    for (auto& t : forwarders) t.join();
  };

  for (std::size_t i = 0; i < procs.size(); ++i) {
    const auto& p = procs[i];
    int out_pipe[2];
    int err_pipe[2];
    if (::pipe2(out_pipe, O_CLOEXEC) < 0 || ::pipe2(err_pipe, O_CLOEXEC) < 0) {
      abort_all();
      throw LauncherError(std::string("pipe: ") + std::strerror(errno));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);

    std::vector<std::string> argv_storage;
    argv_storage.push_back(p.executable.string());
    argv_storage.insert(argv_storage.end(), p.args.begin(), p.args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    argv.push_back(nullptr);

    pid_t pid = -1;
    const int rc = ::posix_spawn(&pid, argv_storage[0].c_str(), &actions, nullptr,
                                 argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    if (rc != 0) {
      ::close(out_pipe[0]);
      ::close(err_pipe[0]);
      abort_all();
      throw LauncherError("cannot spawn " + p.executable.string() + ": " +
                          std::strerror(rc));
    }
    children[i].pid = pid;
    result.records.push_back({static_cast<int>(i), p.executable, p.args, pid});

    const std::string prefix = "[" + (p.label.empty() ? std::to_string(i) : p.label) + "] ";
    forwarders.emplace_back(forward_lines, out_pipe[0], prefix, std::ref(out));
    forwarders.emplace_back(forward_lines, err_pipe[0], prefix, std::ref(err));
  }

  const auto deadline = std::chrono::steady_clock::now() + opts.watchdog;
  std::size_t remaining = children.size();
  while (remaining > 0) {
    for (auto& c : children) {
      if (c.done) continue;
      int status = 0;
      pid_t r = ::waitpid(c.pid, &status, WNOHANG);
      if (r == c.pid) {
        c.done = true;
        c.exit_code = decode_status(status);
        --remaining;
      }
    }
    if (remaining == 0) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      std::string survivors;
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (!children[i].done) {
          if (!survivors.empty()) survivors += ", ";
          survivors += procs[i].label.empty() ? std::to_string(i) : procs[i].label;
          survivors += " (pid " + std::to_string(children[i].pid) + ")";
        }
      }
      abort_all();
      throw WatchdogTimeoutError("watchdog expired after " +
                                 std::to_string(opts.watchdog.count()) +
                                 " ms; still running: " + survivors);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  for (auto& t : forwarders) t.join();
  for (const auto& c : children) result.exit_codes.push_back(c.exit_code);
  return result;
}

LaunchResult spawn_all(const LaunchSpec& spec, const std::filesystem::path& executable,
                       std::ostream* out, std::ostream* err) {
  if (spec.result_dir) std::filesystem::create_directories(*spec.result_dir);
  std::vector<ProcessSpec> procs;
  for (int id = 0; id < spec.no_nodes; ++id) {
    procs.push_back({executable, child_args(spec, id), "node " + std::to_string(id)});
  }
  LaunchOptions opts;
  opts.watchdog = std::chrono::seconds(spec.watchdog_seconds);
  opts.out = out;
  opts.err = err;
  return run_processes(procs, opts);
}

std::filesystem::path self_executable() {
  return std::filesystem::read_symlink("/proc/self/exe");
}

}  // namespace fedforge::launcher
