// Copyright 2026 The Oracle Gap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORACLE_GAP_PROCESS_HPP_
#define ORACLE_GAP_PROCESS_HPP_

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "oracle_gap/error.hpp"

extern char** environ;

namespace oracle_gap {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
  long long duration_ms = 0;
  std::string output_tail;  // last bytes of combined stdout/stderr
};

namespace detail {

// Process groups of commands still running, so a dying parent can take
// them along. Lock-free so a signal handler may walk it.
inline constexpr std::size_t kGroupSlots = 256;
inline std::array<std::atomic<pid_t>, kGroupSlots> live_groups{};

inline void track_group(pid_t pgid) {
  for (auto& slot : live_groups) {
    pid_t empty = 0;
    if (slot.compare_exchange_strong(empty, pgid)) return;
  }
}

inline void untrack_group(pid_t pgid) {
  for (auto& slot : live_groups) {
    pid_t expected = pgid;
    if (slot.compare_exchange_strong(expected, 0)) return;
  }
}

}  // namespace detail

// Async-signal-safe.
inline void kill_live_process_groups() {
  for (auto& slot : detail::live_groups) {
    const pid_t pgid = slot.load();
    if (pgid > 0) kill(-pgid, SIGKILL);
  }
}

// Runs `command` through /bin/sh in `cwd`, in its own process group so a
// timeout can kill everything it spawned. `timeout_ms` <= 0 means no limit.
// On timeout the group gets SIGTERM, then SIGKILL after a short grace.
inline ProcessResult run_shell(const std::string& command,
                               const std::filesystem::path& cwd,
                               long long timeout_ms,
                               const std::map<std::string, std::string>& extra_env = {},
                               std::size_t tail_bytes = 2048) {
  // Everything the child needs is built before fork(); after fork the child
  // only makes async-signal-safe calls.
  std::vector<std::string> env_store;
  for (char** e = environ; *e != nullptr; ++e) {
    std::string kv(*e);
    auto eq = kv.find('=');
    if (eq != std::string::npos && extra_env.count(kv.substr(0, eq))) continue;
    env_store.push_back(std::move(kv));
  }
  for (const auto& [k, v] : extra_env) env_store.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : env_store) envp.push_back(s.data());
  envp.push_back(nullptr);
  const std::string cwd_str = cwd.string();
  const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};

  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe failed: ") + std::strerror(errno));
  }

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw Error(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    setpgid(0, 0);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, 0);
    dup2(fds[1], 1);
    dup2(fds[1], 2);
    if (chdir(cwd_str.c_str()) != 0) _exit(127);
    execve("/bin/sh", const_cast<char* const*>(argv), envp.data());
    _exit(127);
  }
  setpgid(pid, pid);
  detail::track_group(pid);
  close(fds[1]);

  ProcessResult result;
  std::string tail;
  int status = 0;
  bool exited = false;
  bool pipe_open = true;
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  while (!exited) {
    if (timeout_ms > 0 && elapsed_ms() > timeout_ms) {
      kill(-pid, SIGTERM);
      for (int i = 0; i < 50 && waitpid(pid, &status, WNOHANG) == 0; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    if (pipe_open) {
      pollfd p{fds[0], POLLIN, 0};
      int rc = poll(&p, 1, 10);
      if (rc > 0) {
        char buf[4096];
        ssize_t n = read(fds[0], buf, sizeof(buf));
        if (n > 0) {
          tail.append(buf, static_cast<std::size_t>(n));
          if (tail.size() > 4 * tail_bytes) tail.erase(0, tail.size() - tail_bytes);
        } else if (n == 0 || (n < 0 && errno != EINTR && errno != EAGAIN)) {
          pipe_open = false;
        }
      }
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) exited = true;
  }
  // Reap stragglers left in the group and drain what is already buffered.
  kill(-pid, SIGKILL);
  detail::untrack_group(pid);
  if (pipe_open) {
    int flags = fcntl(fds[0], F_GETFL);
    fcntl(fds[0], F_SETFL, flags | O_NONBLOCK);
    char buf[4096];
    ssize_t n;
    while ((n = read(fds[0], buf, sizeof(buf))) > 0) {
      tail.append(buf, static_cast<std::size_t>(n));
    }
  }
  close(fds[0]);

  result.duration_ms = elapsed_ms();
  if (!result.timed_out && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  if (tail.size() > tail_bytes) tail.erase(0, tail.size() - tail_bytes);
  result.output_tail = std::move(tail);
  return result;
}

}  // namespace oracle_gap

#endif  // ORACLE_GAP_PROCESS_HPP_
