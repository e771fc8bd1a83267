/*
 * Copyright 2026 The sysdetect Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "sysdetect/collector.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "sysdetect/error.hpp"
#include "sysdetect/log.hpp"

extern char **environ;

namespace sysdetect {
namespace {

// Extra time before the local kill so a remote timeout can flush output.
constexpr std::chrono::seconds kCollectGrace{10};

void replace_all(std::string &s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

class Pipe {
public:
  Pipe() {
    if (::pipe2(fds_, O_CLOEXEC) != 0) {
      throw Error(ErrorKind::Internal, std::string("pipe: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe &) = delete;
  Pipe &operator=(const Pipe &) = delete;

  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void close_read() {
    if (fds_[0] >= 0) {
      ::close(fds_[0]);
      fds_[0] = -1;
    }
  }
  void close_write() {
    if (fds_[1] >= 0) {
      ::close(fds_[1]);
      fds_[1] = -1;
    }
  }

private:
  int fds_[2] = {-1, -1};
};

} // namespace

std::string join_command(const std::vector<std::string> &argv) {
  std::string line;
  for (const auto &a : argv) {
    if (!line.empty()) {
      line += ' ';
    }
    line += a;
  }
  return line;
}

CommandResult SubprocessRunner::run(const std::vector<std::string> &argv,
                                    std::chrono::seconds limit) {
  if (argv.empty()) {
    throw UsageError("empty command");
  }
  Pipe pipe;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipe.write_end(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, pipe.write_end(), STDERR_FILENO);

  std::vector<char *> args;
  for (const auto &a : argv) {
    args.push_back(const_cast<char *>(a.c_str()));
  }
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw DataError("failed to launch '" + join_command(argv) + "': " + std::strerror(rc));
  }
  pipe.close_write();

  CommandResult result;
  const auto deadline = std::chrono::steady_clock::now() + limit;
  char buf[4096];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      ::kill(pid, SIGTERM);
      break;
    }
    pollfd pfd{pipe.read_end(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0 && errno != EINTR) {
      break;
    }
    if (ready <= 0) {
      continue;
    }
    const ssize_t n = ::read(pipe.read_end(), buf, sizeof buf);
    if (n <= 0) {
      break;
    }
    result.output.append(buf, static_cast<std::size_t>(n));
  }
  if (result.timed_out) {
    // Drain whatever the process flushed before the signal landed.
    pollfd pfd{pipe.read_end(), POLLIN, 0};
    while (::poll(&pfd, 1, 200) > 0) {
      const ssize_t n = ::read(pipe.read_end(), buf, sizeof buf);
      if (n <= 0) {
        break;
      }
      result.output.append(buf, static_cast<std::size_t>(n));
    }
  }

  int status = 0;
  if (result.timed_out && ::waitpid(pid, &status, WNOHANG) == pid) {
    result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
  }
  if (result.timed_out) {
    ::kill(pid, SIGKILL);
  }
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> expand_command(const CollectionSpec &spec) {
  std::vector<std::string> argv;
  std::istringstream words(spec.command_template);
  std::string word;
  while (words >> word) {
    replace_all(word, "{app_id}", spec.app_id);
    replace_all(word, "{duration}", std::to_string(spec.duration.count()));
    argv.push_back(std::move(word));
  }
  return argv;
}

std::string collect_trace(const CollectionSpec &spec, CommandRunner &runner,
                          const std::filesystem::path &traces_dir) {
  if (spec.app_id.empty()) {
    throw UsageError("app id must not be empty");
  }
  if (spec.duration.count() <= 0) {
    throw UsageError("trace duration must be positive");
  }
  auto argv = expand_command(spec);
  if (argv.empty()) {
    throw UsageError("command template is empty");
  }
  log_info("collecting '" + spec.app_id + "' for " + std::to_string(spec.duration.count()) +
           " s: " + join_command(argv));
  CommandResult result = runner.run(argv, spec.duration + kCollectGrace);
  if (result.output.empty()) {
    log_info("warning: empty trace captured for '" + spec.app_id + "'");
  }

  std::error_code ec;
  std::filesystem::create_directories(traces_dir, ec);
  const auto path = traces_dir / (spec.app_id + ".strace");
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write trace file '" + path.string() + "'");
  }
  out << result.output;
  if (!out.flush()) {
    throw DataError("failed writing trace file '" + path.string() + "'");
  }
  return std::move(result.output);
}

} // namespace sysdetect
