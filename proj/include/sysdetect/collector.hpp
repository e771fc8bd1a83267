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
#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace sysdetect {

inline constexpr std::chrono::seconds kDefaultTraceDuration{300};

/// adb shell runs the remainder through the device shell, so $(...) and 2>&1
/// are evaluated on the emulator.
inline constexpr const char *kDefaultCommandTemplate =
    "adb shell timeout {duration} strace -f -tt -p $(pidof {app_id}) 2>&1";

struct CollectionSpec {
  std::string app_id;
  std::chrono::seconds duration = kDefaultTraceDuration;
  std::string command_template = kDefaultCommandTemplate;
};

struct CommandResult {
  int exit_status = 0;   // -1 when terminated by a signal
  bool timed_out = false;
  std::string output;    // stdout and stderr, interleaved
};

class CommandRunner {
public:
  virtual ~CommandRunner() = default;

  /// Runs argv[0] with arguments, returning once it exits or \p limit
  /// elapses (the process is then terminated). Throws DataError if the
  /// command cannot be started.
  virtual CommandResult run(const std::vector<std::string> &argv,
                            std::chrono::seconds limit) = 0;
};

/// posix_spawn-based runner.
class SubprocessRunner : public CommandRunner {
public:
  CommandResult run(const std::vector<std::string> &argv,
                    std::chrono::seconds limit) override;
};

/// Whitespace-splits the template and substitutes {app_id} and {duration}.
std::vector<std::string> expand_command(const CollectionSpec &spec);

std::string join_command(const std::vector<std::string> &argv);

/// Captures one app's trace through \p runner and writes it to
/// <traces_dir>/<app_id>.strace. Returns the captured text.
std::string collect_trace(const CollectionSpec &spec, CommandRunner &runner,
                          const std::filesystem::path &traces_dir);

} // namespace sysdetect
