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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sysdetect {

enum class EventKind { Syscall, Unfinished, Resumed, Signal, Exit, Unparseable };

std::string_view to_string(EventKind kind);

/// One classified strace output line. `name` is set only for Syscall,
/// Unfinished and Resumed; `raw_return` is best-effort and diagnostic only.
struct TraceEvent {
  EventKind kind = EventKind::Unparseable;
  std::string name;
  std::optional<std::int64_t> raw_return;
  std::size_t line_no = 0;

  bool operator==(const TraceEvent &) const = default;
};

/// Syscall evidence for one application trace.
struct TraceProfile {
  std::string app_id;
  std::map<std::string, std::uint64_t> name_counts;
  std::uint64_t total_events = 0;
  std::uint64_t unparseable_lines = 0;

  bool operator==(const TraceProfile &) const = default;
};

/// Classifies a single physical line. Accepted shapes, after optional
/// `[pid N]` / `N ` and `S.frac ` / `HH:MM:SS[.frac] ` prefixes:
///
///   name(args) = ret           Syscall
///   name(args <unfinished ...> Unfinished
///   <... name resumed> ...     Resumed
///   --- ... ---                Signal
///   +++ ... +++                Exit
///
/// Anything else is Unparseable. Never throws.
TraceEvent parse_line(std::string_view line, std::size_t line_no);

/// Aggregates a whole trace. An Unfinished call is counted once when it
/// starts; its Resumed tail only counts when no Unfinished call of the same
/// name is pending.
TraceProfile parse_trace(std::string_view text, std::string app_id);
TraceProfile parse_trace(std::istream &in, std::string app_id);
TraceProfile parse_trace_file(const std::filesystem::path &path,
                              std::string app_id);

/// Sorted key set of name_counts.
std::vector<std::string> distinct_syscalls(const TraceProfile &profile);

} // namespace sysdetect
