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
#include "sysdetect/trace_parser.hpp"

#include <charconv>
#include <fstream>
#include <unordered_map>

#include "sysdetect/error.hpp"

namespace sysdetect {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t'; }
bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::string_view trim_left(std::string_view s) {
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  return s;
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (is_space(s.back()) || s.back() == '\r' ||
                        s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::size_t count_digits(std::string_view s, std::size_t from) {
  std::size_t i = from;
  while (i < s.size() && is_digit(s[i])) {
    ++i;
  }
  return i - from;
}

// Drops "[pid 123]" or a bare "123" followed by whitespace.
std::string_view strip_pid(std::string_view s) {
  if (s.starts_with("[pid")) {
    auto close = s.find(']');
    if (close == std::string_view::npos) {
      return s;
    }
    return trim_left(s.substr(close + 1));
  }
  std::size_t n = count_digits(s, 0);
  if (n > 0 && n < s.size() && is_space(s[n])) {
    return trim_left(s.substr(n));
  }
  return s;
}

// Drops "1700000000.123456" or "HH:MM:SS[.frac]" followed by whitespace.
std::string_view strip_timestamp(std::string_view s) {
  std::size_t i = count_digits(s, 0);
  if (i == 0 || i >= s.size()) {
    return s;
  }
  if (s[i] == '.') {
    std::size_t frac = count_digits(s, i + 1);
    if (frac == 0) {
      return s;
    }
    i += 1 + frac;
  } else if (s[i] == ':' && i == 2) {
    // HH:MM:SS
    if (s.size() < 8 || count_digits(s, 3) != 2 || s[5] != ':' ||
        count_digits(s, 6) != 2) {
      return s;
    }
    i = 8;
    if (i < s.size() && s[i] == '.') {
      std::size_t frac = count_digits(s, i + 1);
      if (frac == 0) {
        return s;
      }
      i += 1 + frac;
    }
  } else {
    return s;
  }
  if (i < s.size() && is_space(s[i])) {
    return trim_left(s.substr(i));
  }
  return s;
}

std::size_t identifier_length(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) {
    return 0;
  }
  std::size_t n = 1;
  while (n < s.size() && is_ident_char(s[n])) {
    ++n;
  }
  return n;
}

std::optional<std::int64_t> parse_return(std::string_view token) {
  token = trim_left(token);
  std::int64_t value = 0;
  if (token.starts_with("0x") || token.starts_with("0X")) {
    std::uint64_t u = 0;
    auto [ptr, ec] =
        std::from_chars(token.data() + 2, token.data() + token.size(), u, 16);
    if (ec != std::errc{} || ptr == token.data() + 2) {
      return std::nullopt;
    }
    return static_cast<std::int64_t>(u);
  }
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr == token.data()) {
    return std::nullopt;
  }
  return value;
}

// Return token after the last " = ", if any.
std::optional<std::int64_t> trailing_return(std::string_view s) {
  auto eq = s.rfind(" = ");
  if (eq == std::string_view::npos) {
    return std::nullopt;
  }
  return parse_return(s.substr(eq + 3));
}

} // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
  case EventKind::Syscall:
    return "syscall";
  case EventKind::Unfinished:
    return "unfinished";
  case EventKind::Resumed:
    return "resumed";
  case EventKind::Signal:
    return "signal";
  case EventKind::Exit:
    return "exit";
  case EventKind::Unparseable:
    return "unparseable";
  }
  return "unparseable";
}

TraceEvent parse_line(std::string_view line, std::size_t line_no) {
  TraceEvent event;
  event.line_no = line_no;

  std::string_view s = trim_right(trim_left(line));
  s = strip_timestamp(strip_pid(s));

  if (s.starts_with("---")) {
    if (s.size() >= 6 && s.ends_with("---")) {
      event.kind = EventKind::Signal;
    }
    return event;
  }
  if (s.starts_with("+++")) {
    if (s.size() >= 6 && s.ends_with("+++")) {
      event.kind = EventKind::Exit;
    }
    return event;
  }

  if (s.starts_with("<... ")) {
    std::string_view rest = s.substr(5);
    std::size_t n = identifier_length(rest);
    if (n == 0 || !rest.substr(n).starts_with(" resumed>")) {
      return event;
    }
    event.kind = EventKind::Resumed;
    event.name = std::string(rest.substr(0, n));
    event.raw_return = trailing_return(rest.substr(n));
    return event;
  }

  std::size_t n = identifier_length(s);
  if (n == 0 || n >= s.size() || s[n] != '(') {
    return event;
  }
  if (s.ends_with("<unfinished ...>")) {
    event.kind = EventKind::Unfinished;
    event.name = std::string(s.substr(0, n));
    return event;
  }
  auto eq = s.rfind(" = ");
  if (eq == std::string_view::npos || eq <= n) {
    return event;
  }
  std::string_view call = trim_right(s.substr(0, eq));
  if (call.empty() || call.back() != ')') {
    return event;
  }
  event.kind = EventKind::Syscall;
  event.name = std::string(s.substr(0, n));
  event.raw_return = parse_return(s.substr(eq + 3));
  return event;
}

namespace {

class ProfileBuilder {
public:
  explicit ProfileBuilder(std::string app_id) {
    if (app_id.empty()) {
      throw UsageError("app id must not be empty");
    }
    profile_.app_id = std::move(app_id);
  }

  void add(std::string_view line) {
    TraceEvent ev = parse_line(line, ++line_no_);
    switch (ev.kind) {
    case EventKind::Unparseable:
      ++profile_.unparseable_lines;
      return;
    case EventKind::Syscall:
      ++profile_.name_counts[ev.name];
      break;
    case EventKind::Unfinished:
      ++profile_.name_counts[ev.name];
      ++pending_[ev.name];
      break;
    case EventKind::Resumed: {
      auto it = pending_.find(ev.name);
      if (it != pending_.end() && it->second > 0) {
        --it->second;
      } else {
        ++profile_.name_counts[ev.name];
      }
      break;
    }
    case EventKind::Signal:
    case EventKind::Exit:
      break;
    }
    ++profile_.total_events;
  }

  TraceProfile finish() { return std::move(profile_); }

private:
  TraceProfile profile_;
  std::unordered_map<std::string, std::uint64_t> pending_;
  std::size_t line_no_ = 0;
};

} // namespace

TraceProfile parse_trace(std::string_view text, std::string app_id) {
  ProfileBuilder builder(std::move(app_id));
  while (!text.empty()) {
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) {
      builder.add(text);
      break;
    }
    builder.add(text.substr(0, nl));
    text.remove_prefix(nl + 1);
  }
  return builder.finish();
}

TraceProfile parse_trace(std::istream &in, std::string app_id) {
  ProfileBuilder builder(std::move(app_id));
  std::string line;
  while (std::getline(in, line)) {
    builder.add(line);
  }
  return builder.finish();
}

TraceProfile parse_trace_file(const std::filesystem::path &path,
                              std::string app_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open trace file '" + path.string() + "'");
  }
  return parse_trace(in, std::move(app_id));
}

std::vector<std::string> distinct_syscalls(const TraceProfile &profile) {
  std::vector<std::string> names;
  names.reserve(profile.name_counts.size());
  for (const auto &[name, count] : profile.name_counts) {
    names.push_back(name);
  }
  return names;
}

} // namespace sysdetect
