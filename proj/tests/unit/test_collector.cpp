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
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sysdetect/collector.hpp"
#include "sysdetect/error.hpp"
#include "sysdetect/trace_parser.hpp"
#include "temp_dir.hpp"

using namespace sysdetect;
using namespace testing;

namespace {

class FakeRunner : public CommandRunner {
public:
  explicit FakeRunner(std::string output, bool fail = false)
      : output_(std::move(output)), fail_(fail) {}

  CommandResult run(const std::vector<std::string> &argv, std::chrono::seconds limit) override {
    last_argv = argv;
    last_limit = limit;
    if (fail_) {
      throw DataError("failed to launch '" + join_command(argv) + "'");
    }
    return {0, false, output_};
  }

  std::vector<std::string> last_argv;
  std::chrono::seconds last_limit{0};

private:
  std::string output_;
  bool fail_;
};

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("default collection spec") {
  CollectionSpec spec;
  CHECK(spec.duration == std::chrono::seconds(300));
  spec.app_id = "com.example";
  auto argv = expand_command(spec);
  const std::string line = join_command(argv);
  CHECK(argv.front() == "adb");
  CHECK(line.find("timeout 300") != std::string::npos);
  CHECK(line.find("pidof com.example") != std::string::npos);
}

TEST_CASE("fake runner output becomes a trace file") {
  TempDir dir;
  FakeRunner runner("open(\"/a\", O_RDONLY) = 3\nread(3, \"\", 1) = 0\nclose(3) = 0\n");
  CollectionSpec spec;
  spec.app_id = "com.fake";
  spec.duration = std::chrono::seconds(7);
  const std::string text = collect_trace(spec, runner, dir.path());
  const auto file = dir / "com.fake.strace";
  CHECK(slurp(file) == text);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  auto profile = parse_trace_file(file, "com.fake");
  CHECK(profile.total_events == 3);
  CHECK(runner.last_limit > std::chrono::seconds(7));
}

TEST_CASE("runner failure names the command") {
  TempDir dir;
  FakeRunner runner("", true);
  CollectionSpec spec;
  spec.app_id = "com.fail";
  spec.command_template = "tracer --app {app_id} --for {duration}";
  try {
    collect_trace(spec, runner, dir.path());
    FAIL("expected error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("tracer --app com.fail --for 300") != std::string::npos);
  }
}

TEST_CASE("empty capture yields an empty trace") {
  TempDir dir;
  FakeRunner runner("");
  CollectionSpec spec;
  spec.app_id = "quiet";
  CHECK(collect_trace(spec, runner, dir.path()).empty());
  CHECK(parse_trace_file(dir / "quiet.strace", "quiet").total_events == 0);
}

TEST_CASE("invalid specs") {
  TempDir dir;
  FakeRunner runner("x");
  CollectionSpec spec;
  CHECK_THROWS_AS(collect_trace(spec, runner, dir.path()), UsageError);
  spec.app_id = "a";
  spec.duration = std::chrono::seconds(0);
  CHECK_THROWS_AS(collect_trace(spec, runner, dir.path()), UsageError);
}

TEST_CASE("subprocess runner") {
  SubprocessRunner runner;
  auto r = runner.run({"sh", "-c", "echo out; echo err >&2; exit 3"}, std::chrono::seconds(10));
  CHECK(r.exit_status == 3);
  CHECK_FALSE(r.timed_out);
  CHECK(r.output.find("out\n") != std::string::npos);
  CHECK(r.output.find("err\n") != std::string::npos);

  try {
    runner.run({"/nonexistent/tracer-binary", "-x"}, std::chrono::seconds(1));
    FAIL("expected error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("/nonexistent/tracer-binary -x") != std::string::npos);
  }

  auto slow = runner.run({"sleep", "5"}, std::chrono::seconds(1));
  CHECK(slow.timed_out);
}
