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
#include "sysdetect/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "sysdetect/error.hpp"
#include "sysdetect/random.hpp"

namespace sysdetect {
namespace fs = std::filesystem;

namespace {

const char *const kNamePool[] = {
    "accept",        "accept4",        "access",          "bind",            "brk",
    "capget",        "capset",         "chdir",           "chmod",           "chown",
    "clock_getres",  "clock_gettime",  "clock_nanosleep", "clone",           "close",
    "connect",       "dup",            "dup2",            "dup3",            "epoll_create1",
    "epoll_ctl",     "epoll_pwait",    "eventfd2",        "execve",          "exit",
    "exit_group",    "faccessat",      "fadvise64",       "fallocate",       "fchdir",
    "fchmod",        "fchmodat",       "fchown",          "fchownat",        "fcntl",
    "fdatasync",     "fgetxattr",      "flock",           "fstat",           "fstatat64",
    "fstatfs",       "fsync",          "ftruncate",       "futex",           "getcwd",
    "getdents64",    "getegid",        "geteuid",         "getgid",          "getgroups",
    "getpeername",   "getpgid",        "getpid",          "getppid",         "getpriority",
    "getrandom",     "getresgid",      "getresuid",       "getrlimit",       "getrusage",
    "getsid",        "getsockname",    "getsockopt",      "gettid",          "gettimeofday",
    "getuid",        "getxattr",       "inotify_add_watch", "inotify_init1", "ioctl",
    "kill",          "lseek",          "madvise",         "mincore",         "mkdirat",
    "mknodat",       "mlock",          "mmap",            "mmap2",           "mount",
    "mprotect",      "mremap",         "msync",           "munlock",         "munmap",
    "nanosleep",     "openat",         "personality",     "pipe2",           "poll",
    "ppoll",         "prctl",          "pread64",         "prlimit64",       "process_vm_readv",
    "pselect6",      "ptrace",         "pwrite64",        "read",            "readlinkat",
    "readv",         "recvfrom",       "recvmsg",         "renameat",        "rt_sigaction",
    "rt_sigprocmask", "rt_sigreturn",  "rt_sigsuspend",   "rt_sigtimedwait", "sched_getaffinity",
    "sched_getparam", "sched_getscheduler", "sched_setscheduler", "sched_yield", "sendmsg",
    "sendto",        "set_robust_list", "set_tid_address", "setgid",         "setgroups",
    "setitimer",     "setpgid",        "setpriority",     "setresgid",       "setresuid",
    "setrlimit",     "setsid",         "setsockopt",      "setuid",          "shutdown",
    "sigaltstack",   "socket",         "socketpair",      "splice",          "statfs",
    "symlinkat",     "sync",           "syncfs",          "sysinfo",         "tgkill",
    "timer_create",  "timerfd_create", "timerfd_settime", "truncate",        "umask",
    "umount2",       "uname",          "unlinkat",        "unshare",         "utimensat",
    "vfork",         "wait4",          "waitid",          "write",           "writev",
};

// Names that are never part of the vocabulary; they exercise leftovers.
const char *const kOffVocabulary[] = {"ioprio_get", "kcmp", "name_to_handle_at",
                                      "perf_event_open", "userfaultfd"};

const char *const kReturns[] = {
    "0", "1", "3", "8", "42", "4096", "0x7f3a2c000000",
    "-1 ENOENT (No such file or directory)", "-1 EAGAIN (Resource temporarily unavailable)",
    "-1 EACCES (Permission denied)"};

std::string prefix(Rng &rng, std::uint64_t pid) {
  std::string p;
  switch (rng.index(3)) {
  case 0:
    break;
  case 1:
    p = "[pid " + std::to_string(pid) + "] ";
    break;
  default:
    p = std::to_string(pid) + "  ";
    break;
  }
  if (rng.bernoulli(0.5)) {
    char ts[48];
    std::snprintf(ts, sizeof ts, "%02u:%02u:%02u.%06u ",
                  static_cast<unsigned>(rng.index(24)), static_cast<unsigned>(rng.index(60)),
                  static_cast<unsigned>(rng.index(60)), static_cast<unsigned>(rng.index(1000000)));
    p += ts;
  }
  return p;
}

std::vector<std::string> trace_lines(const std::vector<std::string> &present, Rng &rng) {
  const std::uint64_t pid = 1000 + rng.index(30000);
  std::vector<std::vector<std::string>> groups;
  for (const auto &name : present) {
    const std::size_t repeats = 1 + rng.index(4);
    for (std::size_t r = 0; r < repeats; ++r) {
      const std::string args = "0x" + std::to_string(1000 + rng.index(9000)) + ", " +
                               std::to_string(rng.index(64));
      if (rng.bernoulli(0.1)) {
        groups.push_back({prefix(rng, pid) + name + "(" + args + " <unfinished ...>",
                          prefix(rng, pid) + "<... " + name + " resumed> ) = " +
                              kReturns[rng.index(std::size(kReturns))]});
      } else {
        groups.push_back({prefix(rng, pid) + name + "(" + args + ") = " +
                          kReturns[rng.index(std::size(kReturns))]});
      }
    }
  }
  if (rng.bernoulli(0.5)) {
    groups.push_back({prefix(rng, pid) +
                      "--- SIGCHLD {si_signo=SIGCHLD, si_code=CLD_EXITED, si_status=0} ---"});
  }
  if (rng.bernoulli(0.3)) {
    groups.push_back({"strace: Process " + std::to_string(pid) + " attached"});
  }
  rng.shuffle(std::span<std::vector<std::string>>(groups));

  std::vector<std::string> lines;
  for (auto &g : groups) {
    for (auto &l : g) {
      lines.push_back(std::move(l));
    }
  }
  lines.push_back(prefix(rng, pid) + "+++ exited with 0 +++");
  return lines;
}

} // namespace

std::size_t synthetic_name_pool_size() { return std::size(kNamePool); }

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec &spec, const fs::path &root) {
  if (spec.vocabulary_size == 0 || spec.vocabulary_size > synthetic_name_pool_size()) {
    throw UsageError("vocabulary size must be in [1, " +
                     std::to_string(synthetic_name_pool_size()) + "]");
  }
  if (spec.planted > spec.vocabulary_size) {
    throw UsageError("cannot plant more syscalls than the vocabulary holds");
  }
  if (spec.malicious == 0 || spec.malicious >= spec.apps) {
    throw UsageError("synthetic corpus needs both malicious and benign apps");
  }
  if (!(spec.flip_noise >= 0.0 && spec.flip_noise <= 1.0)) {
    throw UsageError("flip noise must be in [0, 1]");
  }

  Rng rng(spec.seed);
  std::vector<std::string> vocab(kNamePool, kNamePool + spec.vocabulary_size);

  std::vector<std::size_t> order(vocab.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  // planted[i] < planted/2 marks malicious-indicative names
  std::vector<int> role(vocab.size(), -1);
  SyntheticCorpus corpus;
  for (std::size_t i = 0; i < spec.planted; ++i) {
    role[order[i]] = static_cast<int>(i);
    corpus.planted_names.push_back(vocab[order[i]]);
  }
  std::vector<double> base_rate(vocab.size());
  for (auto &r : base_rate) {
    r = 0.2 + 0.6 * rng.uniform();
  }

  std::vector<bool> malicious(spec.apps, false);
  std::fill(malicious.begin(), malicious.begin() + static_cast<std::ptrdiff_t>(spec.malicious), true);
  for (std::size_t i = spec.apps; i > 1; --i) {
    const std::size_t j = rng.index(i);
    const bool tmp = malicious[i - 1];
    malicious[i - 1] = malicious[j];
    malicious[j] = tmp;
  }

  corpus.traces_dir = root / "traces";
  corpus.labels_path = root / "labels.csv";
  corpus.vocabulary_path = root / "vocabulary.txt";
  std::error_code ec;
  fs::create_directories(corpus.traces_dir, ec);
  if (ec) {
    throw DataError("cannot create '" + corpus.traces_dir.string() + "': " + ec.message());
  }

  std::ofstream labels(corpus.labels_path, std::ios::binary);
  labels << "app_id,label,detection_count\n";
  for (std::size_t a = 0; a < spec.apps; ++a) {
    char id[32];
    std::snprintf(id, sizeof id, "app_%03zu", a);
    std::vector<std::string> present;
    for (std::size_t v = 0; v < vocab.size(); ++v) {
      bool on;
      if (role[v] >= 0) {
        const bool malicious_marker = static_cast<std::size_t>(role[v]) < spec.planted / 2;
        on = malicious_marker == malicious[a];
        if (rng.bernoulli(spec.flip_noise)) {
          on = !on;
        }
      } else {
        on = rng.bernoulli(base_rate[v]);
      }
      if (on) {
        present.push_back(vocab[v]);
      }
    }
    if (rng.bernoulli(0.2)) {
      present.emplace_back(kOffVocabulary[rng.index(std::size(kOffVocabulary))]);
    }
    std::ofstream trace(corpus.traces_dir / (std::string(id) + ".strace"), std::ios::binary);
    for (const auto &line : trace_lines(present, rng)) {
      trace << line << '\n';
    }
    const std::uint64_t det = rng.index(spec.max_detection_count + 1);
    labels << id << ',' << (malicious[a] ? "malicious" : "benign") << ',' << det << '\n';
    if (!trace) {
      throw DataError("failed writing synthetic trace '" + std::string(id) + "'");
    }
  }
  if (!labels.flush()) {
    throw DataError("failed writing '" + corpus.labels_path.string() + "'");
  }

  std::vector<std::string> sorted = vocab;
  std::sort(sorted.begin(), sorted.end());
  std::ofstream vf(corpus.vocabulary_path, std::ios::binary);
  for (const auto &n : sorted) {
    vf << n << '\n';
  }
  if (!vf.flush()) {
    throw DataError("failed writing '" + corpus.vocabulary_path.string() + "'");
  }
  return corpus;
}

} // namespace sysdetect
