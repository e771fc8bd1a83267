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
#include <string>
#include <vector>

namespace sysdetect {

/// Parameters for a labeled strace corpus with known discriminative syscalls.
/// Half of the planted names are present in malicious apps, the other half in
/// benign ones; each planted bit is flipped with probability flip_noise. The
/// remaining names appear at a per-name rate drawn from [0.2, 0.8],
/// independent of the label.
struct SyntheticSpec {
  std::size_t apps = 66;
  std::size_t malicious = 33;
  std::size_t vocabulary_size = 120;
  std::size_t planted = 6;
  double flip_noise = 0.10;
  std::uint64_t max_detection_count = 3; // uniform, label-independent
  std::uint64_t seed = 2019;
};

struct SyntheticCorpus {
  std::filesystem::path traces_dir;      // <root>/traces/<app_id>.strace
  std::filesystem::path labels_path;     // <root>/labels.csv
  std::filesystem::path vocabulary_path; // <root>/vocabulary.txt
  std::vector<std::string> planted_names;
};

/// Number of distinct syscall names the generator can draw from.
std::size_t synthetic_name_pool_size();

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec &spec,
                                          const std::filesystem::path &root);

} // namespace sysdetect
