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
#include "sysdetect/dataset_io.hpp"

#include <charconv>
#include <fstream>

#include "sysdetect/error.hpp"

namespace sysdetect {
namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

DataError line_error(std::size_t line_no, const std::string &what) {
  return DataError("line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_count(std::string_view text, std::size_t line_no, const char *what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw line_error(line_no, std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path &path, const char *what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(std::string("cannot open ") + what + " '" + path.string() + "'");
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path &path, const char *what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError(std::string("cannot write ") + what + " '" + path.string() + "'");
  }
  return out;
}

void finish_output(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out) {
    throw DataError("failed writing '" + path.string() + "'");
  }
}

std::string arff_name(std::string_view name) {
  const bool plain = !name.empty() &&
                     name.find_first_of(" \t,{}%'\"\\") == std::string_view::npos;
  if (plain) {
    return std::string(name);
  }
  std::string quoted = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') {
      quoted += '\\';
    }
    quoted += c;
  }
  return quoted + "'";
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

void write_dataset_csv(std::ostream &out, const Dataset &ds) {
  ds.validate();
  out << "app_id,label,det_count";
  for (const auto &name : ds.vocabulary.names()) {
    out << ',' << csv_field(name);
  }
  out << '\n';
  for (const auto &row : ds.rows) {
    out << csv_field(row.app_id) << ',' << to_string(*row.label) << ','
        << row.detection_count;
    for (auto bit : row.bits) {
      out << ',' << (bit ? '1' : '0');
    }
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("missing header");
  }
  auto header = split_csv_line(strip_cr(line));
  if (header.size() < 3 || header[0] != "app_id" || header[1] != "label" ||
      header[2] != "det_count") {
    throw line_error(1, "header must start with app_id,label,det_count");
  }
  Dataset ds;
  ds.vocabulary = FeatureVocabulary::from_names({header.begin() + 3, header.end()});

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw line_error(line_no, "expected " + std::to_string(header.size()) +
                                    " fields, found " + std::to_string(fields.size()));
    }
    FeatureVector row;
    row.app_id = fields[0];
    if (row.app_id.empty()) {
      throw line_error(line_no, "empty app_id");
    }
    row.label = parse_label(fields[1]);
    if (!row.label) {
      throw line_error(line_no, "unknown label '" + fields[1] + "'");
    }
    row.detection_count = parse_count(fields[2], line_no, "det_count");
    row.bits.reserve(ds.vocabulary.size());
    for (std::size_t i = 3; i < fields.size(); ++i) {
      if (fields[i] == "0") {
        row.bits.push_back(0);
      } else if (fields[i] == "1") {
        row.bits.push_back(1);
      } else {
        throw line_error(line_no, "non-binary value '" + fields[i] + "' for feature '" +
                                      header[i] + "'");
      }
    }
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

void save_dataset_csv(const Dataset &ds, const std::filesystem::path &path) {
  auto out = open_output(path, "dataset");
  write_dataset_csv(out, ds);
  finish_output(out, path);
}

Dataset load_dataset_csv(const std::filesystem::path &path) {
  auto in = open_input(path, "dataset");
  try {
    return read_dataset_csv(in);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_arff(std::ostream &out, const Dataset &ds) {
  ds.validate();
  out << "@relation syscalls\n";
  for (const auto &name : ds.vocabulary.names()) {
    out << "@attribute " << arff_name(name) << " {0,1}\n";
  }
  out << "@attribute det_count numeric\n";
  out << "@attribute class {malicious,benign}\n";
  out << "@data\n";
  for (const auto &row : ds.rows) {
    for (auto bit : row.bits) {
      out << (bit ? '1' : '0') << ',';
    }
    out << row.detection_count << ',' << to_string(*row.label) << '\n';
  }
}

void save_arff(const Dataset &ds, const std::filesystem::path &path) {
  auto out = open_output(path, "ARFF file");
  write_arff(out, ds);
  finish_output(out, path);
}

FeatureVocabulary read_vocabulary(std::istream &in) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    auto name = trim(strip_cr(line));
    if (!name.empty()) {
      names.push_back(std::move(name));
    }
  }
  return FeatureVocabulary::from_names(std::move(names));
}

FeatureVocabulary load_vocabulary(const std::filesystem::path &path) {
  auto in = open_input(path, "vocabulary file");
  try {
    return read_vocabulary(in);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_vocabulary(const FeatureVocabulary &vocab, const std::filesystem::path &path) {
  auto out = open_output(path, "vocabulary file");
  for (const auto &name : vocab.names()) {
    out << name << '\n';
  }
  finish_output(out, path);
}

std::map<std::string, LabelRecord> read_labels(std::istream &in) {
  std::map<std::string, LabelRecord> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (trim(line).empty()) {
      continue;
    }
    auto fields = split_csv_line(line);
    for (auto &f : fields) {
      f = trim(f);
    }
    if (line_no == 1 && fields[0] == "app_id") {
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw line_error(line_no, "expected app_id,label[,detection_count]");
    }
    if (fields[0].empty()) {
      throw line_error(line_no, "empty app_id");
    }
    LabelRecord rec;
    auto label = parse_label(fields[1]);
    if (!label) {
      throw line_error(line_no, "unknown label '" + fields[1] + "'");
    }
    rec.label = *label;
    if (fields.size() == 3 && !fields[2].empty()) {
      rec.detection_count = parse_count(fields[2], line_no, "detection_count");
    }
    if (!labels.emplace(fields[0], rec).second) {
      throw line_error(line_no, "duplicate app_id '" + fields[0] + "'");
    }
  }
  return labels;
}

std::map<std::string, LabelRecord> load_labels(const std::filesystem::path &path) {
  auto in = open_input(path, "labels file");
  try {
    return read_labels(in);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

} // namespace sysdetect
