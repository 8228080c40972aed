//
// Copyright 2026 The Pillar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "pillar/feature_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace pillar {
namespace {

constexpr char kMagic[4] = {'P', 'I', 'L', 'R'};
constexpr std::uint16_t kBinaryVersion = 1;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

FeatureData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty file", 1, 1);
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw ParseError("empty header", 1, 1);

  bool has_labels = false;
  std::size_t n_features = header.size();
  if (trim(header.back()) == "label") {
    has_labels = true;
    n_features -= 1;
  }
  for (std::size_t j = 0; j < n_features; ++j) {
    const std::string expected = "f" + std::to_string(j);
    if (trim(header[j]) != expected) {
      throw ParseError("expected header column '" + expected + "', got '" +
                           trim(header[j]) + "'",
                       1, j + 1);
    }
  }
  if (n_features == 0) throw ParseError("no feature columns", 1, 1);

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t n_rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw InconsistentWidthError(
          "row " + std::to_string(line_no) + " has " +
          std::to_string(cells.size()) + " cells, expected " +
          std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < n_features; ++j) {
      try {
        std::size_t used = 0;
        const std::string cell = trim(cells[j]);
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        values.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("cannot parse value '" + trim(cells[j]) + "'",
                         line_no, j + 1);
      }
    }
    if (has_labels) {
      const std::string cell = trim(cells.back());
      try {
        std::size_t used = 0;
        const int label = std::stoi(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        labels.push_back(label);
      } catch (const std::exception&) {
        throw UnknownLabelError("cannot parse label '" + cell + "' at row " +
                                std::to_string(line_no));
      }
    }
    ++n_rows;
  }

  FeatureData data;
  data.has_labels = has_labels;
  data.labels = std::move(labels);
  data.points.resize(n_rows, n_features);
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_features; ++j) {
      data.points(i, j) = values[i * n_features + j];
    }
  }
  return data;
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw ParseError("truncated binary file", 0, 0);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

float read_f32(std::istream& in) {
  const std::uint32_t bits = read_le<std::uint32_t>(in);
  float value;
  std::memcpy(&value, &bits, sizeof(value));
  return value;
}

void write_f32(std::ostream& out, float value) {
  std::uint32_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  write_le(out, bits);
}

FeatureData load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("bad magic bytes (expected PILR)", 0, 0);
  }
  const auto version = read_le<std::uint16_t>(in);
  if (version != kBinaryVersion) {
    throw ParseError("unsupported version " + std::to_string(version), 0, 0);
  }
  const auto d = read_le<std::uint32_t>(in);
  const auto n = read_le<std::uint64_t>(in);
  if (d == 0) throw ParseError("zero feature dimension", 0, 0);

  FeatureData data;
  data.points.resize(static_cast<Eigen::Index>(n), d);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      data.points(static_cast<Eigen::Index>(i), j) = read_f32(in);
    }
  }
  // Labels are present iff there is a trailing int8 block of length n.
  in.peek();
  if (!in.eof()) {
    data.has_labels = true;
    data.labels.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      data.labels[i] = static_cast<std::int8_t>(read_le<std::uint8_t>(in));
    }
    in.peek();
    if (!in.eof()) throw ParseError("trailing bytes after label block", 0, 0);
  }
  return data;
}

}  // namespace

FeatureFormat feature_format_from_string(const std::string& name) {
  if (name == "csv") return FeatureFormat::kCsv;
  if (name == "packed-binary" || name == "bin") {
    return FeatureFormat::kPackedBinary;
  }
  throw ConfigError("unknown feature format '" + name + "'");
}

FeatureFormat guess_feature_format(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") {
    return FeatureFormat::kCsv;
  }
  return FeatureFormat::kPackedBinary;
}

LabeledDataset FeatureData::to_labeled() const {
  if (!has_labels) {
    throw UnknownLabelError("file has no label column");
  }
  for (int label : labels) {
    if (label != -1 && label != 1) {
      throw UnknownLabelError(
          "labels are not in {-1, +1}; reduce multiclass data first");
    }
  }
  return LabeledDataset{points, labels};
}

UnlabeledDataset FeatureData::to_unlabeled() const {
  return UnlabeledDataset{points};
}

FeatureData load_features(const std::string& path, FeatureFormat format) {
  FeatureData data = format == FeatureFormat::kCsv ? load_csv(path)
                                                   : load_binary(path);
  if (data.size() > 0) {
    data.points = normalize_to_unit_sphere(data.points);
  }
  return data;
}

void save_features(const std::string& path, FeatureFormat format,
                   const Eigen::MatrixXd& points,
                   const std::vector<int>* labels) {
  if (labels != nullptr &&
      static_cast<Eigen::Index>(labels->size()) != points.rows()) {
    throw DimensionMismatchError("label count does not match point count");
  }

  if (format == FeatureFormat::kCsv) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (j > 0) out << ',';
      out << 'f' << j;
    }
    if (labels != nullptr) out << ",label";
    out << '\n';
    char buf[48];
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      for (Eigen::Index j = 0; j < points.cols(); ++j) {
        if (j > 0) out << ',';
        std::snprintf(buf, sizeof(buf), "%.9g", points(i, j));
        out << buf;
      }
      if (labels != nullptr) out << ',' << (*labels)[i];
      out << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(kMagic, 4);
  write_le(out, kBinaryVersion);
  write_le(out, static_cast<std::uint32_t>(points.cols()));
  write_le(out, static_cast<std::uint64_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      write_f32(out, static_cast<float>(points(i, j)));
    }
  }
  if (labels != nullptr) {
    for (int label : *labels) {
      if (label < std::numeric_limits<std::int8_t>::min() ||
          label > std::numeric_limits<std::int8_t>::max()) {
        throw UnknownLabelError("label " + std::to_string(label) +
                                " does not fit in int8");
      }
      write_le(out, static_cast<std::uint8_t>(static_cast<std::int8_t>(label)));
    }
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

LabeledDataset reduce_one_vs_one(const FeatureData& data, int positive_class,
                                 int negative_class) {
  if (!data.has_labels) throw UnknownLabelError("file has no label column");
  if (positive_class == negative_class) {
    throw ConfigError("one-vs-one classes must differ");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.labels[i] == positive_class || data.labels[i] == negative_class) {
      keep.push_back(i);
    }
  }
  if (keep.empty()) {
    throw ConfigError("no rows with the requested class pair");
  }
  LabeledDataset out;
  out.points.resize(static_cast<Eigen::Index>(keep.size()), data.dim());
  out.labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = data.points.row(keep[i]);
    out.labels.push_back(data.labels[keep[i]] == positive_class ? 1 : -1);
  }
  return out;
}

std::vector<int> distinct_labels(const FeatureData& data) {
  std::set<int> seen(data.labels.begin(), data.labels.end());
  return std::vector<int>(seen.begin(), seen.end());
}

}  // namespace pillar
