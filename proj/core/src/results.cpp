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

#include "pillar/results.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pillar/errors.hpp"

namespace pillar {
namespace {

using nlohmann::json;

const char* const kColumns[] = {
    "dataset_id", "method",        "k",           "epsilon",
    "delta",      "n_labeled",     "n_public",    "seed",
    "backend",    "formula_variant", "budget_split", "learning_rate",
    "steps",      "batch_size",    "test_error",  "train_error",
    "wall_time_ms", "sigma_used",  "xi_hat",      "delta_k_hat",
    "status"};

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(text);
}

std::vector<std::string> row_fields(const ResultRow& r) {
  return {r.dataset_id,
          r.method,
          std::to_string(r.k),
          format_double(r.epsilon),
          format_double(r.delta),
          std::to_string(r.n_labeled),
          std::to_string(r.n_public),
          std::to_string(r.seed),
          r.backend,
          r.formula_variant,
          r.budget_split,
          format_double(r.learning_rate),
          std::to_string(r.steps),
          std::to_string(r.batch_size),
          format_double(r.test_error),
          format_double(r.train_error),
          format_double(r.wall_time_ms),
          format_double(r.sigma_used),
          format_double(r.xi_hat),
          format_double(r.delta_k_hat),
          r.status};
}

ResultRow row_from_fields(const std::vector<std::string>& f) {
  if (f.size() != std::size(kColumns)) {
    throw ParseError("result row has " + std::to_string(f.size()) +
                         " fields, expected " +
                         std::to_string(std::size(kColumns)),
                     0, 0);
  }
  ResultRow r;
  std::size_t i = 0;
  r.dataset_id = f[i++];
  r.method = f[i++];
  r.k = std::stoi(f[i++]);
  r.epsilon = parse_double(f[i++]);
  r.delta = parse_double(f[i++]);
  r.n_labeled = std::stoi(f[i++]);
  r.n_public = std::stoi(f[i++]);
  r.seed = std::stoull(f[i++]);
  r.backend = f[i++];
  r.formula_variant = f[i++];
  r.budget_split = f[i++];
  r.learning_rate = parse_double(f[i++]);
  r.steps = std::stoi(f[i++]);
  r.batch_size = std::stoi(f[i++]);
  r.test_error = parse_double(f[i++]);
  r.train_error = parse_double(f[i++]);
  r.wall_time_ms = parse_double(f[i++]);
  r.sigma_used = parse_double(f[i++]);
  r.xi_hat = parse_double(f[i++]);
  r.delta_k_hat = parse_double(f[i++]);
  r.status = f[i++];
  return r;
}

// Status strings (and file-path dataset ids) can contain commas, so string
// cells use standard CSV quoting.
std::string quote_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

ResultFormat result_format_from_string(const std::string& name) {
  if (name == "csv") return ResultFormat::kCsv;
  if (name == "json-lines" || name == "jsonl") return ResultFormat::kJsonLines;
  throw ConfigError("unknown result format '" + name + "'");
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                   ResultFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");

  if (format == ResultFormat::kCsv) {
    out << "# " << kResultsSchemaVersion << '\n';
    for (std::size_t j = 0; j < std::size(kColumns); ++j) {
      if (j > 0) out << ',';
      out << kColumns[j];
    }
    out << '\n';
    for (const ResultRow& row : rows) {
      const auto fields = row_fields(row);
      for (std::size_t j = 0; j < fields.size(); ++j) {
        if (j > 0) out << ',';
        out << quote_cell(fields[j]);
      }
      out << '\n';
    }
  } else {
    out << json{{"schema", kResultsSchemaVersion}}.dump() << '\n';
    for (const ResultRow& row : rows) {
      const auto fields = row_fields(row);
      json obj = json::object();
      for (std::size_t j = 0; j < fields.size(); ++j) {
        obj[kColumns[j]] = fields[j];
      }
      out << obj.dump() << '\n';
    }
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<ResultRow> read_results(const std::string& path,
                                    ResultFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<ResultRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty results file", 1, 1);

  if (format == ResultFormat::kCsv) {
    if (line != std::string("# ") + kResultsSchemaVersion) {
      throw ParseError("missing schema header", 1, 1);
    }
    if (!std::getline(in, line)) throw ParseError("missing column header", 2, 1);
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      rows.push_back(row_from_fields(split_line(line)));
    }
  } else {
    const json header = json::parse(line);
    if (header.value("schema", "") != kResultsSchemaVersion) {
      throw ParseError("missing schema header", 1, 1);
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json obj = json::parse(line);
      std::vector<std::string> fields;
      fields.reserve(std::size(kColumns));
      for (const char* column : kColumns) {
        fields.push_back(obj.at(column).get<std::string>());
      }
      rows.push_back(row_from_fields(fields));
    }
  }
  return rows;
}

}  // namespace pillar
