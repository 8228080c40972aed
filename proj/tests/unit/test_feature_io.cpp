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

#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "pillar/results.hpp"
#include "pillar/rng.hpp"

namespace {

using namespace pillar;
namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("pillar-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

TEST_CASE("labelled CSV fixture loads and normalizes") {
  TempDir dir;
  const std::string path = dir.file("fixture.csv");
  write_text(path, "f0,f1,label\n3,4,+1\n0,1,-1\n1,0,+1\n");

  const FeatureData data = load_features(path, FeatureFormat::kCsv);
  REQUIRE(data.size() == 3);
  REQUIRE(data.dim() == 2);
  REQUIRE(data.has_labels);
  CHECK(data.labels == std::vector<int>{1, -1, 1});
  CHECK(data.points(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(data.points(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(data.points(1, 1) == doctest::Approx(1.0));

  const LabeledDataset labeled = data.to_labeled();
  CHECK(labeled.size() == 3);
}

TEST_CASE("CSV without a label column loads as unlabelled") {
  TempDir dir;
  const std::string path = dir.file("plain.csv");
  write_text(path, "f0,f1\n1,0\n0,2\n");
  const FeatureData data = load_features(path, FeatureFormat::kCsv);
  CHECK_FALSE(data.has_labels);
  CHECK(data.size() == 2);
  CHECK_THROWS_AS(data.to_labeled(), UnknownLabelError);
  CHECK(data.to_unlabeled().size() == 2);
}

TEST_CASE("CSV errors carry locations") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");

  write_text(path, "f0,g1\n1,2\n");
  CHECK_THROWS_AS(load_features(path, FeatureFormat::kCsv), ParseError);

  write_text(path, "f0,f1\n1,2\n3\n");
  CHECK_THROWS_AS(load_features(path, FeatureFormat::kCsv),
                  InconsistentWidthError);

  write_text(path, "f0,f1\n1,abc\n");
  try {
    load_features(path, FeatureFormat::kCsv);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.col() == 2);
  }

  write_text(path, "f0,f1,label\n1,2,x\n");
  CHECK_THROWS_AS(load_features(path, FeatureFormat::kCsv), UnknownLabelError);

  CHECK_THROWS_AS(load_features(dir.file("missing.csv"), FeatureFormat::kCsv),
                  IoError);
}

TEST_CASE("packed binary round trip at float precision") {
  TempDir dir;
  const std::string path = dir.file("features.bin");

  Rng rng(100);
  const int n = 1000;
  const int d = 16;
  Eigen::MatrixXd points(n, d);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    points.row(i) = rng.unit_sphere(d);
    labels[i] = rng.uniform() < 0.5 ? -1 : 1;
  }

  save_features(path, FeatureFormat::kPackedBinary, points, &labels);
  const FeatureData loaded = load_features(path, FeatureFormat::kPackedBinary);
  REQUIRE(loaded.size() == n);
  REQUIRE(loaded.dim() == d);
  REQUIRE(loaded.has_labels);
  CHECK(loaded.labels == labels);
  CHECK((loaded.points - points).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("binary without labels and corrupted headers") {
  TempDir dir;
  const std::string path = dir.file("plain.bin");
  Rng rng(101);
  Eigen::MatrixXd points(5, 3);
  for (int i = 0; i < 5; ++i) points.row(i) = rng.unit_sphere(3);

  save_features(path, FeatureFormat::kPackedBinary, points, nullptr);
  const FeatureData loaded = load_features(path, FeatureFormat::kPackedBinary);
  CHECK_FALSE(loaded.has_labels);

  write_text(dir.file("junk.bin"), "NOPE");
  CHECK_THROWS_AS(
      load_features(dir.file("junk.bin"), FeatureFormat::kPackedBinary),
      ParseError);
}

TEST_CASE("one-vs-one reduction maps the class pair to +/-1") {
  FeatureData data;
  data.points = Eigen::MatrixXd::Identity(4, 4);
  data.labels = {0, 1, 2, 1};
  data.has_labels = true;

  const LabeledDataset reduced = reduce_one_vs_one(data, 1, 2);
  REQUIRE(reduced.size() == 3);
  CHECK(reduced.labels == std::vector<int>{1, -1, 1});
  CHECK(distinct_labels(data) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(reduce_one_vs_one(data, 5, 6), ConfigError);
}

TEST_CASE("result files round trip in both formats with identical values") {
  TempDir dir;
  Rng rng(102);
  std::vector<ResultRow> rows;
  for (int i = 0; i < 100; ++i) {
    ResultRow row;
    row.dataset_id = "gmm-d50";
    row.method = i % 2 == 0 ? "pillar" : "jl";
    row.k = 2 + i;
    row.epsilon = i % 3 == 0 ? std::numeric_limits<double>::infinity()
                             : 0.1 * (i + 1);
    row.delta = 1e-5;
    row.n_labeled = 2000;
    row.n_public = 200;
    row.seed = 7000 + i;
    row.backend = "rdp-dpsgd";
    row.formula_variant = "paper-literal";
    row.budget_split = "normalized:0.5";
    row.learning_rate = 0.1;
    row.steps = 1000;
    row.batch_size = 128;
    row.test_error = rng.uniform();
    row.train_error = rng.uniform();
    row.sigma_used = 10.0 * rng.uniform();
    row.xi_hat = rng.uniform();
    row.delta_k_hat = rng.uniform();
    rows.push_back(row);
  }

  const std::string csv = dir.file("rows.csv");
  const std::string jsonl = dir.file("rows.jsonl");
  write_results(rows, csv, ResultFormat::kCsv);
  write_results(rows, jsonl, ResultFormat::kJsonLines);

  const auto from_csv = read_results(csv, ResultFormat::kCsv);
  const auto from_jsonl = read_results(jsonl, ResultFormat::kJsonLines);
  REQUIRE(from_csv.size() == rows.size());
  REQUIRE(from_jsonl.size() == rows.size());

  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Round trip at declared (6 significant digit) precision.
    CHECK(from_csv[i].k == rows[i].k);
    CHECK(from_csv[i].seed == rows[i].seed);
    CHECK(from_csv[i].test_error ==
          doctest::Approx(rows[i].test_error).epsilon(1e-5));
    // Cross-format consistency is exact field by field.
    CHECK(from_csv[i].test_error == from_jsonl[i].test_error);
    CHECK(from_csv[i].epsilon == from_jsonl[i].epsilon);
    CHECK(from_csv[i].dataset_id == from_jsonl[i].dataset_id);
    CHECK(from_csv[i].status == from_jsonl[i].status);
  }
}

TEST_CASE("string fields with commas and quotes survive the CSV round trip") {
  TempDir dir;
  ResultRow row;
  row.dataset_id = "data/some, odd \"path\".csv";
  row.method = "pillar";
  row.k = 9;
  row.epsilon = 0.5;
  row.seed = 1;
  row.backend = "rdp-dpsgd";
  row.formula_variant = "paper-literal";
  row.budget_split = "normalized:0.5";
  row.status = "k = 9 outside [1, 3]";

  const std::string path = dir.file("quoted.csv");
  write_results({row}, path, ResultFormat::kCsv);
  const auto back = read_results(path, ResultFormat::kCsv);
  REQUIRE(back.size() == 1);
  CHECK(back[0].dataset_id == row.dataset_id);
  CHECK(back[0].status == row.status);
  CHECK(back[0].k == 9);
}

TEST_CASE("empty row list writes a header-only file") {
  TempDir dir;
  const std::string path = dir.file("empty.csv");
  write_results({}, path, ResultFormat::kCsv);
  std::ifstream in(path);
  std::string first;
  std::string second;
  std::string extra;
  REQUIRE(std::getline(in, first));
  REQUIRE(std::getline(in, second));
  CHECK_FALSE(std::getline(in, extra));
  CHECK(first == std::string("# ") + kResultsSchemaVersion);
  CHECK(second.rfind("dataset_id,", 0) == 0);
  CHECK(read_results(path, ResultFormat::kCsv).empty());
}

}  // namespace
