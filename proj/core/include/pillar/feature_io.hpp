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

#ifndef PILLAR_FEATURE_IO_HPP_
#define PILLAR_FEATURE_IO_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pillar/dataset.hpp"

namespace pillar {

// Feature-file formats.
//
// CSV: UTF-8, '.' decimal separator, header row with feature columns
// f0..f{d-1} and an optional trailing integer `label` column.
//
// Packed binary: magic "PILR", u16 version (currently 1), u32 d, u64 n,
// n*d little-endian float32 features, then optionally n little-endian int8
// labels. Declared precision is float32 (~1e-7 relative).
enum class FeatureFormat { kCsv, kPackedBinary };

FeatureFormat feature_format_from_string(const std::string& name);
// Picks the format from the file extension (.csv vs anything else).
FeatureFormat guess_feature_format(const std::string& path);

// Loaded features before conversion to a dataset. Labels may be multiclass;
// `to_labeled` requires them to already be in {-1, +1} (use
// reduce_one_vs_one for multiclass files).
struct FeatureData {
  Eigen::MatrixXd points;
  std::vector<int> labels;
  bool has_labels = false;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  LabeledDataset to_labeled() const;
  UnlabeledDataset to_unlabeled() const;
};

// Reads a feature file and normalizes every row onto the unit sphere.
// Throws ParseError (with row/column), InconsistentWidthError,
// UnknownLabelError, IoError.
FeatureData load_features(const std::string& path, FeatureFormat format);

// Writes points (and labels when non-null) in the given format. Binary
// labels must fit in int8. Throws IoError.
void save_features(const std::string& path, FeatureFormat format,
                   const Eigen::MatrixXd& points,
                   const std::vector<int>* labels);

// Binary task from a multiclass file: rows labelled `positive_class` map to
// +1 and `negative_class` to -1; everything else is dropped.
LabeledDataset reduce_one_vs_one(const FeatureData& data, int positive_class,
                                 int negative_class);

// Distinct labels present, ascending.
std::vector<int> distinct_labels(const FeatureData& data);

}  // namespace pillar

#endif  // PILLAR_FEATURE_IO_HPP_
