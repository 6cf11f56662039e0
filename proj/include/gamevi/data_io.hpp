#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gamevi/error.hpp"

namespace gamevi {

struct Dataset {
  Matrix features;  // N x D
  Vector targets;   // N
  std::vector<std::string> feature_names;
  std::string target_name;
  std::string source;
  std::size_t dropped_rows = 0;

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }
  Dataset subset(const std::vector<Index>& rows) const;
};

/// Column selector: a header name, or a zero-based index. Negative indices
/// count from the end, so the default -1 is the last column.
using ColumnRef = std::variant<std::string, int>;

struct CsvOptions {
  ColumnRef target = -1;
  bool has_header = true;
  char delimiter = ',';
};

/// Reads delimited numeric text. Rows with a missing, unparseable, or
/// non-finite cell (or the wrong cell count) are dropped and counted.
Dataset load_csv(const std::string& path, const CsvOptions& opts = {});
Dataset read_csv(std::istream& in, const CsvOptions& opts = {}, const std::string& source = "<stream>");

/// Writes features followed by the target as the last column, with header.
void write_csv(std::ostream& out, const Dataset& ds);
void write_csv(const std::string& path, const Dataset& ds);

struct MinMax {
  double min = 0.0;
  double max = 0.0;

  double apply(double v) const { return max > min ? (v - min) / (max - min) : 0.0; }
  double invert(double v) const { return max > min ? min + v * (max - min) : min; }
};

/// Per-column min/max fitted on training data only.
struct Scaler {
  std::vector<MinMax> features;
  MinMax target;

  static Scaler fit(const Dataset& train);

  Matrix transform_features(const Matrix& X) const;
  Vector transform_targets(const Vector& y) const;
  Matrix inverse_features(const Matrix& X) const;
  Vector inverse_targets(const Vector& y) const;
  Dataset transform(const Dataset& ds) const;
};

struct ScaledSplit {
  Dataset train;
  Dataset test;
  Scaler scaler;
};

/// Min-max to [0, 1] fitted on `train`; constant columns map to 0; test
/// values outside the training range are left unclipped.
ScaledSplit fit_transform_minmax(const Dataset& train, const Dataset& test);

/// x ~ U(-range, range), y = sin(x)/x + N(0, noise^2); one feature "x",
/// target "y".
Dataset make_sinc(int n, double range, double noise, std::uint64_t seed);

/// Seeded shuffle, then ceil(N * test_fraction) rows go to the test side.
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace gamevi
