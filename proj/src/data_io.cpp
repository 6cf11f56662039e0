#include "gamevi/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace gamevi {

namespace {

// One RFC-4180 record: quoted fields may hold delimiters, doubled quotes and
// line breaks. Returns false at end of input.
bool next_record(std::istream& in, char delim, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field.push_back(ch);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool blank(const std::vector<std::string>& fields) {
  return std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return trim(f).empty(); });
}

}  // namespace

Dataset Dataset::subset(const std::vector<Index>& rows) const {
  Dataset out;
  out.features.resize(static_cast<Index>(rows.size()), cols());
  out.targets.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = features.row(rows[i]);
    out.targets[static_cast<Index>(i)] = targets[rows[i]];
  }
  out.feature_names = feature_names;
  out.target_name = target_name;
  out.source = source;
  return out;
}

Dataset read_csv(std::istream& in, const CsvOptions& opts, const std::string& source) {
  std::vector<std::string> fields;
  std::vector<std::string> header;
  if (opts.has_header) {
    while (next_record(in, opts.delimiter, fields)) {
      if (blank(fields)) continue;
      for (const auto& f : fields) header.emplace_back(trim(f));
      break;
    }
    if (header.empty()) throw Error(Errc::NoNumericRows, fmt::format("{}: empty file", source));
  }

  std::vector<std::vector<double>> rows;
  std::size_t width = header.size();
  std::size_t dropped = 0;
  while (next_record(in, opts.delimiter, fields)) {
    if (blank(fields)) continue;
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      ++dropped;
      continue;
    }
    std::vector<double> row;
    row.reserve(width);
    for (const auto& f : fields) {
      const auto v = parse_real(f);
      if (!v) break;
      row.push_back(*v);
    }
    if (row.size() != width) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(row));
  }

  if (width < 2) {
    throw Error(Errc::NoNumericRows, fmt::format("{}: need at least one feature and one target column", source));
  }
  if (header.empty()) {
    for (std::size_t j = 0; j < width; ++j) header.push_back(fmt::format("c{}", j));
  }

  std::size_t target = 0;
  if (const auto* name = std::get_if<std::string>(&opts.target)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (!opts.has_header || it == header.end()) {
      throw Error(Errc::UnknownColumn, fmt::format("{}: no column named '{}'", source, *name));
    }
    target = static_cast<std::size_t>(it - header.begin());
  } else {
    const int idx = std::get<int>(opts.target);
    const long resolved = idx < 0 ? static_cast<long>(width) + idx : idx;
    if (resolved < 0 || resolved >= static_cast<long>(width)) {
      throw Error(Errc::UnknownColumn, fmt::format("{}: column index {} out of range", source, idx));
    }
    target = static_cast<std::size_t>(resolved);
  }

  if (rows.empty()) throw Error(Errc::NoNumericRows, fmt::format("{}: no fully numeric rows", source));

  Dataset ds;
  ds.source = source;
  ds.dropped_rows = dropped;
  ds.target_name = header[target];
  for (std::size_t j = 0; j < width; ++j) {
    if (j != target) ds.feature_names.push_back(header[j]);
  }
  const Index n = static_cast<Index>(rows.size());
  ds.features.resize(n, static_cast<Index>(width - 1));
  ds.targets.resize(n);
  for (Index i = 0; i < n; ++i) {
    Index col = 0;
    for (std::size_t j = 0; j < width; ++j) {
      if (j == target) {
        ds.targets[i] = rows[i][j];
      } else {
        ds.features(i, col++) = rows[i][j];
      }
    }
  }
  return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, fmt::format("cannot open '{}'", path));
  return read_csv(in, opts, path);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (Index j = 0; j < ds.cols(); ++j) {
    const auto& name = static_cast<std::size_t>(j) < ds.feature_names.size() ? ds.feature_names[j]
                                                                               : fmt::format("x{}", j);
    fmt::print(out, "{},", name);
  }
  fmt::print(out, "{}\n", ds.target_name.empty() ? "y" : ds.target_name);
  for (Index i = 0; i < ds.rows(); ++i) {
    for (Index j = 0; j < ds.cols(); ++j) fmt::print(out, "{:.17g},", ds.features(i, j));
    fmt::print(out, "{:.17g}\n", ds.targets[i]);
  }
}

void write_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, fmt::format("cannot write '{}'", path));
  write_csv(out, ds);
}

Scaler Scaler::fit(const Dataset& train) {
  if (train.rows() == 0) throw Error(Errc::NoNumericRows, "Scaler::fit: empty training set");
  Scaler s;
  s.features.resize(static_cast<std::size_t>(train.cols()));
  for (Index j = 0; j < train.cols(); ++j) {
    s.features[static_cast<std::size_t>(j)] = {train.features.col(j).minCoeff(), train.features.col(j).maxCoeff()};
  }
  s.target = {train.targets.minCoeff(), train.targets.maxCoeff()};
  return s;
}

Matrix Scaler::transform_features(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != features.size()) {
    throw Error(Errc::ColumnMismatch, "Scaler: feature column count differs from fitted data");
  }
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const MinMax& mm = features[static_cast<std::size_t>(j)];
    for (Index i = 0; i < X.rows(); ++i) out(i, j) = mm.apply(X(i, j));
  }
  return out;
}

Vector Scaler::transform_targets(const Vector& y) const {
  return y.unaryExpr([this](double v) { return target.apply(v); });
}

Matrix Scaler::inverse_features(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != features.size()) {
    throw Error(Errc::ColumnMismatch, "Scaler: feature column count differs from fitted data");
  }
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const MinMax& mm = features[static_cast<std::size_t>(j)];
    for (Index i = 0; i < X.rows(); ++i) out(i, j) = mm.invert(X(i, j));
  }
  return out;
}

Vector Scaler::inverse_targets(const Vector& y) const {
  return y.unaryExpr([this](double v) { return target.invert(v); });
}

Dataset Scaler::transform(const Dataset& ds) const {
  Dataset out = ds;
  out.features = transform_features(ds.features);
  out.targets = transform_targets(ds.targets);
  return out;
}

ScaledSplit fit_transform_minmax(const Dataset& train, const Dataset& test) {
  if (train.cols() != test.cols()) {
    throw Error(Errc::ColumnMismatch,
                fmt::format("train has {} feature columns, test has {}", train.cols(), test.cols()));
  }
  Scaler scaler = Scaler::fit(train);
  Dataset train_scaled = scaler.transform(train);
  Dataset test_scaled = scaler.transform(test);
  return ScaledSplit{std::move(train_scaled), std::move(test_scaled), std::move(scaler)};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(Errc::InvalidFraction, fmt::format("test fraction must lie in (0, 1), got {}", test_fraction));
  }
  std::vector<Index> order(static_cast<std::size_t>(ds.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n = order.size();
  auto n_test = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * test_fraction - 1e-9));
  n_test = std::min(n_test, n);
  const std::vector<Index> train_rows(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_test));
  const std::vector<Index> test_rows(order.end() - static_cast<std::ptrdiff_t>(n_test), order.end());
  return {ds.subset(train_rows), ds.subset(test_rows)};
}

Dataset make_sinc(int n, double range, double noise, std::uint64_t seed) {
  if (n < 1 || !(range > 0.0) || !(noise >= 0.0)) throw Error(Errc::InvalidConfig, "make_sinc: bad parameters");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x_dist(-range, range);
  std::normal_distribution<double> eps(0.0, noise > 0.0 ? noise : 1.0);
  Dataset ds;
  ds.features.resize(n, 1);
  ds.targets.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = x_dist(rng);
    ds.features(i, 0) = x;
    ds.targets[i] = (x == 0.0 ? 1.0 : std::sin(x) / x) + (noise > 0.0 ? eps(rng) : 0.0);
  }
  ds.feature_names = {"x"};
  ds.target_name = "y";
  ds.source = "sinc";
  return ds;
}

}  // namespace gamevi
