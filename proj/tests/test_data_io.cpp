#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "gamevi/data_io.hpp"
#include "oracles.hpp"

using namespace gamevi;

namespace {

const std::string kFixtures = GAMEVI_FIXTURE_DIR;

Dataset synthetic(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Dataset ds;
  ds.features = oracle::random_matrix(rng, n, d);
  ds.targets = oracle::random_normal(rng, n);
  for (Index j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
  ds.target_name = "y";
  return ds;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::ParseError;
}

}  // namespace

TEST(LoadCsv, NamedTarget) {
  CsvOptions opts;
  opts.target = std::string("y");
  const Dataset ds = load_csv(kFixtures + "/small.csv", opts);
  EXPECT_EQ(ds.rows(), 3);
  EXPECT_EQ(ds.cols(), 2);
  EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.target_name, "y");
  EXPECT_EQ(ds.targets[2], 9.0);
  EXPECT_EQ(ds.features(1, 1), 5.0);
  EXPECT_EQ(ds.dropped_rows, 0u);
}

TEST(LoadCsv, TargetByIndexOrName) {
  CsvOptions opts;
  opts.target = 0;
  const Dataset ds = load_csv(kFixtures + "/small.csv", opts);
  EXPECT_EQ(ds.target_name, "a");
  EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"b", "y"}));
  EXPECT_EQ(load_csv(kFixtures + "/small.csv").target_name, "y");
}

TEST(LoadCsv, DropsMalformedRow) {
  const Dataset ds = load_csv(kFixtures + "/malformed.csv");
  EXPECT_EQ(ds.rows(), 3);
  EXPECT_EQ(ds.cols(), 3);
  EXPECT_EQ(ds.dropped_rows, 1u);
  EXPECT_EQ(ds.targets[1], 3.5);
}

TEST(LoadCsv, QuotedFieldsAndCrlf) {
  const Dataset ds = load_csv(kFixtures + "/quoted.csv");
  EXPECT_EQ(ds.rows(), 2);
  EXPECT_EQ(ds.feature_names[0], "feat, one");
  EXPECT_EQ(ds.features(1, 0), 4.0);
  EXPECT_EQ(ds.targets[1], 6.0);
}

TEST(LoadCsv, Errors) {
  EXPECT_EQ(code_of([] { load_csv(kFixtures + "/missing.csv"); }), Errc::FileNotFound);
  EXPECT_EQ(code_of([] {
              CsvOptions o;
              o.target = std::string("nope");
              load_csv(kFixtures + "/small.csv", o);
            }),
            Errc::UnknownColumn);
  EXPECT_EQ(code_of([] {
              std::istringstream in("a,b\nx,y\n");
              read_csv(in);
            }),
            Errc::NoNumericRows);
}

TEST(LoadCsv, Headerless) {
  std::istringstream in("1;2;3\n4;5;nan\n7;8;9\n");
  CsvOptions o;
  o.has_header = false;
  o.delimiter = ';';
  const Dataset ds = read_csv(in, o);
  EXPECT_EQ(ds.rows(), 2);
  EXPECT_EQ(ds.dropped_rows, 1u);
  EXPECT_EQ(ds.target_name, "c2");
}

TEST(WriteCsv, RoundTrip) {
  const Dataset ds = synthetic(7, 3, 1);
  std::stringstream ss;
  write_csv(ss, ds);
  const Dataset back = read_csv(ss);
  EXPECT_TRUE(back.features == ds.features);
  EXPECT_TRUE(back.targets == ds.targets);
  EXPECT_EQ(back.feature_names, ds.feature_names);
}

TEST(MinMax, Examples) {
  Dataset train;
  train.features.resize(3, 2);
  train.features << 0, 7, 5, 7, 10, 7;
  train.targets = Vector::LinSpaced(3, 1, 3);
  Dataset test = train;
  test.features(0, 0) = 12;
  const ScaledSplit s = fit_transform_minmax(train, test);
  EXPECT_EQ(s.train.features(0, 0), 0.0);
  EXPECT_EQ(s.train.features(1, 0), 0.5);
  EXPECT_EQ(s.train.features(2, 0), 1.0);
  EXPECT_TRUE(s.train.features.col(1).isZero(0));
  EXPECT_DOUBLE_EQ(s.test.features(0, 0), 1.2);
  EXPECT_EQ(s.train.targets[1], 0.5);
}

TEST(MinMax, InverseRoundTrip) {
  const Dataset ds = synthetic(30, 4, 2);
  const Scaler sc = Scaler::fit(ds);
  const Matrix scaled = sc.transform_features(ds.features);
  EXPECT_TRUE((scaled.array() >= 0).all() && (scaled.array() <= 1).all());
  EXPECT_LE((sc.inverse_features(scaled) - ds.features).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((sc.inverse_targets(sc.transform_targets(ds.targets)) - ds.targets).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MinMax, IgnoresTestRows) {
  const Dataset train = synthetic(20, 3, 3);
  Dataset test = synthetic(5, 3, 4);
  const ScaledSplit a = fit_transform_minmax(train, test);
  test.features *= 1000.0;
  test.targets.array() += 50.0;
  const ScaledSplit b = fit_transform_minmax(train, test);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(a.scaler.features[j].min, b.scaler.features[j].min);
    EXPECT_EQ(a.scaler.features[j].max, b.scaler.features[j].max);
  }
  EXPECT_EQ(a.scaler.target.max, b.scaler.target.max);
  EXPECT_TRUE(a.train.features == b.train.features);
}

TEST(MinMax, ColumnMismatch) {
  EXPECT_EQ(code_of([] { fit_transform_minmax(synthetic(5, 3, 1), synthetic(5, 2, 1)); }), Errc::ColumnMismatch);
}

TEST(Split, TableSizes) {
  auto [tr, te] = train_test_split(synthetic(506, 2, 1), 0.2, 1);
  EXPECT_EQ(tr.rows(), 404);
  EXPECT_EQ(te.rows(), 102);
  auto [tr2, te2] = train_test_split(synthetic(398, 2, 1), 0.2, 1);
  EXPECT_EQ(tr2.rows(), 318);
  EXPECT_EQ(te2.rows(), 80);
}

TEST(Split, PartitionAndDeterminism) {
  Dataset ds = synthetic(50, 1, 5);
  for (Index i = 0; i < 50; ++i) ds.targets[i] = static_cast<double>(i);
  auto [tr, te] = train_test_split(ds, 0.3, 7);
  std::set<double> seen;
  for (Index i = 0; i < tr.rows(); ++i) seen.insert(tr.targets[i]);
  for (Index i = 0; i < te.rows(); ++i) EXPECT_TRUE(seen.insert(te.targets[i]).second);
  EXPECT_EQ(seen.size(), 50u);
  auto [tr2, te2] = train_test_split(ds, 0.3, 7);
  EXPECT_TRUE(tr.targets == tr2.targets && te.targets == te2.targets);
  EXPECT_EQ(code_of([&] { train_test_split(ds, 1.0, 1); }), Errc::InvalidFraction);
  EXPECT_EQ(code_of([&] { train_test_split(ds, 0.0, 1); }), Errc::InvalidFraction);
}

TEST(Sinc, RangeAndDeterminism) {
  const Dataset a = make_sinc(200, 4.0, 0.0, 5), b = make_sinc(200, 4.0, 0.0, 5);
  EXPECT_TRUE(a.features == b.features && a.targets == b.targets);
  EXPECT_TRUE((a.features.array().abs() <= 4.0).all());
  for (Index i = 0; i < a.rows(); ++i) EXPECT_DOUBLE_EQ(a.targets[i], std::sin(a.features(i, 0)) / a.features(i, 0));
  EXPECT_FALSE(make_sinc(200, 4.0, 0.1, 5).targets == a.targets);
  EXPECT_THROW(make_sinc(0, 1.0, 0.0, 1), Error);
}
