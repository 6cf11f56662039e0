#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gamevi/error.hpp"

namespace gamevi {

/// RMSE, MAE and the SSE/SST, SSR/SST variation ratios of a regression fit.
/// The ratios are absent when the actual values are constant (SST ~ 0).
struct MetricsReport {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> sse_sst;
  std::optional<double> ssr_sst;
  Index n = 0;

  bool constant_target() const { return !sse_sst.has_value(); }
};

/// `y` holds the actual values, `yhat` the predictions; the ratios are
/// normalized by the variation of `y` only.
MetricsReport evaluate(const Vector& y, const Vector& yhat);

/// Writes `rmse,mae,sse_sst,ssr_sst` (empty cells for absent ratios).
void write_metrics_row(std::ostream& out, const MetricsReport& m);

struct Fold {
  std::vector<Index> train;
  std::vector<Index> test;
};

/// k disjoint test folds over a seeded shuffle of 0..n-1. The first n % k
/// folds receive one extra index.
std::vector<Fold> kfold_split(Index n, int k, std::uint64_t seed);

}  // namespace gamevi
