#include "gamevi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace gamevi {

MetricsReport evaluate(const Vector& y, const Vector& yhat) {
  require_dims(y.size() == yhat.size(), "evaluate: actual and predicted lengths differ");
  if (y.size() < 2) throw Error(Errc::DimensionMismatch, "evaluate: need at least two samples");

  MetricsReport m;
  m.n = y.size();
  const double n = static_cast<double>(y.size());
  const Vector err = yhat - y;
  m.rmse = std::sqrt(err.squaredNorm() / n);
  m.mae = err.lpNorm<1>() / n;

  const double mean = y.mean();
  const double sst = (y.array() - mean).square().sum();
  if (sst > 1e-15) {
    m.sse_sst = err.squaredNorm() / sst;
    m.ssr_sst = (yhat.array() - mean).square().sum() / sst;
  }
  return m;
}

void write_metrics_row(std::ostream& out, const MetricsReport& m) {
  const auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.10g}", *v) : std::string(); };
  fmt::print(out, "{:.10g},{:.10g},{},{}", m.rmse, m.mae, opt(m.sse_sst), opt(m.ssr_sst));
}

std::vector<Fold> kfold_split(Index n, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<Index>(k) > n) {
    throw Error(Errc::InvalidK, fmt::format("kfold_split: need 2 <= k <= n (k={}, n={})", k, n));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Fold> folds(static_cast<std::size_t>(k));
  const Index base = n / k;
  const Index extra = n % k;
  Index pos = 0;
  for (int f = 0; f < k; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.test.assign(order.begin() + pos, order.begin() + pos + size);
    fold.train.reserve(static_cast<std::size_t>(n - size));
    fold.train.insert(fold.train.end(), order.begin(), order.begin() + pos);
    fold.train.insert(fold.train.end(), order.begin() + pos + size, order.end());
    pos += size;
  }
  return folds;
}

}  // namespace gamevi
