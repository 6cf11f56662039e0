#include "gamevi/operators.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace gamevi {

AffineOperator::AffineOperator(Matrix M, Vector xi) : M_(std::move(M)), xi_(std::move(xi)) {
  require_dims(M_.rows() == M_.cols(), "AffineOperator: matrix must be square");
  require_dims(xi_.size() == M_.rows(), "AffineOperator: offset length must match matrix size");
}

Vector AffineOperator::apply(const Vector& x) const {
  require_dims(x.size() == M_.cols(), "AffineOperator::apply: dimension mismatch");
  return M_ * x + xi_;
}

Vector apply_affine(const AffineOperator& op, const Vector& x) { return op.apply(x); }

LassoGradient::LassoGradient(Matrix H, Vector y, Mode mode)
    : H_(std::move(H)), y_(std::move(y)), mode_(mode) {
  require_dims(H_.rows() == y_.size(), "LassoGradient: rows of H must match length of y");
  if (mode_ == Mode::Cached) {
    HtH_ = H_.transpose() * H_;
    Hty_ = H_.transpose() * y_;
  }
}

Matrix LassoGradient::gram() const {
  if (mode_ == Mode::Cached) return HtH_;
  return H_.transpose() * H_;
}

Vector LassoGradient::correlation() const {
  if (mode_ == Mode::Cached) return Hty_;
  return H_.transpose() * y_;
}

Vector LassoGradient::apply(const Vector& beta) const {
  require_dims(beta.size() == H_.cols(), "LassoGradient::apply: dimension mismatch");
  if (mode_ == Mode::Cached) return HtH_ * beta - Hty_;
  return H_.transpose() * (H_ * beta - y_);
}

Vector apply_lasso_gradient(const LassoGradient& op, const Vector& beta) { return op.apply(beta); }

RandomVi make_random_vi(int N, int L_rows, std::uint64_t seed, RandomViOptions opts) {
  if (N < 1 || L_rows < 1) throw Error(Errc::InvalidConfig, "make_random_vi: N and L_rows must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> diag(0.1, 1.1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto fill = [&](Index rows, Index cols, auto& dist) {
    Matrix out(rows, cols);
    // Row-major draw order so the stream layout does not depend on Eigen storage.
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) out(i, j) = dist(rng);
    return out;
  };

  const Matrix R = fill(N, N, sym);
  const Matrix T = fill(N, N, sym);
  Vector d(N);
  for (Index i = 0; i < N; ++i) d[i] = diag(rng) + opts.diagonal_boost;
  Matrix A = fill(L_rows, N, sym);
  Vector b(L_rows);
  for (Index i = 0; i < L_rows; ++i) b[i] = unit(rng);
  Vector xi = Vector::Zero(N);
  if (opts.xi == XiMode::Random) {
    for (Index i = 0; i < N; ++i) xi[i] = sym(rng);
  }

  Matrix M = R * R.transpose() + (T - T.transpose());
  M.diagonal() += d;
  return RandomVi{AffineOperator(std::move(M), std::move(xi)),
                  Polyhedron(std::move(A), std::move(b), /*require_origin=*/true)};
}

LipschitzEstimate power_iteration(const Matrix& G, PowerIterationOptions opts) {
  require_dims(G.rows() == G.cols(), "power_iteration: matrix must be square");
  LipschitzEstimate est;
  if (G.rows() == 0) return est;

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Vector v(G.rows());
  for (Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();

  double prev = 0.0;
  for (int k = 1; k <= opts.max_iter; ++k) {
    Vector w = G * v;
    const double rayleigh = v.dot(w);
    const double nrm = w.norm();
    est.iterations = k;
    est.value = rayleigh;
    if (nrm == 0.0) {
      est.converged = true;
      return est;
    }
    v = w / nrm;
    if (k > 1 && std::abs(rayleigh - prev) <= opts.tol * std::abs(rayleigh)) {
      est.converged = true;
      return est;
    }
    prev = rayleigh;
  }
  return est;
}

LipschitzEstimate lipschitz_estimate(const AffineOperator& op, PowerIterationOptions opts) {
  const Matrix& M = op.matrix();
  LipschitzEstimate est = power_iteration(M.transpose() * M, opts);
  est.value = std::sqrt(std::max(est.value, 0.0));
  return est;
}

LipschitzEstimate lipschitz_estimate(const LassoGradient& op, PowerIterationOptions opts) {
  return power_iteration(op.gram(), opts);
}

double monotonicity_probe(const MonotoneOperator& op, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(Errc::InvalidConfig, "monotonicity_probe: n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Index n = op.dimension();
  Vector x(n), y(n);
  double lowest = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    for (Index i = 0; i < n; ++i) x[i] = normal(rng);
    for (Index i = 0; i < n; ++i) y[i] = normal(rng);
    const Vector diff = x - y;
    const double d2 = diff.squaredNorm();
    if (d2 == 0.0) continue;
    lowest = std::min(lowest, (op.apply(x) - op.apply(y)).dot(diff) / d2);
  }
  return lowest;
}

}  // namespace gamevi
