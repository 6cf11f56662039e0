#pragma once

#include <cstdint>

#include "gamevi/error.hpp"
#include "gamevi/feasible_sets.hpp"

namespace gamevi {

/// F : R^n -> R^n. Implementations are immutable after construction.
class MonotoneOperator {
 public:
  virtual ~MonotoneOperator() = default;

  virtual Index dimension() const = 0;
  virtual Vector apply(const Vector& x) const = 0;
};

/// F(x) = M x + xi
class AffineOperator final : public MonotoneOperator {
 public:
  AffineOperator(Matrix M, Vector xi);

  Index dimension() const override { return M_.rows(); }
  Vector apply(const Vector& x) const override;

  const Matrix& matrix() const { return M_; }
  const Vector& offset() const { return xi_; }

 private:
  Matrix M_;
  Vector xi_;
};

/// F(beta) = H^T (H beta - y), the gradient of 0.5 ||y - H beta||^2.
class LassoGradient final : public MonotoneOperator {
 public:
  enum class Mode { Cached, Recompute };

  LassoGradient(Matrix H, Vector y, Mode mode = Mode::Cached);

  Index dimension() const override { return H_.cols(); }
  Vector apply(const Vector& beta) const override;

  const Matrix& design() const { return H_; }
  const Vector& target() const { return y_; }
  /// H^T H and H^T y; computed on demand in Recompute mode.
  Matrix gram() const;
  Vector correlation() const;
  Mode mode() const { return mode_; }

 private:
  Matrix H_;
  Vector y_;
  Mode mode_;
  Matrix HtH_;
  Vector Hty_;
};

enum class XiMode { Zero, Random };

struct RandomViOptions {
  XiMode xi = XiMode::Zero;
  // Added to every diagonal entry of D; > 0 gives a strongly monotone instance
  // with modulus at least this value.
  double diagonal_boost = 0.0;
};

struct RandomVi {
  AffineOperator op;
  Polyhedron set;
};

/// Random instance F(x) = (R R^T + S + D) x + xi over {x : A x <= b}.
///
/// R, T, A ~ U(-1, 1); S = T - T^T; D = diag(U(0.1, 1.1)) + boost;
/// b ~ U(0, 1) so the origin is feasible; xi ~ U(-1, 1) in Random mode.
/// Bit-identical for identical arguments.
RandomVi make_random_vi(int N, int L_rows, std::uint64_t seed, RandomViOptions opts = {});

Vector apply_affine(const AffineOperator& op, const Vector& x);
Vector apply_lasso_gradient(const LassoGradient& op, const Vector& beta);

struct LipschitzEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double tol = 1e-8;
  int max_iter = 1000;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
LipschitzEstimate power_iteration(const Matrix& G, PowerIterationOptions opts = {});

/// ||M|| via power iteration on M^T M.
LipschitzEstimate lipschitz_estimate(const AffineOperator& op, PowerIterationOptions opts = {});
/// ||H^T H|| via power iteration on H^T H.
LipschitzEstimate lipschitz_estimate(const LassoGradient& op, PowerIterationOptions opts = {});

/// min over sampled pairs of <F(x) - F(y), x - y> / ||x - y||^2.
double monotonicity_probe(const MonotoneOperator& op, int n_samples, std::uint64_t seed);

}  // namespace gamevi
