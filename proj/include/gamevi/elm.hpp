#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "gamevi/data_io.hpp"
#include "gamevi/error.hpp"
#include "gamevi/solver.hpp"

namespace gamevi {

enum class Activation { Sigmoid };

/// Random input layer: column j of `weights` is a_j, `biases[j]` is b_j.
struct HiddenLayer {
  Matrix weights;  // D x m
  Vector biases;   // m

  Index inputs() const { return weights.rows(); }
  Index nodes() const { return weights.cols(); }
};

struct ElmModel {
  HiddenLayer hidden;
  Vector beta;  // output weights, length m
  Activation activation = Activation::Sigmoid;
  std::optional<Scaler> scaler;
};

enum class ConstraintMode { Shrink, L1BallProjection };

struct TrainerConfig {
  int m = 100;
  double lambda_reg = 1e-3;
  SolverConfig solver = variant_preset(Variant::GAME);
  ConstraintMode constraint_mode = ConstraintMode::Shrink;
  double ball_radius = 1.0;
  std::uint64_t seed = 0;
  bool orthogonal_init = false;
};

/// W ~ U(-1, 1), b ~ U(0, 1). With `orthogonalize` and m <= D the columns of
/// W are replaced by an orthonormal basis of their span.
HiddenLayer init_hidden_layer(int D, int m, std::uint64_t seed, bool orthogonalize = false);

/// H(n, j) = sigmoid(a_j . x_n + b_j), an N x m matrix.
Matrix hidden_output(const Matrix& X, const HiddenLayer& layer);

/// ||y - H beta||^2 + lambda ||beta||_1
double lasso_objective(const Matrix& H, const Vector& y, const Vector& beta, double lambda_reg);

struct TrainResult {
  Vector beta;
  SolveResult trace;
};

/// Output weights via the extragradient solver on F = H^T (H beta - y),
/// starting from beta = 0. The returned weights are c_n of the last
/// iteration rather than s_{n+1}, so shrink zeros are exact.
///
/// Shrink mode uses soft-thresholding at (lambda_reg / 2) * lambda_n as the
/// projection step, whose fixed points minimize ||y - H beta||^2 +
/// lambda_reg ||beta||_1. L1BallProjection projects onto the L1 ball of
/// `ball_radius` instead and ignores lambda_reg.
TrainResult train(const Matrix& H, const Vector& y, const TrainerConfig& cfg);

/// H beta, mapped back to target units when the model carries a scaler (in
/// that case X is in raw feature units and is scaled first).
Vector predict(const ElmModel& model, const Matrix& X);

/// Solves (H^T H + ridge_eps I) beta = H^T y.
Vector least_squares_weights(const Matrix& H, const Vector& y, double ridge_eps = 1e-10);

struct FitResult {
  ElmModel model;
  SolveResult trace;
};

/// Hidden layer from cfg.seed, then train on (X, y) as given (no scaling).
FitResult fit_elm(const Matrix& X, const Vector& y, const TrainerConfig& cfg);

/// Flat text format: `elm,D,m,has_scaler` header, then D rows of W, one row
/// of biases, one row of beta, and when present D feature (min,max) rows plus
/// one target (min,max) row. Values are printed with 17 significant digits.
void save_model(std::ostream& out, const ElmModel& model);
ElmModel load_model(std::istream& in);

}  // namespace gamevi
