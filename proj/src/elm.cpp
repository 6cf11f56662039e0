#include "gamevi/elm.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace gamevi {

HiddenLayer init_hidden_layer(int D, int m, std::uint64_t seed, bool orthogonalize) {
  if (D < 1 || m < 1) throw Error(Errc::InvalidConfig, "init_hidden_layer: D and m must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::uniform_real_distribution<double> bias(0.0, 1.0);

  HiddenLayer layer{Matrix(D, m), Vector(m)};
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < D; ++i) layer.weights(i, j) = weight(rng);
  for (Index j = 0; j < m; ++j) layer.biases[j] = bias(rng);

  if (orthogonalize && m <= D) {
    Eigen::HouseholderQR<Matrix> qr(layer.weights);
    layer.weights = qr.householderQ() * Matrix::Identity(D, m);
  }
  return layer;
}

Matrix hidden_output(const Matrix& X, const HiddenLayer& layer) {
  require_dims(X.cols() == layer.inputs(), "hidden_output: input columns do not match hidden layer");
  require_dims(layer.biases.size() == layer.nodes(), "hidden_output: bias length does not match node count");
  Matrix Z = X * layer.weights;
  Z.rowwise() += layer.biases.transpose();
  return Z.unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
}

double lasso_objective(const Matrix& H, const Vector& y, const Vector& beta, double lambda_reg) {
  require_dims(H.rows() == y.size() && H.cols() == beta.size(), "lasso_objective: dimension mismatch");
  return (y - H * beta).squaredNorm() + lambda_reg * beta.lpNorm<1>();
}

TrainResult train(const Matrix& H, const Vector& y, const TrainerConfig& cfg) {
  require_dims(H.rows() == y.size(), "train: rows of H must match length of y");
  if (!(cfg.lambda_reg >= 0.0)) throw Error(Errc::InvalidConfig, "train: lambda_reg must be nonnegative");

  const LassoGradient F(H, y);
  const Vector x0 = Vector::Zero(H.cols());
  SolveResult res;
  if (cfg.constraint_mode == ConstraintMode::Shrink) {
    // F is the gradient of 0.5 ||y - H beta||^2, so half the weight here.
    const ShrinkageProx prox(0.5 * cfg.lambda_reg);
    res = solve(F, prox, x0, std::nullopt, cfg.solver);
  } else {
    const L1Ball ball(cfg.ball_radius);
    res = solve(F, ball, x0, std::nullopt, cfg.solver);
  }
  // c_n carries the exact zeros of the shrink step (or lies in the ball).
  Vector beta = res.projected;
  return TrainResult{std::move(beta), std::move(res)};
}

Vector predict(const ElmModel& model, const Matrix& X) {
  require_dims(X.cols() == model.hidden.inputs(), "predict: input columns do not match model");
  require_dims(model.beta.size() == model.hidden.nodes(), "predict: beta length does not match node count");
  if (!model.scaler) return hidden_output(X, model.hidden) * model.beta;
  const Matrix Xs = model.scaler->transform_features(X);
  return model.scaler->inverse_targets(hidden_output(Xs, model.hidden) * model.beta);
}

Vector least_squares_weights(const Matrix& H, const Vector& y, double ridge_eps) {
  if (H.size() == 0) throw Error(Errc::DimensionMismatch, "least_squares_weights: H is empty");
  require_dims(H.rows() == y.size(), "least_squares_weights: rows of H must match length of y");
  Matrix G = H.transpose() * H;
  G.diagonal().array() += ridge_eps;
  const Vector rhs = H.transpose() * y;

  Eigen::LDLT<Matrix> ldlt(G);
  Vector beta;
  if (ldlt.info() == Eigen::Success) beta = ldlt.solve(rhs);
  const double tol = 1e-8 * std::max(rhs.norm(), 1e-300);
  if (beta.size() == 0 || !beta.allFinite() || (G * beta - rhs).norm() > tol) {
    // Near-singular Gram matrix; fall back to a rank-revealing factorization.
    beta = G.colPivHouseholderQr().solve(rhs);
  }
  if (!beta.allFinite() || (G * beta - rhs).norm() > tol) {
    throw Error(Errc::SingularSystem, "least_squares_weights: regularized normal equations are singular");
  }
  return beta;
}

FitResult fit_elm(const Matrix& X, const Vector& y, const TrainerConfig& cfg) {
  if (cfg.m < 1) throw Error(Errc::InvalidConfig, "fit_elm: m must be >= 1");
  HiddenLayer layer = init_hidden_layer(static_cast<int>(X.cols()), cfg.m, cfg.seed, cfg.orthogonal_init);
  TrainResult tr = train(hidden_output(X, layer), y, cfg);
  ElmModel model{std::move(layer), std::move(tr.beta), Activation::Sigmoid, std::nullopt};
  return FitResult{std::move(model), std::move(tr.trace)};
}

namespace {

template <class Row>
void print_row(std::ostream& out, const Row& values) {
  for (Index i = 0; i < values.size(); ++i) fmt::print(out, i ? ",{:.17g}" : "{:.17g}", values[i]);
  out << '\n';
}

std::vector<std::string> split_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "load_model: unexpected end of input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

Vector read_reals(std::istream& in, Index expected) {
  const auto cells = split_line(in);
  if (static_cast<Index>(cells.size()) != expected) {
    throw Error(Errc::ParseError, fmt::format("load_model: expected {} values, found {}", expected, cells.size()));
  }
  Vector out(expected);
  for (Index i = 0; i < expected; ++i) {
    try {
      out[i] = std::stod(cells[static_cast<std::size_t>(i)]);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, fmt::format("load_model: bad number '{}'", cells[static_cast<std::size_t>(i)]));
    }
  }
  return out;
}

}  // namespace

void save_model(std::ostream& out, const ElmModel& model) {
  const Index D = model.hidden.inputs();
  const Index m = model.hidden.nodes();
  fmt::print(out, "elm,{},{},{}\n", D, m, model.scaler ? 1 : 0);
  for (Index i = 0; i < D; ++i) print_row(out, model.hidden.weights.row(i));
  print_row(out, model.hidden.biases);
  print_row(out, model.beta);
  if (model.scaler) {
    for (const MinMax& mm : model.scaler->features) fmt::print(out, "{:.17g},{:.17g}\n", mm.min, mm.max);
    fmt::print(out, "{:.17g},{:.17g}\n", model.scaler->target.min, model.scaler->target.max);
  }
}

ElmModel load_model(std::istream& in) {
  const auto head = split_line(in);
  if (head.size() != 4 || head[0] != "elm") throw Error(Errc::ParseError, "load_model: missing 'elm' header");
  Index D = 0, m = 0;
  bool has_scaler = false;
  try {
    D = std::stol(head[1]);
    m = std::stol(head[2]);
    has_scaler = std::stoi(head[3]) != 0;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "load_model: malformed header");
  }
  if (D < 1 || m < 1) throw Error(Errc::ParseError, "load_model: dimensions must be positive");

  ElmModel model;
  model.hidden.weights.resize(D, m);
  for (Index i = 0; i < D; ++i) model.hidden.weights.row(i) = read_reals(in, m).transpose();
  model.hidden.biases = read_reals(in, m);
  model.beta = read_reals(in, m);
  if (has_scaler) {
    Scaler s;
    for (Index j = 0; j < D; ++j) {
      const Vector mm = read_reals(in, 2);
      s.features.push_back({mm[0], mm[1]});
    }
    const Vector t = read_reals(in, 2);
    s.target = {t[0], t[1]};
    model.scaler = std::move(s);
  }
  return model;
}

}  // namespace gamevi
