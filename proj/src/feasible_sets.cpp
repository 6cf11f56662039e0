#include "gamevi/feasible_sets.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include <fmt/format.h>

namespace gamevi {

Vector project_halfspace(const Vector& x, const Vector& a, double beta) {
  require_dims(x.size() == a.size(), "project_halfspace: normal and point differ in dimension");
  const double nrm2 = a.squaredNorm();
  if (nrm2 == 0.0) throw Error(Errc::ZeroNormal, "project_halfspace: zero normal vector");
  const double excess = a.dot(x) - beta;
  if (excess <= 0.0) return x;
  return x - (excess / nrm2) * a;
}

HalfSpace::HalfSpace(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  if (normal_.squaredNorm() == 0.0) throw Error(Errc::ZeroNormal, "HalfSpace: zero normal vector");
}

Vector HalfSpace::project(const Vector& x) const { return project_halfspace(x, normal_, offset_); }

Polyhedron::Polyhedron(Matrix A, Vector b, bool require_origin, DykstraOptions opts)
    : A_(std::move(A)), b_(std::move(b)), opts_(opts) {
  require_dims(A_.rows() == b_.size(), "Polyhedron: row count of A must equal length of b");
  if (opts_.tol <= 0.0 || opts_.max_sweeps < 1) {
    throw Error(Errc::InvalidConfig, "Polyhedron: Dykstra tolerance and sweep cap must be positive");
  }
  row_norm2_ = A_.rowwise().squaredNorm();
  for (Index i = 0; i < A_.rows(); ++i) {
    if (row_norm2_[i] == 0.0) {
      throw Error(Errc::ZeroNormal, fmt::format("Polyhedron: row {} of A is zero", i));
    }
  }
  if (require_origin && (b_.array() < 0.0).any()) {
    throw Error(Errc::InvalidConfig, "Polyhedron: origin is not feasible (b has negative entries)");
  }
}

bool Polyhedron::contains(const Vector& x, double tol) const {
  require_dims(x.size() == dim(), "Polyhedron::contains: dimension mismatch");
  return ((A_ * x - b_).array() <= tol).all();
}

Vector Polyhedron::project(const Vector& x) const {
  return project_polyhedron(x, *this, opts_.tol, opts_.max_sweeps);
}

Vector project_polyhedron(const Vector& x, const Polyhedron& P, double tol, int max_sweeps) {
  require_dims(x.size() == P.dim(), "project_polyhedron: dimension mismatch");
  if (tol <= 0.0 || max_sweeps < 1) {
    throw Error(Errc::InvalidConfig, "project_polyhedron: tol and sweep cap must be positive");
  }
  const Matrix& A = P.A();
  const Vector& b = P.b();
  // Points within tol of every half-space count as feasible, which keeps the
  // map idempotent on its own output.
  const auto feasible = [&](const Vector& v) { return ((A * v - b).array() <= tol).all(); };
  if (feasible(x)) return x;

  const Index rows = A.rows();
  // Row i of `corrections` is Dykstra's increment for half-space i.
  Matrix corrections = Matrix::Zero(rows, x.size());
  Vector y = x;
  Vector z(x.size());
  Vector prev(x.size());
  const Vector& norm2 = P.row_norm2();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    prev = y;
    for (Index i = 0; i < rows; ++i) {
      z = y + corrections.row(i).transpose();
      const double excess = A.row(i).dot(z) - b[i];
      if (excess > 0.0) {
        y = z - (excess / norm2[i]) * A.row(i).transpose();
      } else {
        y = z;
      }
      corrections.row(i) = (z - y).transpose();
    }
    if ((y - prev).norm() < tol && feasible(y)) return y;
  }
  throw Error(Errc::NoConvergence,
              fmt::format("project_polyhedron: Dykstra did not settle within {} sweeps", max_sweeps));
}

L1Ball::L1Ball(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw Error(Errc::InvalidConfig, "L1Ball: radius must be positive");
}

Vector L1Ball::project(const Vector& x) const { return project_l1_ball(x, radius_); }

Vector project_l1_ball(const Vector& x, double radius) {
  if (!(radius > 0.0)) throw Error(Errc::InvalidConfig, "project_l1_ball: radius must be positive");
  if (x.lpNorm<1>() <= radius) return x;

  std::vector<double> u(x.size());
  for (Index i = 0; i < x.size(); ++i) u[i] = std::abs(x[i]);
  std::sort(u.begin(), u.end(), std::greater<>());

  // Largest j with u_j > (sum_{i<=j} u_i - r) / j gives the threshold.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - radius) / static_cast<double>(j + 1);
    if (u[j] > t) theta = t;
  }

  Vector y(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double mag = std::max(std::abs(x[i]) - theta, 0.0);
    y[i] = std::copysign(mag, x[i]);
  }
  // Rounding in the cumulative sum can leave the norm a few ulps over.
  const double excess = y.lpNorm<1>();
  if (excess > radius) y *= radius / excess;
  return y;
}

ShrinkageProx::ShrinkageProx(double weight) : weight_(weight) {
  if (!(weight >= 0.0)) throw Error(Errc::InvalidConfig, "ShrinkageProx: weight must be nonnegative");
}

Vector ShrinkageProx::project(const Vector& x) const { return shrink(x, weight_); }

Vector ShrinkageProx::project_step(const Vector& x, double stepsize) const {
  return shrink(x, weight_ * stepsize);
}

Vector shrink(const Vector& s, double threshold) {
  if (!(threshold >= 0.0)) throw Error(Errc::InvalidConfig, "shrink: threshold must be nonnegative");
  Vector out(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    const double mag = std::max(std::abs(s[i]) - threshold, 0.0);
    out[i] = s[i] > 0.0 ? mag : (s[i] < 0.0 ? -mag : 0.0);
  }
  return out;
}

}  // namespace gamevi
