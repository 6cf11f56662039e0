#pragma once

#include <memory>

#include "gamevi/error.hpp"

namespace gamevi {

/// Set-like object used in the projection step of the solver.
///
/// `project` is the Euclidean projection for true sets. `project_step` is what
/// the solver calls with its current stepsize; plain sets ignore the stepsize,
/// the shrinkage prox scales its threshold with it.
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual Vector project(const Vector& x) const = 0;
  virtual Vector project_step(const Vector& x, double /*stepsize*/) const { return project(x); }
};

/// K = R^n.
class WholeSpace final : public FeasibleSet {
 public:
  Vector project(const Vector& x) const override { return x; }
};

/// {x : <a, x> <= offset}
class HalfSpace final : public FeasibleSet {
 public:
  HalfSpace(Vector normal, double offset);

  Vector project(const Vector& x) const override;
  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }

 private:
  Vector normal_;
  double offset_;
};

struct DykstraOptions {
  double tol = 1e-10;
  int max_sweeps = 5000;
};

/// {x : A x <= b}, projected with Dykstra's cyclic corrections over the rows.
class Polyhedron final : public FeasibleSet {
 public:
  Polyhedron(Matrix A, Vector b, bool require_origin = false, DykstraOptions opts = {});

  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const;

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  Index rows() const { return A_.rows(); }
  Index dim() const { return A_.cols(); }
  const Vector& row_norm2() const { return row_norm2_; }
  const DykstraOptions& options() const { return opts_; }

 private:
  Matrix A_;
  Vector b_;
  Vector row_norm2_;
  DykstraOptions opts_;
};

/// {x : ||x||_1 <= radius}
class L1Ball final : public FeasibleSet {
 public:
  explicit L1Ball(double radius = 1.0);

  Vector project(const Vector& x) const override;
  double radius() const { return radius_; }

 private:
  double radius_;
};

/// Soft-threshold prox of weight * ||.||_1. Inside the solver the threshold is
/// weight * stepsize, so fixed points are stationary points of f + weight ||.||_1.
class ShrinkageProx final : public FeasibleSet {
 public:
  explicit ShrinkageProx(double weight);

  Vector project(const Vector& x) const override;
  Vector project_step(const Vector& x, double stepsize) const override;
  double weight() const { return weight_; }

 private:
  double weight_;
};

Vector project_halfspace(const Vector& x, const Vector& a, double beta);
Vector project_polyhedron(const Vector& x, const Polyhedron& P, double tol, int max_sweeps = 5000);
Vector project_l1_ball(const Vector& x, double radius);
Vector shrink(const Vector& s, double threshold);

}  // namespace gamevi
