#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gamevi/error.hpp"

namespace gamevi {

struct FistaTrace {
  std::vector<double> objectives;  // after each iteration
  std::int64_t iterations = 0;
  double elapsed = 0.0;
  bool converged = false;
};

struct FistaResult {
  Vector beta;
  FistaTrace trace;
};

/// Constant-step FISTA (no restarts) on ||y - H beta||^2 + lambda ||beta||_1,
/// started from zero. Step 1 / (2 ||H^T H||); stops when
/// ||beta_k - beta_{k-1}|| < tol or after max_iter iterations.
FistaResult fista(const Matrix& H, const Vector& y, double lambda_reg, double tol = 1e-6,
                  std::int64_t max_iter = 10000);

/// CSV with header `iter,objective`.
void write_trace_csv(std::ostream& out, const FistaTrace& trace);

}  // namespace gamevi
