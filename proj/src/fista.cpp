#include "gamevi/fista.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gamevi/elm.hpp"
#include "gamevi/feasible_sets.hpp"
#include "gamevi/operators.hpp"

namespace gamevi {

FistaResult fista(const Matrix& H, const Vector& y, double lambda_reg, double tol, std::int64_t max_iter) {
  require_dims(H.rows() == y.size(), "fista: rows of H must match length of y");
  if (!(lambda_reg >= 0.0)) throw Error(Errc::InvalidConfig, "fista: lambda_reg must be nonnegative");
  if (!(tol > 0.0) || max_iter < 1) throw Error(Errc::InvalidConfig, "fista: tol and max_iter must be positive");

  const auto start = std::chrono::steady_clock::now();
  const LassoGradient grad(H, y);
  // Smooth part ||y - H beta||^2 has gradient 2 grad(beta) and constant 2 ||H^T H||.
  const double lipschitz = 2.0 * lipschitz_estimate(grad).value;

  FistaResult out;
  const Index m = H.cols();
  Vector beta = Vector::Zero(m);
  if (lipschitz == 0.0) {
    out.beta = beta;
    out.trace.iterations = 1;
    out.trace.objectives.push_back(lasso_objective(H, y, beta, lambda_reg));
    out.trace.converged = true;
    return out;
  }
  const double step = 1.0 / lipschitz;

  Vector probe = beta;
  Vector next(m);
  double t = 1.0;
  for (std::int64_t k = 1; k <= max_iter; ++k) {
    next = shrink(probe - 2.0 * step * grad.apply(probe), lambda_reg * step);
    if (!next.allFinite()) throw Error(Errc::NonFiniteIterate, fmt::format("fista: non-finite iterate at k={}", k));
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double moved = (next - beta).norm();
    probe = next + ((t - 1.0) / t_next) * (next - beta);
    beta.swap(next);
    t = t_next;

    out.trace.objectives.push_back(lasso_objective(H, y, beta, lambda_reg));
    out.trace.iterations = k;
    if (moved < tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.beta = std::move(beta);
  out.trace.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_trace_csv(std::ostream& out, const FistaTrace& trace) {
  out << "iter,objective\n";
  for (std::size_t i = 0; i < trace.objectives.size(); ++i) {
    fmt::print(out, "{},{:.17g}\n", i + 1, trace.objectives[i]);
  }
}

}  // namespace gamevi
