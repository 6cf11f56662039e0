#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gamevi/error.hpp"
#include "gamevi/feasible_sets.hpp"
#include "gamevi/operators.hpp"

namespace gamevi {

/// Iteration-indexed positive schedule, evaluated at n = 1, 2, ...
using Schedule = std::function<double(std::int64_t)>;

/// zeta_n = 1 / (10 n + 9)
double default_zeta(std::int64_t n);

enum class Variant { GAME, DIEM, IREM, REM, EM };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct SolverOptions {
  double rho = 0.6;    // relaxation, (0, 1]
  double alpha = 0.5;  // inertia on the relaxed branch, [0, 1)
  double beta = 0.2;   // inertia on the extragradient branch, [0, alpha]
  double mu = 0.4;
  double lambda0 = 0.01;
  Schedule zeta = default_zeta;
  // Optional per-iteration inertia; when unset the constants above are used.
  Schedule alpha_schedule;
  Schedule beta_schedule;
  double tol = 1e-6;
  std::int64_t max_iter = 10000;
  double divergence_bound = 1e12;
  // Tolerance for the F(b) != F(c) branch of the stepsize update, relative
  // to max(1, ||F(b)||).
  double exactness_threshold = 1e-14;
  std::optional<Variant> preset;
};

/// Validated, immutable solver parameters.
class SolverConfig {
 public:
  /// Throws Error(InvalidConfig) when a parameter is outside its domain.
  explicit SolverConfig(SolverOptions opts = {});

  const SolverOptions& options() const { return opts_; }
  double rho() const { return opts_.rho; }
  double mu() const { return opts_.mu; }
  double lambda0() const { return opts_.lambda0; }
  double tol() const { return opts_.tol; }
  std::int64_t max_iter() const { return opts_.max_iter; }
  double divergence_bound() const { return opts_.divergence_bound; }
  std::optional<Variant> preset() const { return opts_.preset; }

  double alpha(std::int64_t n) const;
  double beta(std::int64_t n) const;
  double zeta(std::int64_t n) const;

  /// Conditions of the weak-convergence theorem that these parameters do not
  /// meet (empty when some delta > 2 satisfies them). Not an error: the
  /// reference presets deliberately sit outside them.
  std::vector<std::string> theory_warnings() const;

  SolverConfig with_tolerance(double tol, std::int64_t max_iter) const;

 private:
  SolverOptions opts_;
};

/// (rho, alpha, beta) per variant; mu = 0.4, lambda0 = 0.01, zeta_n = 1/(10n+9).
SolverConfig variant_preset(Variant v);
SolverConfig variant_preset(std::string_view name);

struct IterateState {
  Vector current;   // s_n
  Vector previous;  // s_{n-1}
  double lambda = 0.0;
  std::int64_t n = 1;
};

struct StepOutcome {
  IterateState next;
  double residual = 0.0;  // ||b_n - c_n||
  Vector b;               // extrapolated point b_n
  Vector c;               // projected point c_n
};

/// One pass of the four update lines followed by the stepsize rule.
/// Two operator evaluations and one projection step.
StepOutcome game_iteration(const IterateState& state, const MonotoneOperator& F,
                           const FeasibleSet& K, const SolverConfig& cfg);

/// min{mu ||b - c|| / ||Fb - Fc||, lambda + zeta} if Fb and Fc differ
/// (beyond `exactness_threshold * max(1, ||Fb||)`), else lambda + zeta.
double update_stepsize(double lambda, const Vector& b, const Vector& c, const Vector& Fb,
                       const Vector& Fc, double mu, double zeta, double exactness_threshold = 1e-14);

enum class Termination { Converged, MaxIterations, Diverged, EarlyExact };

std::string_view to_string(Termination t);

struct SolveResult {
  Vector solution;
  Vector projected;  // c_n of the last iteration, a point of K
  std::int64_t iterations = 0;
  std::vector<double> residuals;
  std::vector<double> stepsizes;
  double elapsed = 0.0;  // seconds
  Termination termination = Termination::MaxIterations;

  bool converged() const {
    return termination == Termination::Converged || termination == Termination::EarlyExact;
  }
};

/// Runs the iteration from (x0, x_minus1) until ||b_n - c_n|| == 0 (EarlyExact,
/// solution = b_n), ||b_n - c_n|| < tol (Converged), n reaches max_iter,
/// or the iterate blows past divergence_bound / turns non-finite (Diverged).
SolveResult solve(const MonotoneOperator& F, const FeasibleSet& K, const Vector& x0,
                  const std::optional<Vector>& x_minus1, const SolverConfig& cfg);

/// CSV with header `iter,residual,lambda`, one row per iteration.
void write_trace_csv(std::ostream& out, const SolveResult& result);

}  // namespace gamevi
