#include "gamevi/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace gamevi {

double default_zeta(std::int64_t n) { return 1.0 / (10.0 * static_cast<double>(n) + 9.0); }

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::GAME: return "GAME";
    case Variant::DIEM: return "DIEM";
    case Variant::IREM: return "IREM";
    case Variant::REM: return "REM";
    case Variant::EM: return "EM";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::GAME, Variant::DIEM, Variant::IREM, Variant::REM, Variant::EM}) {
    if (name == to_string(v)) return v;
  }
  throw Error(Errc::UnknownVariant, fmt::format("unknown solver variant '{}'", name));
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIterations: return "MaxIterations";
    case Termination::Diverged: return "Diverged";
    case Termination::EarlyExact: return "EarlyExact";
  }
  return "?";
}

namespace {

// beta <= alpha is a hypothesis of the convergence theory, not a domain
// requirement (the IREM preset has alpha = 0 < beta); it only warns.
void check_inertia(double alpha, double beta, std::int64_t n) {
  if (!(alpha >= 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0)) {
    throw Error(Errc::InvalidConfig,
                fmt::format("inertia must lie in [0, 1) (n={}: alpha={}, beta={})", n, alpha, beta));
  }
}

}  // namespace

SolverConfig::SolverConfig(SolverOptions opts) : opts_(std::move(opts)) {
  const auto bad = [](const std::string& msg) { throw Error(Errc::InvalidConfig, msg); };
  if (!(opts_.rho > 0.0 && opts_.rho <= 1.0)) bad(fmt::format("rho must lie in (0, 1], got {}", opts_.rho));
  if (!(opts_.mu > 0.0 && opts_.mu < 1.0)) bad(fmt::format("mu must lie in (0, 1), got {}", opts_.mu));
  if (!(opts_.lambda0 > 0.0)) bad(fmt::format("lambda0 must be positive, got {}", opts_.lambda0));
  if (!(opts_.tol > 0.0)) bad(fmt::format("tol must be positive, got {}", opts_.tol));
  if (opts_.max_iter < 1) bad("max_iter must be >= 1");
  if (!(opts_.divergence_bound > 0.0)) bad("divergence_bound must be positive");
  if (!(opts_.exactness_threshold >= 0.0)) bad("exactness_threshold must be nonnegative");
  if (!opts_.zeta) bad("zeta schedule is empty");
  if (!opts_.alpha_schedule) check_inertia(opts_.alpha, opts_.beta, 0);
  for (std::int64_t n = 1; n <= opts_.max_iter; ++n) {
    const double z = opts_.zeta(n);
    if (!(z > 0.0) || !std::isfinite(z)) bad(fmt::format("zeta_{} = {} is not strictly positive", n, z));
  }
}

double SolverConfig::alpha(std::int64_t n) const {
  return opts_.alpha_schedule ? opts_.alpha_schedule(n) : opts_.alpha;
}

double SolverConfig::beta(std::int64_t n) const {
  return opts_.beta_schedule ? opts_.beta_schedule(n) : opts_.beta;
}

double SolverConfig::zeta(std::int64_t n) const { return opts_.zeta(n); }

std::vector<std::string> SolverConfig::theory_warnings() const {
  std::vector<std::string> out;
  if (opts_.alpha_schedule || opts_.beta_schedule) return out;
  // Need delta > 2 with rho < 1/(1+delta) and alpha < 1 - sqrt(2/delta).
  const double delta_upper = 1.0 / opts_.rho - 1.0;
  const double delta_lower = std::max(2.0, 2.0 / ((1.0 - opts_.alpha) * (1.0 - opts_.alpha)));
  if (opts_.beta > opts_.alpha) {
    out.push_back(fmt::format("beta={} exceeds alpha={}; theory assumes beta <= alpha", opts_.beta, opts_.alpha));
  }
  if (!(delta_lower < delta_upper)) {
    out.push_back(fmt::format(
        "rho={} alpha={} admit no delta > 2 with rho < 1/(1+delta) and alpha < 1 - sqrt(2/delta); "
        "convergence is not covered by theory",
        opts_.rho, opts_.alpha));
  }
  return out;
}

SolverConfig SolverConfig::with_tolerance(double tol, std::int64_t max_iter) const {
  SolverOptions o = opts_;
  o.tol = tol;
  o.max_iter = max_iter;
  return SolverConfig(std::move(o));
}

SolverConfig variant_preset(Variant v) {
  SolverOptions o;
  switch (v) {
    case Variant::GAME: o.rho = 0.6, o.alpha = 0.5, o.beta = 0.2; break;
    case Variant::DIEM: o.rho = 1.0, o.alpha = 0.5, o.beta = 0.2; break;
    case Variant::IREM: o.rho = 0.6, o.alpha = 0.0, o.beta = 0.2; break;
    case Variant::REM: o.rho = 0.6, o.alpha = 0.0, o.beta = 0.0; break;
    case Variant::EM: o.rho = 1.0, o.alpha = 0.0, o.beta = 0.0; break;
  }
  o.mu = 0.4;
  o.lambda0 = 0.01;
  o.zeta = default_zeta;
  o.preset = v;
  return SolverConfig(std::move(o));
}

SolverConfig variant_preset(std::string_view name) { return variant_preset(parse_variant(name)); }

double update_stepsize(double lambda, const Vector& b, const Vector& c, const Vector& Fb,
                       const Vector& Fc, double mu, double zeta, double exactness_threshold) {
  const double grown = lambda + zeta;
  const double dF = (Fb - Fc).norm();
  if (dF > exactness_threshold * std::max(1.0, Fb.norm())) {
    return std::min(mu * (b - c).norm() / dF, grown);
  }
  return grown;
}

StepOutcome game_iteration(const IterateState& state, const MonotoneOperator& F,
                           const FeasibleSet& K, const SolverConfig& cfg) {
  require_dims(state.current.size() == state.previous.size(),
               "game_iteration: s_n and s_{n-1} differ in dimension");
  require_dims(state.current.size() == F.dimension(), "game_iteration: iterate does not match operator");
  if (!(state.lambda > 0.0)) throw Error(Errc::InvalidConfig, "game_iteration: stepsize must be positive");

  const std::int64_t n = state.n;
  const double alpha = cfg.alpha(n);
  const double beta = cfg.beta(n);
  if (cfg.options().alpha_schedule || cfg.options().beta_schedule) check_inertia(alpha, beta, n);
  const double lambda = state.lambda;
  const double rho = cfg.rho();

  const Vector momentum = state.current - state.previous;
  const Vector a = state.current + alpha * momentum;
  Vector b = state.current + beta * momentum;
  const Vector Fb = F.apply(b);
  Vector c = K.project_step(b - lambda * Fb, lambda);
  const Vector Fc = F.apply(c);
  Vector next = (1.0 - rho) * a + rho * (c - lambda * (Fc - Fb));

  const double residual = (b - c).norm();
  const double next_lambda = update_stepsize(lambda, b, c, Fb, Fc, cfg.mu(), cfg.zeta(n),
                                             cfg.options().exactness_threshold);

  if (!next.allFinite() || !std::isfinite(residual) || !std::isfinite(next_lambda)) {
    throw Error(Errc::NonFiniteIterate, fmt::format("game_iteration: non-finite iterate at n={}", n));
  }
  return StepOutcome{IterateState{std::move(next), state.current, next_lambda, n + 1}, residual,
                     std::move(b), std::move(c)};
}

SolveResult solve(const MonotoneOperator& F, const FeasibleSet& K, const Vector& x0,
                  const std::optional<Vector>& x_minus1, const SolverConfig& cfg) {
  require_dims(x0.size() == F.dimension(), "solve: starting point does not match operator");
  if (!x0.allFinite()) throw Error(Errc::NonFiniteIterate, "solve: starting point is not finite");
  if (x_minus1) {
    require_dims(x_minus1->size() == x0.size(), "solve: x_{-1} and x0 differ in dimension");
    if (!x_minus1->allFinite()) throw Error(Errc::NonFiniteIterate, "solve: x_{-1} is not finite");
  }

  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  result.residuals.reserve(static_cast<std::size_t>(std::min<std::int64_t>(cfg.max_iter(), 1 << 16)));
  result.stepsizes.reserve(result.residuals.capacity());

  IterateState state{x0, x_minus1.value_or(x0), cfg.lambda0(), 1};
  for (;;) {
    StepOutcome out;
    try {
      out = game_iteration(state, F, K, cfg);
    } catch (const Error& e) {
      if (e.code() != Errc::NonFiniteIterate) throw;
      result.termination = Termination::Diverged;
      result.solution = state.current;
      if (result.projected.size() == 0) result.projected = state.current;
      break;
    }
    result.projected = out.c;
    result.residuals.push_back(out.residual);
    result.stepsizes.push_back(state.lambda);
    ++result.iterations;

    if (out.residual == 0.0) {
      // c_n = b_n certifies b_n as an exact solution.
      result.termination = Termination::EarlyExact;
      result.solution = std::move(out.b);
      break;
    }
    if (out.residual < cfg.tol()) {
      result.termination = Termination::Converged;
      result.solution = std::move(out.next.current);
      break;
    }
    if (out.next.current.norm() > cfg.divergence_bound()) {
      result.termination = Termination::Diverged;
      result.solution = std::move(out.next.current);
      break;
    }
    if (result.iterations >= cfg.max_iter()) {
      result.termination = Termination::MaxIterations;
      result.solution = std::move(out.next.current);
      break;
    }
    state = std::move(out.next);
  }
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_trace_csv(std::ostream& out, const SolveResult& result) {
  out << "iter,residual,lambda\n";
  for (std::size_t i = 0; i < result.residuals.size(); ++i) {
    fmt::print(out, "{},{:.17g},{:.17g}\n", i + 1, result.residuals[i], result.stepsizes[i]);
  }
}

}  // namespace gamevi
