#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gamevi/solver.hpp"
#include "oracles.hpp"

using namespace gamevi;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

SolverConfig make_cfg(double rho, double alpha, double beta, double tol = 1e-6, std::int64_t max_iter = 10000) {
  SolverOptions o;
  o.rho = rho;
  o.alpha = alpha;
  o.beta = beta;
  o.tol = tol;
  o.max_iter = max_iter;
  return SolverConfig(o);
}

class CountingOperator : public MonotoneOperator {
 public:
  explicit CountingOperator(const MonotoneOperator& inner) : inner_(inner) {}
  Index dimension() const override { return inner_.dimension(); }
  Vector apply(const Vector& x) const override {
    ++calls;
    return inner_.apply(x);
  }
  mutable int calls = 0;

 private:
  const MonotoneOperator& inner_;
};

class CountingSet : public FeasibleSet {
 public:
  explicit CountingSet(const FeasibleSet& inner) : inner_(inner) {}
  Vector project(const Vector& x) const override {
    ++calls;
    return inner_.project(x);
  }
  Vector project_step(const Vector& x, double step) const override {
    ++calls;
    return inner_.project_step(x, step);
  }
  mutable int calls = 0;

 private:
  const FeasibleSet& inner_;
};

}  // namespace

TEST(GameIteration, FixedPoint) {
  AffineOperator id(Matrix::Identity(2, 2), Vector::Zero(2));
  WholeSpace k;
  const StepOutcome out = game_iteration({Vector::Zero(2), Vector::Zero(2), 0.3, 1}, id, k, variant_preset(Variant::GAME));
  EXPECT_TRUE(out.next.current.isZero(0));
  EXPECT_EQ(out.residual, 0.0);
}

TEST(GameIteration, ScalarExamples) {
  AffineOperator id(Matrix::Identity(1, 1), Vector::Zero(1));
  WholeSpace k;

  StepOutcome out = game_iteration({scalar(1), scalar(1), 0.5, 1}, id, k, make_cfg(1, 0, 0));
  EXPECT_NEAR(out.next.current[0], 0.75, 1e-15);
  EXPECT_NEAR(out.residual, 0.5, 1e-15);
  oracle::ScalarStep ref = oracle::scalar_step(1, 1, 1, 0, 0, 1, 0.5);
  EXPECT_NEAR(out.next.current[0], ref.next, 1e-15);

  out = game_iteration({scalar(1), scalar(0.5), 0.1, 1}, id, k, make_cfg(0.6, 0.5, 0.2));
  EXPECT_NEAR(out.b[0], 1.1, 1e-15);
  EXPECT_NEAR(out.next.current[0], 1.1006, 1e-12);
  EXPECT_NEAR(out.residual, 0.11, 1e-12);
  ref = oracle::scalar_step(1, 1, 0.5, 0.5, 0.2, 0.6, 0.1);
  EXPECT_NEAR(ref.a, 1.25, 1e-15);
  EXPECT_NEAR(ref.c, 0.99, 1e-15);
  EXPECT_NEAR(out.next.current[0], ref.next, 1e-15);
  EXPECT_EQ(out.next.previous[0], 1.0);
  EXPECT_EQ(out.next.n, 2);
}

TEST(GameIteration, MatchesScalarTranscriptionOnRandomInputs) {
  std::mt19937_64 rng(12);
  WholeSpace k;
  for (int t = 0; t < 100; ++t) {
    const double kk = oracle::uniform(rng, 0.1, 3);
    const double s = oracle::uniform(rng, -5, 5), sp = oracle::uniform(rng, -5, 5);
    const double rho = oracle::uniform(rng, 0.1, 1), alpha = oracle::uniform(rng, 0, 0.9);
    const double beta = oracle::uniform(rng, 0, alpha), lam = oracle::uniform(rng, 0.01, 1);
    AffineOperator op(Matrix::Constant(1, 1, kk), Vector::Zero(1));
    const StepOutcome out = game_iteration({scalar(s), scalar(sp), lam, 1}, op, k, make_cfg(rho, alpha, beta));
    const oracle::ScalarStep ref = oracle::scalar_step(kk, s, sp, alpha, beta, rho, lam);
    EXPECT_NEAR(out.next.current[0], ref.next, 1e-12 * (1 + std::abs(ref.next)));
    EXPECT_NEAR(out.residual, ref.residual, 1e-12 * (1 + ref.residual));
  }
}

TEST(GameIteration, Errors) {
  AffineOperator id(Matrix::Identity(2, 2), Vector::Zero(2));
  WholeSpace k;
  const SolverConfig cfg = variant_preset(Variant::GAME);
  EXPECT_THROW(game_iteration({Vector::Zero(2), Vector::Zero(3), 0.1, 1}, id, k, cfg), Error);
  EXPECT_THROW(game_iteration({Vector::Zero(3), Vector::Zero(3), 0.1, 1}, id, k, cfg), Error);
  Vector huge = Vector::Constant(2, 1e308);
  try {
    game_iteration({huge, -huge, 0.1, 1}, id, k, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonFiniteIterate);
  }
}

TEST(GameIteration, TwoEvaluationsOneProjection) {
  const RandomVi vi = make_random_vi(8, 4, 1);
  CountingOperator F(vi.op);
  CountingSet K(vi.set);
  std::mt19937_64 rng(1);
  IterateState st{oracle::random_normal(rng, 8), oracle::random_normal(rng, 8), 0.01, 1};
  const SolverConfig cfg = variant_preset(Variant::GAME);
  for (int i = 0; i < 25; ++i) {
    st = game_iteration(st, F, K, cfg).next;
    EXPECT_EQ(F.calls, 2 * (i + 1));
    EXPECT_EQ(K.calls, i + 1);
  }
}

TEST(GameIteration, ReducesToTsengStep) {
  const RandomVi vi = make_random_vi(9, 6, 2);
  std::mt19937_64 rng(2);
  const SolverConfig em = variant_preset(Variant::EM);
  for (int t = 0; t < 10; ++t) {
    const Vector x = oracle::random_normal(rng, 9);
    const double lam = oracle::uniform(rng, 0.01, 0.3);
    const StepOutcome out = game_iteration({x, x, lam, 1}, vi.op, vi.set, em);
    const Vector ref = oracle::tseng_step([&](const Vector& v) { return Vector(vi.op.matrix() * v + vi.op.offset()); },
                                          [&](const Vector& v) { return vi.set.project(v); }, x, lam);
    EXPECT_TRUE(out.next.current == ref);
  }
}

TEST(Stepsize, Examples) {
  const double z = 1.0 / 19.0;
  const Vector b = scalar(1), c = scalar(0);
  EXPECT_DOUBLE_EQ(update_stepsize(0.01, b, c, scalar(3), scalar(3), 0.4, z), 0.01 + z);
  EXPECT_DOUBLE_EQ(update_stepsize(0.01, b, c, scalar(2), scalar(0), 0.4, z), 0.01 + z);
  EXPECT_DOUBLE_EQ(update_stepsize(0.01, b, c, scalar(100), scalar(0), 0.4, z), 0.004);
  EXPECT_NEAR(default_zeta(1), 1.0 / 19.0, 0);
  EXPECT_NEAR(default_zeta(2), 1.0 / 29.0, 0);
}

TEST(Solve, StartAtSolution) {
  AffineOperator id(Matrix::Identity(3, 3), Vector::Zero(3));
  WholeSpace k;
  const SolveResult r = solve(id, k, Vector::Zero(3), std::nullopt, variant_preset(Variant::GAME));
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged());
  EXPECT_TRUE(r.solution.isZero(0));
  EXPECT_EQ(r.residuals.size(), 1u);
}

TEST(Solve, RandomBenchmarkInstance) {
  const RandomVi vi = make_random_vi(10, 5, 1);
  std::mt19937_64 rng(1);
  const SolveResult r = solve(vi.op, vi.set, oracle::random_normal(rng, 10), std::nullopt, variant_preset(Variant::GAME));
  EXPECT_EQ(r.termination, Termination::Converged);
  EXPECT_LE(r.solution.norm(), 1e-4);
  EXPECT_LT(r.residuals.back(), 1e-6);
  EXPECT_EQ(static_cast<std::int64_t>(r.residuals.size()), r.iterations);
  EXPECT_EQ(r.stepsizes.size(), r.residuals.size());
}

TEST(Solve, BoxConstrainedScalar) {
  AffineOperator op(Matrix::Identity(1, 1), scalar(-3));
  Matrix A(2, 1);
  A << 1, -1;
  Vector b(2);
  b << 10, 0;
  Polyhedron box(A, b);
  for (Variant v : {Variant::GAME, Variant::DIEM, Variant::IREM, Variant::REM, Variant::EM}) {
    const SolveResult r = solve(op, box, scalar(8), std::nullopt, variant_preset(v));
    EXPECT_TRUE(r.converged()) << to_string(v);
    EXPECT_NEAR(r.solution[0], 3.0, 1e-5) << to_string(v);
  }
  // Solution on the boundary: F(x) = x + 1 on [0, 10] is solved by 0.
  AffineOperator push(Matrix::Identity(1, 1), scalar(1));
  const SolveResult r = solve(push, box, scalar(5), std::nullopt, variant_preset(Variant::GAME));
  EXPECT_TRUE(r.converged());
  EXPECT_NEAR(r.solution[0], 0.0, 1e-5);
}

TEST(Solve, MaxIterationsAndDivergence) {
  const RandomVi vi = make_random_vi(10, 5, 3);
  std::mt19937_64 rng(3);
  const Vector x0 = oracle::random_normal(rng, 10);
  const SolveResult capped = solve(vi.op, vi.set, x0, std::nullopt, variant_preset(Variant::GAME).with_tolerance(1e-6, 5));
  EXPECT_EQ(capped.termination, Termination::MaxIterations);
  EXPECT_EQ(capped.iterations, 5);

  // Anti-monotone operator with no constraint runs away.
  AffineOperator bad(-Matrix::Identity(2, 2), Vector::Zero(2));
  WholeSpace k;
  SolverOptions o;
  o.lambda0 = 0.5;
  o.divergence_bound = 1e3;
  const SolveResult d = solve(bad, k, Vector::Ones(2), std::nullopt, SolverConfig(o));
  EXPECT_EQ(d.termination, Termination::Diverged);
  EXPECT_FALSE(d.converged());
}

TEST(Solve, EarlyExactIsSolution) {
  const RandomVi vi = make_random_vi(6, 4, 5);
  const SolveResult r = solve(vi.op, vi.set, Vector::Zero(6), std::nullopt, variant_preset(Variant::GAME));
  ASSERT_EQ(r.termination, Termination::EarlyExact);
  const Vector Fb = vi.op.apply(r.solution);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Vector z = oracle::random_normal(rng, 6, 3.0);
    const Vector Az = vi.set.A() * z;
    double tmax = 1.0;
    for (Index i = 0; i < Az.size(); ++i)
      if (Az[i] > 0) tmax = std::min(tmax, vi.set.b()[i] / Az[i]);
    const Vector w = oracle::uniform(rng) * tmax * z;
    EXPECT_GE(Fb.dot(w - r.solution), -1e-8);
  }

  const Vector target = Vector::Constant(6, 3.0);
  AffineOperator F(Matrix::Identity(6, 6), -target);
  WholeSpace k;
  const SolveResult e = solve(F, k, target, std::nullopt, variant_preset(Variant::GAME));
  EXPECT_EQ(e.termination, Termination::EarlyExact);
  EXPECT_TRUE(e.solution == target);
}

TEST(Solve, StepsizeBounds) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const RandomVi vi = make_random_vi(20, 10, seed);
    const double L = lipschitz_estimate(vi.op).value;
    std::mt19937_64 rng(seed);
    const Vector x0 = oracle::random_normal(rng, 20);
    for (Variant v : {Variant::GAME, Variant::DIEM, Variant::IREM, Variant::REM, Variant::EM}) {
      const SolverConfig cfg = variant_preset(v);
      const SolveResult r = solve(vi.op, vi.set, x0, std::nullopt, cfg);
      const double lower = std::min(cfg.lambda0(), cfg.mu() / L) - 1e-12;
      double upper = cfg.lambda0();
      for (std::size_t i = 0; i < r.stepsizes.size(); ++i) {
        EXPECT_GE(r.stepsizes[i], lower);
        EXPECT_LE(r.stepsizes[i], upper + 1e-15);
        upper += cfg.zeta(static_cast<std::int64_t>(i) + 1);
      }
    }
  }
}

TEST(Solve, RLinearRateOnStronglyMonotone) {
  const RandomVi vi = make_random_vi(20, 10, 4, {XiMode::Zero, 1.0});
  std::mt19937_64 rng(4);
  const Vector x0 = oracle::random_normal(rng, 20);
  SolverConfig cfg = variant_preset(Variant::GAME).with_tolerance(1e-10, 10000);
  // Re-run step by step to record ||s_n||.
  IterateState st{x0, x0, cfg.lambda0(), 1};
  std::vector<double> norms;
  for (int i = 0; i < 400; ++i) {
    const StepOutcome out = game_iteration(st, vi.op, vi.set, cfg);
    st = out.next;
    norms.push_back(st.current.norm());
    if (norms.back() < 1e-14) break;
  }
  EXPECT_LE(oracle::log_slope(norms, 0.8), -0.01);
}

TEST(Solve, Trace) {
  const RandomVi vi = make_random_vi(10, 5, 2);
  const SolveResult r = solve(vi.op, vi.set, Vector::Ones(10), std::nullopt, variant_preset(Variant::EM));
  std::ostringstream os;
  write_trace_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "iter,residual,lambda");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, r.iterations);
}

TEST(Presets, Table) {
  const SolverConfig g = variant_preset(Variant::GAME);
  EXPECT_EQ(g.rho(), 0.6);
  EXPECT_EQ(g.alpha(1), 0.5);
  EXPECT_EQ(g.beta(1), 0.2);
  const SolverConfig em = variant_preset("EM");
  EXPECT_EQ(em.rho(), 1.0);
  EXPECT_EQ(em.alpha(1), 0.0);
  EXPECT_EQ(em.beta(1), 0.0);
  const SolverConfig ir = variant_preset("IREM");
  EXPECT_EQ(ir.rho(), 0.6);
  EXPECT_EQ(ir.alpha(1), 0.0);
  EXPECT_EQ(ir.beta(1), 0.2);
  const SolverConfig di = variant_preset("DIEM");
  EXPECT_EQ(di.rho(), 1.0);
  EXPECT_EQ(di.alpha(1), 0.5);
  const SolverConfig re = variant_preset("REM");
  EXPECT_EQ(re.rho(), 0.6);
  EXPECT_EQ(re.beta(1), 0.0);
  for (const char* name : {"GAME", "DIEM", "IREM", "REM", "EM"}) {
    const SolverConfig c = variant_preset(name);
    EXPECT_EQ(c.mu(), 0.4);
    EXPECT_EQ(c.lambda0(), 0.01);
    EXPECT_EQ(c.zeta(3), 1.0 / 39.0);
  }
  try {
    variant_preset("FISTA");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownVariant);
  }
}

TEST(Presets, TheoryWarnings) {
  EXPECT_FALSE(variant_preset(Variant::GAME).theory_warnings().empty());
  EXPECT_FALSE(variant_preset(Variant::IREM).theory_warnings().empty());
  // delta = 8: rho < 1/9, alpha < 0.5.
  EXPECT_TRUE(make_cfg(0.1, 0.3, 0.1).theory_warnings().empty());
}

TEST(Config, RejectsOutOfDomain) {
  const auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::ParseError;
  };
  EXPECT_EQ(code_of([] { make_cfg(0, 0.5, 0.2); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { make_cfg(1.1, 0.5, 0.2); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { make_cfg(0.6, 1.0, 0.2); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { make_cfg(0.6, 0.5, -0.1); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { make_cfg(0.6, 0.5, 0.2, 0.0); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { make_cfg(0.6, 0.5, 0.2, 1e-6, 0); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] {
              SolverOptions o;
              o.mu = 1.0;
              SolverConfig c(o);
            }),
            Errc::InvalidConfig);
  EXPECT_EQ(code_of([] {
              SolverOptions o;
              o.lambda0 = 0.0;
              SolverConfig c(o);
            }),
            Errc::InvalidConfig);
  EXPECT_EQ(code_of([] {
              SolverOptions o;
              o.max_iter = 50;
              o.zeta = [](std::int64_t n) { return n < 20 ? 0.1 : 0.0; };
              SolverConfig c(o);
            }),
            Errc::InvalidConfig);
}
