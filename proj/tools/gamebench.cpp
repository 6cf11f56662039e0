// Benchmark driver: random monotone VI instances (vibench), ELM regression
// with k-fold cross-validation (elmbench), and a synthetic sinc generator.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gamevi/bench.hpp"
#include "gamevi/data_io.hpp"
#include "gamevi/solver.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string variants;
  std::string seeds;
  std::string out;
  bool no_timing = false;
  std::optional<double> tol;
  std::optional<std::int64_t> max_iter;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "INI-style configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--variants", f.variants, "Comma-separated variants (GAME,DIEM,IREM,REM,EM[,FISTA])");
  cmd->add_option("--seeds", f.seeds, "Comma-separated integer seeds");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("--no-timing", f.no_timing, "Leave timing columns empty (byte-reproducible reports)");
  cmd->add_option("--tol", f.tol, "Stopping tolerance");
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap");
}

gamevi::BenchConfig resolve(gamevi::BenchMode mode, const CommonFlags& f) {
  gamevi::BenchConfig cfg = f.config.empty() ? gamevi::BenchConfig{} : gamevi::load_bench_config(f.config, mode);
  cfg.mode = mode;
  if (mode == gamevi::BenchMode::ElmBench && f.config.empty()) {
    cfg.variants = {"GAME", "DIEM", "IREM", "REM", "EM", "FISTA"};
  }
  gamevi::apply_env_overrides(cfg);
  if (!f.variants.empty()) cfg.variants = gamevi::parse_list(f.variants);
  if (!f.seeds.empty()) cfg.seeds = gamevi::parse_seeds(f.seeds);
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.no_timing) cfg.no_timing = true;
  if (f.tol) cfg.tol = *f.tol;
  if (f.max_iter) cfg.max_iter = *f.max_iter;
  return cfg;
}

void warn_theory(const gamevi::BenchConfig& cfg) {
  for (const auto& v : cfg.variants) {
    if (v == "FISTA") continue;
    for (const auto& w : gamevi::variant_preset(v).theory_warnings()) {
      fmt::print(std::cerr, "warning: {}: {}\n", v, w);
    }
  }
}

void print_summary(const gamevi::BenchReport& report, bool no_timing) {
  fmt::print("{:<8} {:<16} {:>6} {:>12} {:>12}\n", "variant", "instance", "runs", "mean_iter", "mean_time_s");
  for (const auto& s : report.summary()) {
    fmt::print("{:<8} {:<16} {:>6} {:>12.1f} {:>12}\n", s.variant, s.instance, s.runs, s.mean_iterations,
               no_timing ? std::string("-") : fmt::format("{:.5f}", s.mean_time_s));
  }
  for (const auto& e : report.errors) fmt::print(std::cerr, "error: {}: {}\n", e.instance, e.message);
}

int write_sinc(const std::string& path, int n, double range, double noise, std::uint64_t seed) {
  gamevi::write_csv(path, gamevi::make_sinc(n, range, noise, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extragradient VI and ELM benchmark harness"};
  app.require_subcommand(1);

  CommonFlags vi_flags;
  std::string sizes;
  auto* vi = app.add_subcommand("vibench", "Random monotone VI over a polyhedron, one row per (variant, size, seed)");
  add_common(vi, vi_flags);
  vi->add_option("--sizes", sizes, "Comma-separated NxL instance sizes, e.g. 10x5,20x10");

  CommonFlags elm_flags;
  std::string datasets;
  std::optional<int> hidden, folds;
  std::optional<double> lambda;
  std::string target;
  auto* elm = app.add_subcommand("elmbench", "ELM training with k-fold cross-validation on CSV datasets");
  add_common(elm, elm_flags);
  elm->add_option("--datasets", datasets, "Comma-separated CSV paths");
  elm->add_option("--hidden", hidden, "Hidden node count m");
  elm->add_option("--lambda", lambda, "L1 regularization weight");
  elm->add_option("--folds", folds, "Cross-validation folds");
  elm->add_option("--target", target, "Target column name or index (default: last column)");

  std::string sinc_out;
  int sinc_n = 500;
  double sinc_range = 10.0;
  double sinc_noise = 0.05;
  std::uint64_t sinc_seed = 7;
  auto* sinc = app.add_subcommand("sinc", "Write a synthetic sinc regression CSV");
  sinc->add_option("--out", sinc_out, "Output CSV path")->required();
  sinc->add_option("--n", sinc_n, "Sample count");
  sinc->add_option("--range", sinc_range, "Inputs are drawn from U(-range, range)")->check(CLI::PositiveNumber);
  sinc->add_option("--noise", sinc_noise, "Gaussian noise standard deviation");
  sinc->add_option("--seed", sinc_seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sinc) return write_sinc(sinc_out, sinc_n, sinc_range, sinc_noise, sinc_seed);

    if (*vi) {
      gamevi::BenchConfig cfg = resolve(gamevi::BenchMode::ViBench, vi_flags);
      if (!sizes.empty()) cfg.sizes = gamevi::parse_sizes(sizes);
      cfg.validate();
      warn_theory(cfg);
      const auto report = gamevi::run_vi_benchmark(cfg);
      print_summary(report, cfg.no_timing);
      return 0;
    }

    gamevi::BenchConfig cfg = resolve(gamevi::BenchMode::ElmBench, elm_flags);
    if (!datasets.empty()) cfg.datasets = gamevi::parse_list(datasets);
    if (hidden) cfg.hidden = *hidden;
    if (lambda) cfg.lambda_reg = *lambda;
    if (folds) cfg.folds = *folds;
    if (!target.empty()) {
      if (target == "last") cfg.csv.target = -1;
      else if (target.find_first_not_of("-0123456789") == std::string::npos) cfg.csv.target = std::stoi(target);
      else cfg.csv.target = target;
    }
    cfg.validate();
    warn_theory(cfg);
    const auto report = gamevi::run_elm_benchmark(cfg);
    print_summary(report, cfg.no_timing);
    return report.rows.empty() ? 1 : 0;
  } catch (const gamevi::Error& e) {
    fmt::print(std::cerr, "gamebench: {} ({})\n", e.what(), gamevi::to_string(e.code()));
    return 2;
  }
}
