#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gamevi/data_io.hpp"
#include "gamevi/elm.hpp"
#include "gamevi/metrics.hpp"
#include "gamevi/operators.hpp"

namespace gamevi {

enum class BenchMode { ViBench, ElmBench };
enum class StartMode { Random, Zero };

struct ViSize {
  int N = 0;
  int L = 0;
};

struct BenchConfig {
  BenchMode mode = BenchMode::ViBench;
  std::vector<std::string> variants = {"GAME", "DIEM", "IREM", "REM", "EM"};
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = "bench_out";
  bool no_timing = false;
  bool write_traces = true;

  double tol = 1e-6;
  std::int64_t max_iter = 10000;

  // vibench
  std::vector<ViSize> sizes = {{10, 5}, {20, 10}, {30, 15}, {50, 20}};
  XiMode xi = XiMode::Zero;
  double diagonal_boost = 0.0;
  StartMode start = StartMode::Random;

  // elmbench
  std::vector<std::string> datasets;
  CsvOptions csv;
  int hidden = 100;
  double lambda_reg = 1e-3;
  int folds = 5;
  ConstraintMode constraint_mode = ConstraintMode::Shrink;

  /// Throws Error(InvalidConfig / UnknownVariant) before any work is done.
  void validate() const;
};

/// Flat INI-style file: `[bench]`, `[vi]`, `[elm]`, `[solver]` sections of
/// `key = value` lines. Unknown keys are rejected.
BenchConfig load_bench_config(const std::string& path, BenchMode mode);

/// GAMEVI_OUTPUT_DIR replaces output_dir, GAMEVI_SEED replaces the seed list.
void apply_env_overrides(BenchConfig& cfg);

std::vector<ViSize> parse_sizes(const std::string& text);
std::vector<std::string> parse_list(const std::string& text);
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct BenchRow {
  std::string variant;
  std::string instance;
  std::uint64_t seed = 0;
  double iterations = 0.0;  // mean over folds in ElmBench
  double time_s = 0.0;
  double final_residual = 0.0;  // last ||b_n - c_n||, or training objective in ElmBench
  double final_norm = 0.0;      // ||x|| at termination (ViBench)
  std::string termination;
  std::optional<MetricsReport> metrics;
};

struct BenchError {
  std::string instance;
  std::string message;
};

struct BenchSummary {
  std::string variant;
  std::string instance;
  double mean_iterations = 0.0;
  double mean_time_s = 0.0;
  std::size_t runs = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchError> errors;

  /// Means over seeds per (variant, instance), in first-seen order.
  std::vector<BenchSummary> summary() const;
  const BenchRow* find(const std::string& variant, const std::string& instance, std::uint64_t seed) const;
};

std::string instance_name(const ViSize& size);

/// Random VI per (size, seed), every variant from the same x0. Writes
/// report.csv, summary.csv, errors.csv (when needed) and per-run traces
/// into cfg.output_dir unless it is empty.
BenchReport run_vi_benchmark(const BenchConfig& cfg);

/// k-fold ELM training per dataset and seed; metrics on scaled test targets.
BenchReport run_elm_benchmark(const BenchConfig& cfg);

void write_report_csv(std::ostream& out, const BenchReport& report, bool no_timing);
void write_summary_csv(std::ostream& out, const BenchReport& report, bool no_timing);

}  // namespace gamevi
