#include "gamevi/bench.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gamevi/fista.hpp"
#include "gamevi/solver.hpp"

namespace gamevi {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFista = "FISTA";

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_bool(const std::string& text) {
  const std::string v = strip(text);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(Errc::ParseError, fmt::format("expected a boolean, got '{}'", text));
}

template <class T>
T parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    T value{};
    if constexpr (std::is_same_v<T, double>) {
      value = std::stod(text, &used);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (strip(text).starts_with('-')) throw std::invalid_argument("negative");
      value = std::stoull(text, &used);
    } else {
      value = static_cast<T>(std::stoll(text, &used));
    }
    if (!strip(text.substr(used)).empty()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, fmt::format("expected a number, got '{}'", text));
  }
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::string fmt_time(double t, bool no_timing) { return no_timing ? std::string() : fmt::format("{:.5f}", t); }

std::uint64_t start_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

void write_file(const fs::path& path, const std::string& what, auto&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, fmt::format("cannot write {} '{}'", what, path.string()));
  body(out);
}

void emit_outputs(const BenchConfig& cfg, const BenchReport& report) {
  if (cfg.output_dir.empty()) return;
  const fs::path dir(cfg.output_dir);
  write_file(dir / "report.csv", "report", [&](std::ostream& o) { write_report_csv(o, report, cfg.no_timing); });
  write_file(dir / "summary.csv", "summary", [&](std::ostream& o) { write_summary_csv(o, report, cfg.no_timing); });
  const fs::path errors = dir / "errors.csv";
  if (report.errors.empty()) {
    fs::remove(errors);
    return;
  }
  write_file(errors, "error log", [&](std::ostream& o) {
    o << "instance,message\n";
    for (const auto& e : report.errors) {
      std::string msg = e.message;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      fmt::print(o, "{},\"{}\"\n", e.instance, msg);
    }
  });
}

void prepare_output_dir(const BenchConfig& cfg) {
  if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);
}

}  // namespace

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ';') {
      std::string s = strip(item);
      if (!s.empty()) out.push_back(std::move(s));
      item.clear();
    } else {
      item.push_back(ch);
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : parse_list(text)) out.push_back(parse_number<std::uint64_t>(item));
  return out;
}

std::vector<ViSize> parse_sizes(const std::string& text) {
  std::vector<ViSize> out;
  for (const auto& item : parse_list(text)) {
    const auto x = item.find_first_of("xX:");
    if (x == std::string::npos) throw Error(Errc::ParseError, fmt::format("size '{}' is not of the form NxL", item));
    out.push_back({parse_number<int>(item.substr(0, x)), parse_number<int>(item.substr(x + 1))});
  }
  return out;
}

void BenchConfig::validate() const {
  const auto bad = [](const std::string& msg) { throw Error(Errc::InvalidConfig, msg); };
  if (variants.empty()) bad("no variants selected");
  if (seeds.empty()) bad("no seeds selected");
  if (!(tol > 0.0) || max_iter < 1) bad("tol and max_iter must be positive");
  for (const auto& v : variants) {
    if (v == kFista) {
      if (mode == BenchMode::ViBench) bad("FISTA is only available in elmbench");
    } else {
      parse_variant(v);
    }
  }
  if (mode == BenchMode::ViBench) {
    if (sizes.empty()) bad("no instance sizes selected");
    for (const auto& s : sizes) {
      if (s.N < 1 || s.L < 1) bad(fmt::format("invalid size {}x{}", s.N, s.L));
    }
  } else {
    if (datasets.empty()) bad("no datasets selected");
    if (hidden < 1) bad("hidden node count must be >= 1");
    if (!(lambda_reg >= 0.0)) bad("lambda must be nonnegative");
    if (folds < 2) bad("need at least two folds");
  }
}

BenchConfig load_bench_config(const std::string& path, BenchMode mode) {
  if (!fs::exists(path)) throw Error(Errc::FileNotFound, fmt::format("config file '{}' not found", path));
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(Errc::ParseError, e.what());
  }

  BenchConfig cfg;
  cfg.mode = mode;
  for (const auto& [section, body] : tree) {
    for (const auto& [key, node] : body) {
      const std::string value = strip(node.get_value<std::string>());
      const std::string where = section + "." + key;
      if (where == "bench.variants") cfg.variants = parse_list(value);
      else if (where == "bench.seeds") cfg.seeds = parse_seeds(value);
      else if (where == "bench.output_dir") cfg.output_dir = value;
      else if (where == "bench.no_timing") cfg.no_timing = parse_bool(value);
      else if (where == "bench.traces") cfg.write_traces = parse_bool(value);
      else if (where == "solver.tol") cfg.tol = parse_number<double>(value);
      else if (where == "solver.max_iter") cfg.max_iter = parse_number<std::int64_t>(value);
      else if (where == "vi.sizes") cfg.sizes = parse_sizes(value);
      else if (where == "vi.xi") {
        if (value == "zero") cfg.xi = XiMode::Zero;
        else if (value == "random") cfg.xi = XiMode::Random;
        else throw Error(Errc::ParseError, fmt::format("vi.xi must be zero or random, got '{}'", value));
      } else if (where == "vi.diagonal_boost") cfg.diagonal_boost = parse_number<double>(value);
      else if (where == "vi.start") {
        if (value == "random") cfg.start = StartMode::Random;
        else if (value == "zero") cfg.start = StartMode::Zero;
        else throw Error(Errc::ParseError, fmt::format("vi.start must be random or zero, got '{}'", value));
      } else if (where == "elm.datasets") cfg.datasets = parse_list(value);
      else if (where == "elm.target") {
        const bool numeric = !value.empty() && (std::isdigit(static_cast<unsigned char>(value[0])) || value[0] == '-');
        if (value == "last") cfg.csv.target = -1;
        else if (numeric) cfg.csv.target = parse_number<int>(value);
        else cfg.csv.target = value;
      } else if (where == "elm.has_header") cfg.csv.has_header = parse_bool(value);
      else if (where == "elm.hidden") cfg.hidden = parse_number<int>(value);
      else if (where == "elm.lambda") cfg.lambda_reg = parse_number<double>(value);
      else if (where == "elm.folds") cfg.folds = parse_number<int>(value);
      else if (where == "elm.constraint") {
        if (value == "shrink") cfg.constraint_mode = ConstraintMode::Shrink;
        else if (value == "l1ball") cfg.constraint_mode = ConstraintMode::L1BallProjection;
        else throw Error(Errc::ParseError, fmt::format("elm.constraint must be shrink or l1ball, got '{}'", value));
      } else {
        throw Error(Errc::ParseError, fmt::format("{}: unknown key '{}'", path, where));
      }
    }
  }
  return cfg;
}

void apply_env_overrides(BenchConfig& cfg) {
  if (const char* dir = std::getenv("GAMEVI_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;
  if (const char* seed = std::getenv("GAMEVI_SEED"); seed && *seed) cfg.seeds = parse_seeds(seed);
}

std::string instance_name(const ViSize& size) { return fmt::format("N{}_L{}", size.N, size.L); }

std::vector<BenchSummary> BenchReport::summary() const {
  std::vector<BenchSummary> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.variant, row.instance);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back(BenchSummary{row.variant, row.instance, 0.0, 0.0, 0});
    }
    BenchSummary& s = out[it->second];
    s.mean_iterations += row.iterations;
    s.mean_time_s += row.time_s;
    ++s.runs;
  }
  for (auto& s : out) {
    s.mean_iterations /= static_cast<double>(s.runs);
    s.mean_time_s /= static_cast<double>(s.runs);
  }
  return out;
}

const BenchRow* BenchReport::find(const std::string& variant, const std::string& instance,
                                  std::uint64_t seed) const {
  for (const auto& row : rows) {
    if (row.variant == variant && row.instance == instance && row.seed == seed) return &row;
  }
  return nullptr;
}

void write_report_csv(std::ostream& out, const BenchReport& report, bool no_timing) {
  out << "variant,instance,seed,iterations,time_s,final_residual,rmse,mae,sse_sst,ssr_sst\n";
  for (const auto& row : report.rows) {
    fmt::print(out, "{},{},{},{},{},{:.10g},", row.variant, row.instance, row.seed, row.iterations,
               fmt_time(row.time_s, no_timing), row.final_residual);
    if (row.metrics) {
      write_metrics_row(out, *row.metrics);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const BenchReport& report, bool no_timing) {
  out << "variant,instance,runs,mean_iterations,mean_time_s\n";
  for (const auto& s : report.summary()) {
    fmt::print(out, "{},{},{},{:.2f},{}\n", s.variant, s.instance, s.runs, s.mean_iterations,
               fmt_time(s.mean_time_s, no_timing));
  }
}

BenchReport run_vi_benchmark(const BenchConfig& cfg) {
  if (cfg.mode != BenchMode::ViBench) throw Error(Errc::InvalidConfig, "run_vi_benchmark: mode must be vibench");
  cfg.validate();
  prepare_output_dir(cfg);

  std::vector<std::pair<std::string, SolverConfig>> solvers;
  for (const auto& v : cfg.variants) solvers.emplace_back(v, variant_preset(v).with_tolerance(cfg.tol, cfg.max_iter));

  BenchReport report;
  for (const ViSize& size : cfg.sizes) {
    const std::string inst = instance_name(size);
    for (const std::uint64_t seed : cfg.seeds) {
      const RandomVi vi = make_random_vi(size.N, size.L, seed, RandomViOptions{cfg.xi, cfg.diagonal_boost});
      Vector x0 = Vector::Zero(size.N);
      if (cfg.start == StartMode::Random) {
        std::mt19937_64 rng(start_seed(seed));
        std::normal_distribution<double> normal;
        for (Index i = 0; i < x0.size(); ++i) x0[i] = normal(rng);
      }
      for (const auto& [name, solver] : solvers) {
        BenchRow row;
        row.variant = name;
        row.instance = inst;
        row.seed = seed;
        try {
          const SolveResult res = solve(vi.op, vi.set, x0, std::nullopt, solver);
          row.iterations = static_cast<double>(res.iterations);
          row.time_s = res.elapsed;
          row.final_residual = res.residuals.empty() ? 0.0 : res.residuals.back();
          row.final_norm = res.solution.norm();
          row.termination = std::string(to_string(res.termination));
          if (!res.converged()) {
            report.errors.push_back({inst, fmt::format("{} seed {} terminated with {}", name, seed, row.termination)});
          }
          if (cfg.write_traces && !cfg.output_dir.empty()) {
            const fs::path p = fs::path(cfg.output_dir) / fmt::format("trace_{}_{}_{}.csv", name, inst, seed);
            write_file(p, "trace", [&](std::ostream& o) { write_trace_csv(o, res); });
          }
        } catch (const Error& e) {
          row.termination = std::string(to_string(e.code()));
          report.errors.push_back({inst, fmt::format("{} seed {}: {}", name, seed, e.what())});
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  emit_outputs(cfg, report);
  return report;
}

BenchReport run_elm_benchmark(const BenchConfig& cfg) {
  if (cfg.mode != BenchMode::ElmBench) throw Error(Errc::InvalidConfig, "run_elm_benchmark: mode must be elmbench");
  cfg.validate();
  prepare_output_dir(cfg);

  BenchReport report;
  for (const auto& path : cfg.datasets) {
    const std::string inst = stem_of(path);
    Dataset ds;
    try {
      ds = load_csv(path, cfg.csv);
      if (ds.rows() < cfg.folds) {
        throw Error(Errc::InvalidK, fmt::format("{} rows cannot fill {} folds", ds.rows(), cfg.folds));
      }
    } catch (const Error& e) {
      report.errors.push_back({inst, fmt::format("{}: {}", to_string(e.code()), e.what())});
      continue;
    }

    for (const std::uint64_t seed : cfg.seeds) {
      const auto folds = kfold_split(ds.rows(), cfg.folds, seed);
      const HiddenLayer layer = init_hidden_layer(static_cast<int>(ds.cols()), cfg.hidden, seed);

      struct Acc {
        double iterations = 0, time = 0, objective = 0, rmse = 0, mae = 0, sse = 0, ssr = 0;
        bool ratios = true;
        std::string termination;
      };
      std::vector<Acc> acc(cfg.variants.size());

      for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto split = fit_transform_minmax(ds.subset(folds[f].train), ds.subset(folds[f].test));
        const Matrix H_train = hidden_output(split.train.features, layer);
        const Matrix H_test = hidden_output(split.test.features, layer);
        const Vector& y_train = split.train.targets;
        const std::string fold_inst = fmt::format("{}-f{}", inst, f);

        for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
          const std::string& name = cfg.variants[v];
          Vector beta;
          double iterations = 0.0, elapsed = 0.0;
          const fs::path trace_path =
              fs::path(cfg.output_dir) / fmt::format("trace_{}_{}_{}.csv", name, fold_inst, seed);
          const bool traces = cfg.write_traces && !cfg.output_dir.empty();
          if (name == kFista) {
            const FistaResult fr = fista(H_train, y_train, cfg.lambda_reg, cfg.tol, cfg.max_iter);
            beta = fr.beta;
            iterations = static_cast<double>(fr.trace.iterations);
            elapsed = fr.trace.elapsed;
            if (!fr.trace.converged) acc[v].termination = "MaxIterations";
            if (traces) write_file(trace_path, "trace", [&](std::ostream& o) { write_trace_csv(o, fr.trace); });
          } else {
            TrainerConfig tc;
            tc.m = cfg.hidden;
            tc.lambda_reg = cfg.lambda_reg;
            tc.constraint_mode = cfg.constraint_mode;
            tc.seed = seed;
            tc.solver = variant_preset(name).with_tolerance(cfg.tol, cfg.max_iter);
            const TrainResult tr = train(H_train, y_train, tc);
            beta = tr.beta;
            iterations = static_cast<double>(tr.trace.iterations);
            elapsed = tr.trace.elapsed;
            if (!tr.trace.converged()) acc[v].termination = std::string(to_string(tr.trace.termination));
            if (traces) write_file(trace_path, "trace", [&](std::ostream& o) { write_trace_csv(o, tr.trace); });
          }
          const MetricsReport m = evaluate(split.test.targets, H_test * beta);
          Acc& a = acc[v];
          a.iterations += iterations;
          a.time += elapsed;
          a.objective += lasso_objective(H_train, y_train, beta, cfg.lambda_reg);
          a.rmse += m.rmse;
          a.mae += m.mae;
          if (m.sse_sst && m.ssr_sst) {
            a.sse += *m.sse_sst;
            a.ssr += *m.ssr_sst;
          } else {
            a.ratios = false;
          }
        }
      }

      const double k = static_cast<double>(folds.size());
      for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
        const Acc& a = acc[v];
        BenchRow row;
        row.variant = cfg.variants[v];
        row.instance = inst;
        row.seed = seed;
        row.iterations = a.iterations / k;
        row.time_s = a.time / k;
        row.final_residual = a.objective / k;
        row.termination = a.termination.empty() ? "Converged" : a.termination;
        MetricsReport m;
        m.rmse = a.rmse / k;
        m.mae = a.mae / k;
        if (a.ratios) {
          m.sse_sst = a.sse / k;
          m.ssr_sst = a.ssr / k;
        }
        m.n = ds.rows();
        row.metrics = m;
        if (!a.termination.empty()) {
          report.errors.push_back(
              {inst, fmt::format("{} seed {} hit {} on at least one fold", row.variant, seed, a.termination)});
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  emit_outputs(cfg, report);
  return report;
}

}  // namespace gamevi
