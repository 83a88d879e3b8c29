#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tsplab/analysis.hpp"
#include "tsplab/core.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/gadgets.hpp"
#include "tsplab/heuristics.hpp"
#include "tsplab/io.hpp"
#include "tsplab/random_models.hpp"

namespace tsplab {

enum class ModelKind { Uniform, Phi, Gaussian, Gadget };

inline const char* model_label(ModelKind m) {
  switch (m) {
    case ModelKind::Uniform: return "uniform";
    case ModelKind::Phi: return "phi";
    case ModelKind::Gaussian: return "gaussian";
    case ModelKind::Gadget: return "gadget";
  }
  return "?";
}

enum class InitKind { Random, Nearest, Cheapest, RandomOrder };

inline const char* init_label(InitKind i) {
  switch (i) {
    case InitKind::Random: return "random";
    case InitKind::Nearest: return "nearest";
    case InitKind::Cheapest: return "cheapest";
    case InitKind::RandomOrder: return "random_order";
  }
  return "?";
}

struct ExperimentConfig {
  ModelKind model = ModelKind::Uniform;
  std::vector<int> n_values{100};
  int d = 2;
  std::vector<double> phi_values{1.0};  // Phi model sweep
  double sigma = 0.1;                   // Gaussian model
  double alpha = 1.0;
  bool truncated = true;
  Metric metric = Metric::euclidean();
  Pivot pivot = Pivot::FirstImprovement;
  InitKind init = InitKind::Random;
  std::vector<std::uint64_t> seeds{1};
  std::int64_t step_limit = 0;  // 0 = suggested limit from (n, phi)
  bool compute_opt = true;      // Held-Karp when n is small enough
  bool timing = false;          // fill runtime_ms (makes output nondeterministic)
};

struct RecordRow {
  std::uint64_t seed = 0;
  std::string model;
  int n = 0;
  int d = 0;
  double phi_effective = 1.0;
  std::string p;
  std::string pivot;
  std::string init;
  std::int64_t steps = 0;
  double init_length = 0.0;
  double final_length = 0.0;
  std::optional<double> opt_length;
  double opt_lb = 0.0;
  std::optional<double> ratio;
  std::int64_t pairs_disjoint = 0;
  std::int64_t pairs_type01 = 0;
  double min_delta = 0.0;  // smallest improvement along the trace
  std::optional<double> runtime_ms;
  bool truncated_run = false;
  std::optional<std::string> error;
};

namespace experiment_detail {

struct Setting {
  int n;
  double phi;
  int index;  // position in the sweep, for output ordering
};

inline RecordRow run_one(const ExperimentConfig& cfg, const Setting& s, std::uint64_t seed) {
  RecordRow row;
  row.seed = seed;
  row.model = model_label(cfg.model);
  row.d = cfg.d;
  row.pivot = pivot_label(cfg.pivot);
  row.init = init_label(cfg.init);
  row.p = cfg.metric.label();
  try {
    Instance inst;
    std::optional<GadgetInstance> gadget;
    double phi_effective = 1.0;
    switch (cfg.model) {
      case ModelKind::Uniform:
        inst = sample_uniform(s.n, cfg.d, seed, cfg.metric);
        phi_effective = 1.0;
        break;
      case ModelKind::Phi:
        inst = sample_phi_perturbed(s.n, cfg.d, s.phi, seed, nullptr, cfg.metric);
        phi_effective = s.phi;
        break;
      case ModelKind::Gaussian: {
        const SmoothingParams params{cfg.sigma, cfg.alpha, cfg.truncated};
        const Instance base = sample_uniform(s.n, cfg.d, seed ^ 0x5eedba5eULL, cfg.metric);
        inst = sample_smoothed_gaussian(base.points, params, seed, cfg.metric);
        // density bound after rescaling the support hull onto the unit cube
        phi_effective = phi_of_gaussian(params, cfg.d) * rescale_inflation(params, cfg.d);
        break;
      }
      case ModelKind::Gadget: {
        if (cfg.metric == Metric::euclidean()) gadget = build_euclidean_family(s.n);
        else if (cfg.metric == Metric::manhattan()) gadget = build_manhattan_family(s.n);
        else gadget = build_lp_family(s.n, cfg.metric);
        inst = gadget->instance;
        phi_effective = 0.0;  // not a bounded-density model
        break;
      }
    }
    row.n = inst.n();
    row.phi_effective = phi_effective;

    Tour start = Tour::identity(inst.n());
    if (gadget) {
      start = gadget->initial_tour;
    } else {
      switch (cfg.init) {
        case InitKind::Random: start = random_tour(inst, seed); break;
        case InitKind::Nearest: start = insertion_tour(inst, InsertionPolicy::Nearest); break;
        case InitKind::Cheapest: start = insertion_tour(inst, InsertionPolicy::Cheapest); break;
        case InitKind::RandomOrder:
          start = insertion_tour(inst, InsertionPolicy::RandomOrder, seed);
          break;
      }
    }

    PivotRule rule;
    switch (cfg.pivot) {
      case Pivot::FirstImprovement: rule = PivotRule::first(); break;
      case Pivot::BestImprovement: rule = PivotRule::best(); break;
      case Pivot::RandomImprovement: rule = PivotRule::random(seed); break;
      case Pivot::Scripted:
        if (!gadget) throw std::invalid_argument("scripted pivot requires the gadget model");
        rule = PivotRule::scripted(gadget->script.moves);
        break;
    }

    std::int64_t limit = cfg.step_limit;
    if (limit <= 0) limit = suggested_step_limit(inst.n(), std::max(1.0, phi_effective));

    const auto t0 = std::chrono::steady_clock::now();
    const RunTrace trace = run(inst, start, rule, limit);
    const auto t1 = std::chrono::steady_clock::now();

    row.steps = static_cast<std::int64_t>(trace.steps.size());
    row.init_length = trace.initial_length;
    row.final_length = trace.final_length();
    row.truncated_run = trace.terminated == RunTermination::StepLimit;
    if (cfg.timing)
      row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const PairReport pairs = linked_pair_decomposition(trace, false);
    row.pairs_disjoint = pairs.pairs_disjoint;
    row.pairs_type01 = pairs.pairs_type01_disjoint;
    row.min_delta = std::numeric_limits<double>::infinity();
    for (const StepRecord& st : trace.steps) row.min_delta = std::min(row.min_delta, st.delta);
    if (trace.steps.empty()) row.min_delta = 0.0;

    if (cfg.model != ModelKind::Gadget && phi_effective >= 1.0)
      row.opt_lb = opt_lower_bound(inst, phi_effective);
    if (cfg.compute_opt && inst.n() <= kHeldKarpMaxN) {
      const auto [opt, opt_tour] = held_karp_opt(inst);
      row.opt_length = opt;
      row.ratio = row.final_length / opt;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace experiment_detail

// One row per (seed x setting), computed independently (rows may run on a
// thread pool) and emitted sorted by seed, then setting order. Output is a
// pure function of the config unless timing is enabled.
inline std::vector<RecordRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw std::invalid_argument("run_experiment: seeds must be non-empty");
  std::vector<experiment_detail::Setting> settings;
  int idx = 0;
  for (int n : cfg.n_values) {
    if (cfg.model == ModelKind::Phi) {
      for (double phi : cfg.phi_values) settings.push_back({n, phi, idx++});
    } else {
      settings.push_back({n, 1.0, idx++});
    }
  }

  struct Job {
    std::uint64_t seed;
    experiment_detail::Setting setting;
  };
  std::vector<Job> jobs;
  for (std::uint64_t seed : cfg.seeds)
    for (const auto& s : settings) jobs.push_back({seed, s});

  std::vector<RecordRow> rows(jobs.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || jobs.size() == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      rows[i] = experiment_detail::run_one(cfg, jobs[i].setting, jobs[i].seed);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < hw; ++w)
      workers.emplace_back([&]() {
        for (std::size_t i = cursor.fetch_add(1); i < jobs.size(); i = cursor.fetch_add(1))
          rows[i] = experiment_detail::run_one(cfg, jobs[i].setting, jobs[i].seed);
      });
    for (auto& w : workers) w.join();
  }
  // jobs are generated seed-major, then setting order: already sorted.
  return rows;
}

inline const char* kExperimentCsvHeader =
    "seed,model,n,d,phi_effective,p,pivot,init,steps,init_length,final_length,opt_length,"
    "opt_lower_bound,ratio,pairs_disjoint,pairs_type01,min_delta,runtime_ms,truncated,error";

namespace experiment_detail {

inline std::string csv_safe(const std::string& s) {
  std::string out;
  for (char c : s) out += (c == ',' || c == '\n' || c == '\r') ? ';' : c;
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace experiment_detail

inline void write_rows_csv(std::ostream& out, const std::vector<RecordRow>& rows) {
  out << "# tsplab experiment v1\n";
  out << kExperimentCsvHeader << "\n";
  for (const RecordRow& r : rows) {
    out << r.seed << "," << r.model << "," << r.n << "," << r.d << ","
        << format_double(r.phi_effective) << "," << r.p << "," << r.pivot << "," << r.init << ","
        << r.steps << "," << format_double(r.init_length) << "," << format_double(r.final_length)
        << "," << (r.opt_length ? format_double(*r.opt_length) : "") << ","
        << format_double(r.opt_lb) << "," << (r.ratio ? format_double(*r.ratio) : "") << ","
        << r.pairs_disjoint << "," << r.pairs_type01 << "," << format_double(r.min_delta) << ","
        << (r.runtime_ms ? format_double(*r.runtime_ms) : "") << "," << (r.truncated_run ? 1 : 0)
        << "," << (r.error ? experiment_detail::csv_safe(*r.error) : "") << "\n";
  }
}

inline void write_rows_jsonl(std::ostream& out, const std::vector<RecordRow>& rows) {
  for (const RecordRow& r : rows) {
    out << "{\"seed\":" << r.seed << ",\"model\":\"" << r.model << "\",\"n\":" << r.n
        << ",\"d\":" << r.d << ",\"phi_effective\":" << format_double(r.phi_effective)
        << ",\"p\":\"" << r.p << "\",\"pivot\":\"" << r.pivot << "\",\"init\":\"" << r.init
        << "\",\"steps\":" << r.steps << ",\"init_length\":" << format_double(r.init_length)
        << ",\"final_length\":" << format_double(r.final_length);
    if (r.opt_length) out << ",\"opt_length\":" << format_double(*r.opt_length);
    out << ",\"opt_lower_bound\":" << format_double(r.opt_lb);
    if (r.ratio) out << ",\"ratio\":" << format_double(*r.ratio);
    out << ",\"pairs_disjoint\":" << r.pairs_disjoint << ",\"pairs_type01\":" << r.pairs_type01
        << ",\"min_delta\":" << format_double(r.min_delta);
    if (r.runtime_ms) out << ",\"runtime_ms\":" << format_double(*r.runtime_ms);
    out << ",\"truncated\":" << (r.truncated_run ? "true" : "false");
    if (r.error) out << ",\"error\":\"" << experiment_detail::json_escape(*r.error) << "\"";
    out << "}\n";
  }
}

// Least-squares slope of log(mean steps) against log(n); the trend statistic
// reported alongside sweep outputs.
inline double loglog_slope(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xy.size());
  for (const auto& [x, y] : xy) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace tsplab
