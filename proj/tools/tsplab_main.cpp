// tsplab command-line front end: instance/gadget generation, 2-Opt runs,
// script verification, experiment sweeps, and exact oracles.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or input error,
// 3 capacity exceeded.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tsplab/tsplab.hpp"

using namespace tsplab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

Instance load_instance(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".tsp") {
    const TsplibReadResult r =
        read_file(path, [](std::istream& in) { return read_tsplib(in); });
    if (r.rounding_divergence_warning)
      std::cerr << "note: distances are used unrounded; TSPLIB integer rounding is not applied\n";
    return r.instance;
  }
  return read_file(path, [](std::istream& in) { return read_instance(in); });
}

Pivot parse_pivot(const std::string& s) {
  if (s == "first") return Pivot::FirstImprovement;
  if (s == "best") return Pivot::BestImprovement;
  if (s == "random") return Pivot::RandomImprovement;
  if (s == "scripted") return Pivot::Scripted;
  throw CLI::ValidationError("--pivot", "unknown pivot rule '" + s + "'");
}

InitKind parse_init(const std::string& s) {
  if (s == "random") return InitKind::Random;
  if (s == "nearest") return InitKind::Nearest;
  if (s == "cheapest") return InitKind::Cheapest;
  if (s == "random_order") return InitKind::RandomOrder;
  throw CLI::ValidationError("--init", "unknown init '" + s + "'");
}

struct GenGadgetArgs {
  std::string family = "euclidean";
  int gadgets = 3;
  int pairs = 2;
  std::string p = "3";
  bool jitter = false;
  std::uint64_t jitter_seed = 0;
  std::string out = "gadget";
};

int cmd_gen_gadget(const GenGadgetArgs& a) {
  GadgetInstance fam;
  if (a.family == "euclidean") {
    fam = build_euclidean_family(a.gadgets, a.jitter, a.jitter_seed);
  } else if (a.family == "manhattan") {
    fam = build_manhattan_family(a.pairs, a.jitter, a.jitter_seed);
  } else if (a.family == "lp") {
    fam = build_lp_family(a.pairs, Metric::from_label(a.p), a.jitter, a.jitter_seed);
  } else {
    throw CLI::ValidationError("--family", "unknown family '" + a.family + "'");
  }
  write_file(a.out + ".instance", [&](std::ostream& o) {
    write_instance(o, fam.instance, {{"family", a.family}});
  });
  write_file(a.out + ".tour", [&](std::ostream& o) { write_tour(o, fam.initial_tour); });
  write_file(a.out + ".script", [&](std::ostream& o) { write_script(o, fam.script); });
  std::cout << "wrote " << a.out << ".instance (" << fam.instance.n() << " points), .tour, .script ("
            << fam.script.moves.size() << " moves)\n";
  return kExitOk;
}

struct GenRandomArgs {
  std::string model = "uniform";
  int n = 100;
  int d = 2;
  double phi = 1.0;
  double sigma = 0.1;
  double alpha = 1.0;
  bool no_truncate = false;
  std::string p = "2";
  std::uint64_t seed = 1;
  std::string out = "instance";
};

int cmd_gen_random(const GenRandomArgs& a) {
  const Metric metric = Metric::from_label(a.p);
  Instance inst;
  if (a.model == "uniform") {
    inst = sample_uniform(a.n, a.d, a.seed, metric);
  } else if (a.model == "phi") {
    inst = sample_phi_perturbed(a.n, a.d, a.phi, a.seed, nullptr, metric);
  } else if (a.model == "gaussian") {
    const SmoothingParams params{a.sigma, a.alpha, !a.no_truncate};
    const Instance base = sample_uniform(a.n, a.d, a.seed ^ 0x5eedba5eULL, metric);
    inst = sample_smoothed_gaussian(base.points, params, a.seed, metric);
  } else {
    throw CLI::ValidationError("--model", "unknown model '" + a.model + "'");
  }
  write_file(a.out + ".instance", [&](std::ostream& o) {
    write_instance(o, inst, {{"model", a.model}, {"seed", std::to_string(a.seed)}});
  });
  write_file(a.out + ".tour",
             [&](std::ostream& o) { write_tour(o, random_tour(inst, a.seed)); });
  std::cout << "wrote " << a.out << ".instance (" << inst.n() << " points), .tour\n";
  return kExitOk;
}

struct RunArgs {
  std::string instance;
  std::string tour;
  std::string pivot = "first";
  std::string script;
  std::uint64_t seed = 0;
  std::int64_t step_limit = 0;
  std::string trace_out;
};

int cmd_run(const RunArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Tour start = a.tour.empty()
                         ? random_tour(inst, a.seed)
                         : read_file(a.tour, [](std::istream& in) { return read_tour(in); });
  GadgetScript script;
  PivotRule rule;
  const Pivot kind = parse_pivot(a.pivot);
  switch (kind) {
    case Pivot::FirstImprovement: rule = PivotRule::first(); break;
    case Pivot::BestImprovement: rule = PivotRule::best(); break;
    case Pivot::RandomImprovement: rule = PivotRule::random(a.seed); break;
    case Pivot::Scripted:
      if (a.script.empty()) throw CLI::ValidationError("--script", "scripted pivot needs a script");
      script = read_file(a.script, [](std::istream& in) { return read_script(in); });
      rule = PivotRule::scripted(script.moves);
      break;
  }
  const std::int64_t limit = a.step_limit > 0 ? a.step_limit : kNoStepLimit;
  const RunTrace trace = run(inst, start, rule, limit);
  if (!a.trace_out.empty())
    write_file(a.trace_out, [&](std::ostream& o) { write_trace_csv(o, trace); });
  const PairReport pairs = linked_pair_decomposition(trace);
  std::cout << "steps " << trace.steps.size() << "\n"
            << "initial_length " << format_double(trace.initial_length) << "\n"
            << "final_length " << format_double(trace.final_length()) << "\n"
            << "terminated " << termination_label(trace.terminated) << "\n"
            << "pairs_disjoint " << pairs.pairs_disjoint << "\n"
            << "pairs_type01_disjoint " << pairs.pairs_type01_disjoint << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string instance;
  std::string tour;
  std::string script;
};

int cmd_verify(const VerifyArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Tour start = read_file(a.tour, [](std::istream& in) { return read_tour(in); });
  const GadgetScript script =
      read_file(a.script, [](std::istream& in) { return read_script(in); });
  const VerificationReport rep = verify_script(inst, start, script);
  std::cout << "steps_checked " << rep.steps_checked << "\n"
            << "expected " << script.expected_count << "\n"
            << "min_margin " << format_double(rep.min_margin) << "\n"
            << "max_margin " << format_double(rep.max_margin) << "\n"
            << "ok " << (rep.ok ? "true" : "false") << "\n";
  if (rep.first_failure) std::cout << "first_failure " << *rep.first_failure << "\n";
  return rep.ok ? kExitOk : kExitVerifyFail;
}

struct ExperimentArgs {
  std::string model = "uniform";
  std::vector<int> n_values{100};
  int d = 2;
  std::vector<double> phi_values{1.0};
  double sigma = 0.1;
  double alpha = 1.0;
  bool no_truncate = false;
  std::string p = "2";
  std::string pivot = "first";
  std::string init = "random";
  std::vector<std::uint64_t> seeds;
  int seed_count = 0;
  std::int64_t step_limit = 0;
  std::string format = "csv";
  std::string out;
  bool timing = false;
  bool no_opt = false;
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  if (a.model == "uniform") cfg.model = ModelKind::Uniform;
  else if (a.model == "phi") cfg.model = ModelKind::Phi;
  else if (a.model == "gaussian") cfg.model = ModelKind::Gaussian;
  else if (a.model == "gadget") cfg.model = ModelKind::Gadget;
  else throw CLI::ValidationError("--model", "unknown model '" + a.model + "'");
  cfg.n_values = a.n_values;
  cfg.d = a.d;
  cfg.phi_values = a.phi_values;
  cfg.sigma = a.sigma;
  cfg.alpha = a.alpha;
  cfg.truncated = !a.no_truncate;
  cfg.metric = Metric::from_label(a.p);
  cfg.pivot = parse_pivot(a.pivot);
  cfg.init = parse_init(a.init);
  cfg.seeds = a.seeds;
  if (cfg.seeds.empty())
    for (int s = 1; s <= std::max(1, a.seed_count); ++s)
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  cfg.step_limit = a.step_limit;
  cfg.compute_opt = !a.no_opt;
  cfg.timing = a.timing;

  const std::vector<RecordRow> rows = run_experiment(cfg);
  const auto emit = [&](std::ostream& o) {
    if (a.format == "jsonl") write_rows_jsonl(o, rows);
    else write_rows_csv(o, rows);
  };
  if (a.out.empty()) emit(std::cout);
  else write_file(a.out, emit);

  // non-binding trend footers on stderr
  if (cfg.n_values.size() > 1 && cfg.model != ModelKind::Gadget) {
    std::vector<std::pair<double, double>> curve;
    for (int n : cfg.n_values) {
      double mean = 0.0;
      int count = 0;
      for (const RecordRow& r : rows)
        if (r.n == n && !r.error) {
          mean += static_cast<double>(r.steps);
          ++count;
        }
      if (count > 0) curve.emplace_back(n, mean / count);
    }
    if (curve.size() > 1)
      std::cerr << "# steps-vs-n log-log slope: " << format_double(loglog_slope(curve)) << "\n";
  }
  if (cfg.model == ModelKind::Phi && cfg.phi_values.size() > 1) {
    std::cerr << "# mean steps by phi:";
    for (double phi : cfg.phi_values) {
      double mean = 0.0;
      int count = 0;
      for (const RecordRow& r : rows)
        if (!r.error && r.phi_effective == phi) {
          mean += static_cast<double>(r.steps);
          ++count;
        }
      if (count > 0) std::cerr << " " << format_double(phi) << ":" << format_double(mean / count);
    }
    std::cerr << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsplab: 2-Opt laboratory for Lp TSP instances"};
  app.require_subcommand(1);

  // --- gen ---
  CLI::App* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  GenGadgetArgs gg;
  CLI::App* gen_gadget = gen->add_subcommand("gadget", "exponential lower-bound family");
  gen_gadget->add_option("--family", gg.family, "euclidean | manhattan | lp");
  gen_gadget->add_option("--gadgets", gg.gadgets, "gadget count (euclidean)");
  gen_gadget->add_option("--pairs", gg.pairs, "propagation/reset pair count (manhattan, lp)");
  gen_gadget->add_option("--p", gg.p, "metric exponent for lp (>= 3 or inf)");
  gen_gadget->add_flag("--jitter", gg.jitter, "perturb coordinates by +-1e-7");
  gen_gadget->add_option("--jitter-seed", gg.jitter_seed, "jitter stream seed");
  gen_gadget->add_option("--out", gg.out, "output file prefix");

  GenRandomArgs gr;
  CLI::App* gen_random = gen->add_subcommand("random", "probabilistic models");
  gen_random->add_option("--model", gr.model, "uniform | phi | gaussian");
  gen_random->add_option("--n", gr.n, "point count");
  gen_random->add_option("--d", gr.d, "dimension");
  gen_random->add_option("--phi", gr.phi, "density bound (phi model)");
  gen_random->add_option("--sigma", gr.sigma, "gaussian std deviation");
  gen_random->add_option("--alpha", gr.alpha, "gaussian truncation half-width");
  gen_random->add_flag("--no-truncate", gr.no_truncate, "use untruncated gaussian noise");
  gen_random->add_option("--p", gr.p, "metric exponent (1, 2, ..., or inf)");
  gen_random->add_option("--seed", gr.seed, "master seed");
  gen_random->add_option("--out", gr.out, "output file prefix");

  // --- run ---
  RunArgs ra;
  CLI::App* run_cmd = app.add_subcommand("run", "run 2-Opt to a local optimum");
  run_cmd->add_option("--instance", ra.instance, "instance file (.instance or .tsp)")->required();
  run_cmd->add_option("--tour", ra.tour, "initial tour file (default: seeded random tour)");
  run_cmd->add_option("--pivot", ra.pivot, "first | best | random | scripted");
  run_cmd->add_option("--script", ra.script, "script file (scripted pivot)");
  run_cmd->add_option("--seed", ra.seed, "seed for random pivot / tour");
  run_cmd->add_option("--step-limit", ra.step_limit, "maximum number of steps");
  run_cmd->add_option("--trace", ra.trace_out, "write the trace CSV here");

  // --- verify ---
  VerifyArgs va;
  CLI::App* verify_cmd = app.add_subcommand("verify", "replay and check a move script");
  verify_cmd->add_option("--instance", va.instance)->required();
  verify_cmd->add_option("--tour", va.tour)->required();
  verify_cmd->add_option("--script", va.script)->required();

  // --- experiment ---
  ExperimentArgs ea;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "seeded sweep producing CSV/JSONL rows");
  exp_cmd->add_option("--model", ea.model, "uniform | phi | gaussian | gadget");
  exp_cmd->add_option("--n", ea.n_values, "point counts (gadget: family size)");
  exp_cmd->add_option("--d", ea.d, "dimension");
  exp_cmd->add_option("--phi", ea.phi_values, "density bounds (phi model)");
  exp_cmd->add_option("--sigma", ea.sigma, "gaussian sigma");
  exp_cmd->add_option("--alpha", ea.alpha, "gaussian truncation half-width");
  exp_cmd->add_flag("--no-truncate", ea.no_truncate, "untruncated gaussian");
  exp_cmd->add_option("--p", ea.p, "metric exponent");
  exp_cmd->add_option("--pivot", ea.pivot, "first | best | random | scripted");
  exp_cmd->add_option("--init", ea.init, "random | nearest | cheapest | random_order");
  exp_cmd->add_option("--seeds", ea.seeds, "explicit seed list");
  exp_cmd->add_option("--seed-count", ea.seed_count, "use seeds 1..k");
  exp_cmd->add_option("--step-limit", ea.step_limit, "step limit (0 = suggested)");
  exp_cmd->add_option("--format", ea.format, "csv | jsonl");
  exp_cmd->add_option("--out", ea.out, "output path (default stdout)");
  exp_cmd->add_flag("--timing", ea.timing, "fill runtime_ms (nondeterministic output)");
  exp_cmd->add_flag("--no-opt", ea.no_opt, "skip Held-Karp even for small n");

  // --- oracles ---
  std::string opt_instance, opt_tour_out;
  CLI::App* opt_cmd = app.add_subcommand("opt", "exact optimum (Held-Karp, n <= 18)");
  opt_cmd->add_option("--instance", opt_instance)->required();
  opt_cmd->add_option("--tour-out", opt_tour_out, "write the optimal tour here");

  std::string bound_instance;
  double bound_phi = 1.0;
  CLI::App* bound_cmd = app.add_subcommand("bound", "subcube-partition lower bound on OPT");
  bound_cmd->add_option("--instance", bound_instance)->required();
  bound_cmd->add_option("--phi", bound_phi, "density bound of the model");

  std::string lp_instance;
  CLI::App* lp_cmd = app.add_subcommand("longest-path", "exact state-graph longest path (n <= 10)");
  lp_cmd->add_option("--instance", lp_instance)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_gadget->parsed()) return cmd_gen_gadget(gg);
    if (gen_random->parsed()) return cmd_gen_random(gr);
    if (run_cmd->parsed()) return cmd_run(ra);
    if (verify_cmd->parsed()) return cmd_verify(va);
    if (exp_cmd->parsed()) return cmd_experiment(ea);
    if (opt_cmd->parsed()) {
      const Instance inst = load_instance(opt_instance);
      const auto [len, tour] = held_karp_opt(inst);
      std::cout << "opt_length " << format_double(len) << "\n";
      if (!opt_tour_out.empty())
        write_file(opt_tour_out, [&, &tref = tour](std::ostream& o) { write_tour(o, tref); });
      return kExitOk;
    }
    if (bound_cmd->parsed()) {
      const Instance inst = load_instance(bound_instance);
      std::cout << "opt_lower_bound " << format_double(opt_lower_bound(inst, bound_phi)) << "\n";
      return kExitOk;
    }
    if (lp_cmd->parsed()) {
      const Instance inst = load_instance(lp_instance);
      const LongestPathResult res = state_graph_longest_path(inst);
      std::cout << "longest_path " << res.steps << "\n";
      for (const Tour& t : res.path) {
        std::cout << "tour";
        for (int v : t.order()) std::cout << " " << v;
        std::cout << "\n";
      }
      return kExitOk;
    }
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ScriptViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
