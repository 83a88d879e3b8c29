#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oracle.hpp"
#include "tsplab/experiment.hpp"
#include "tsplab/gadgets.hpp"
#include "tsplab/io.hpp"

using namespace tsplab;
using Catch::Approx;

TEST_CASE("instance round trip preserves coordinates bit-exactly") {
  const GadgetInstance fam = build_manhattan_family(3);
  std::ostringstream out;
  write_instance(out, fam.instance, {{"family", "manhattan"}});
  std::istringstream in(out.str());
  const Instance back = read_instance(in);
  REQUIRE(back.n() == fam.instance.n());
  CHECK(back.points == fam.instance.points);  // 17 significant digits round-trip doubles
  CHECK(back.metric == fam.instance.metric);
  CHECK(back.name == fam.instance.name);
}

TEST_CASE("instance parse errors carry line numbers") {
  std::istringstream missing("name x\nn 4\nd 2\nmetric 2\npoints\n0 0\n1 1\n");
  try {
    read_instance(missing);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() > 0);
  }
  std::istringstream bad_metric("n 3\nd 2\nmetric nope\npoints\n0 0\n1 1\n2 2\n");
  CHECK_THROWS_AS(read_instance(bad_metric), ParseError);
  std::istringstream bad_number("n 3\nd 2\nmetric 2\npoints\n0 zero\n1 1\n2 2\n");
  CHECK_THROWS_AS(read_instance(bad_number), ParseError);
}

TEST_CASE("tour and script round trips") {
  const GadgetInstance fam = build_euclidean_family(3);
  {
    std::ostringstream out;
    write_tour(out, fam.initial_tour);
    std::istringstream in(out.str());
    CHECK(read_tour(in) == fam.initial_tour);
  }
  {
    std::ostringstream out;
    write_script(out, fam.script);
    std::istringstream in(out.str());
    const GadgetScript back = read_script(in);
    CHECK(back.expected_count == fam.script.expected_count);
    REQUIRE(back.moves.size() == fam.script.moves.size());
    for (std::size_t i = 0; i < back.moves.size(); ++i)
      CHECK(back.moves[i] == fam.script.moves[i]);
  }
}

TEST_CASE("trace csv schema") {
  const Instance sq = oracle::unit_square();
  const RunTrace trace = run(sq, oracle::square_crossing_tour(), PivotRule::first());
  std::ostringstream out;
  write_trace_csv(out, trace);
  const std::string text = out.str();
  CHECK(text.find("# tsplab trace v1") == 0);
  CHECK(text.find("step,u1,u2,v1,v2,delta,length_after") != std::string::npos);
}

TEST_CASE("tsplib write-then-read round trip") {
  const Instance inst({{0.25, 0.5}, {0.75, 0.125}, {0.1, 0.9}, {0.3, 0.4}},
                      Metric::euclidean(), "demo");
  std::ostringstream out;
  write_tsplib(out, inst);
  CHECK(out.str().find("EUC_2D") != std::string::npos);
  CHECK(out.str().find("COMMENT") != std::string::npos);
  std::istringstream in(out.str());
  const TsplibReadResult back = read_tsplib(in);
  CHECK(back.instance.points == inst.points);
  CHECK(back.instance.metric == inst.metric);
}

TEST_CASE("tsplib hand-written file and unsupported types") {
  std::istringstream ok(
      "NAME: toy\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: MAN_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 1 1\n4 0 1\nEOF\n");
  const TsplibReadResult r = read_tsplib(ok);
  CHECK(r.instance.n() == 4);
  CHECK(r.instance.metric == Metric::manhattan());

  std::istringstream bad(
      "NAME: toy\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
      "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 1 1\nEOF\n");
  try {
    read_tsplib(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  const Instance lp({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, Metric::lp(3), "lp3");
  std::ostringstream out;
  CHECK_THROWS_AS(write_tsplib(out, lp), std::invalid_argument);
}

TEST_CASE("experiment rows are deterministic and well-formed") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::Phi;
  cfg.n_values = {12};
  cfg.phi_values = {1.0, 4.0};
  cfg.seeds = {1, 2, 3};
  cfg.pivot = Pivot::FirstImprovement;
  cfg.init = InitKind::Random;

  const std::vector<RecordRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 6);
  for (const RecordRow& r : rows) {
    CHECK(!r.error.has_value());
    CHECK(r.steps >= 0);
    CHECK(r.final_length <= r.init_length + 1e-12);
    REQUIRE(r.opt_length.has_value());  // n = 12 is within Held-Karp range
    CHECK(*r.ratio >= 1.0 - 1e-12);
    CHECK(!r.truncated_run);
    CHECK(!r.runtime_ms.has_value());  // timing off by default
  }

  std::ostringstream a, b;
  write_rows_csv(a, rows);
  write_rows_csv(b, run_experiment(cfg));
  CHECK(a.str() == b.str());  // bit-identical output for a fixed config
  CHECK(a.str().find("# tsplab experiment v1") == 0);

  std::ostringstream j;
  write_rows_jsonl(j, rows);
  CHECK(j.str().find("\"seed\":1") != std::string::npos);
}

TEST_CASE("experiment gadget model replays the script") {
  ExperimentConfig cfg;
  cfg.model = ModelKind::Gadget;
  cfg.metric = Metric::euclidean();
  cfg.n_values = {3};  // family size
  cfg.seeds = {1};
  cfg.pivot = Pivot::Scripted;
  const std::vector<RecordRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].error.has_value());
  CHECK(rows[0].steps == 50);
  CHECK(rows[0].n == 24);
  CHECK(rows[0].final_length < rows[0].init_length);

  // first-improvement on the same gadget instance reaches some local optimum
  cfg.pivot = Pivot::FirstImprovement;
  const std::vector<RecordRow> fi = run_experiment(cfg);
  REQUIRE(fi.size() == 1);
  CHECK(!fi[0].error.has_value());
  CHECK(fi[0].steps >= 1);
}

TEST_CASE("experiment refuses empty seeds and flags truncation") {
  ExperimentConfig cfg;
  cfg.seeds = {};
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

  ExperimentConfig tiny;
  tiny.model = ModelKind::Uniform;
  tiny.n_values = {30};
  tiny.seeds = {5};
  tiny.step_limit = 2;
  const std::vector<RecordRow> rows = run_experiment(tiny);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].steps == 2);
  CHECK(rows[0].truncated_run);
}
