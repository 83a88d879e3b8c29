#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracle.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/gadgets.hpp"
#include "tsplab/heuristics.hpp"
#include "tsplab/random_models.hpp"

using namespace tsplab;
using Catch::Approx;

TEST_CASE("improving_moves on the square") {
  const Instance sq = oracle::unit_square();
  const auto moves = improving_moves(oracle::square_crossing_tour(), sq);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].second == Approx(2.0 * std::sqrt(2.0) - 2.0).margin(1e-12));
  CHECK(improving_moves(oracle::square_perimeter_tour(), sq).empty());
}

TEST_CASE("improving_moves agrees with brute-force enumeration") {
  const Metric metrics[4] = {Metric::manhattan(), Metric::euclidean(), Metric::lp(3),
                             Metric::linf()};
  Rng rng(21);
  for (int iter = 0; iter < 30; ++iter) {
    const int n = 5 + static_cast<int>(rng.below(5));
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform01(), rng.uniform01()});
    const Instance inst(pts, metrics[iter % 4], "rnd");
    const Tour t = random_tour(inst, static_cast<std::uint64_t>(iter));
    const auto lib = improving_moves(t, inst);
    std::size_t brute_improving = 0;
    for (const auto& mv : oracle::all_two_changes(t.order(), inst))
      if (mv.delta > 1e-12) ++brute_improving;
    // near-zero deltas may be classified differently; require exact match on
    // clearly improving moves and sanity on the rest
    std::size_t lib_clear = 0;
    for (const auto& [c, d] : lib)
      if (d > 1e-12) ++lib_clear;
    CHECK(lib_clear == brute_improving);
    // total non-adjacent pairs enumerated
    CHECK(oracle::all_two_changes(t.order(), inst).size() ==
          static_cast<std::size_t>(n * (n - 3) / 2));
  }
}

TEST_CASE("improving_moves honors the strictness threshold") {
  const Instance sq = oracle::unit_square();
  const Tour crossing = oracle::square_crossing_tour();
  CHECK(improving_moves(crossing, sq, 0.5).size() == 1);
  CHECK(improving_moves(crossing, sq, 1.0).empty());  // the only move gains ~0.83
}

TEST_CASE("improving_moves on the g=1 gadget contains both block flips") {
  const GadgetInstance fam = build_euclidean_family(1);
  const auto moves = improving_moves(fam.initial_tour, fam.instance);
  for (const TwoChange& flip : fam.script.moves) {
    bool found = false;
    for (const auto& [c, d] : moves)
      if (c == flip) found = true;
    CHECK(found);
  }
  CHECK(fam.script.moves.size() == 2);
}

TEST_CASE("run on the square") {
  const Instance sq = oracle::unit_square();
  const RunTrace trace = run(sq, oracle::square_crossing_tour(), PivotRule::first());
  CHECK(trace.steps.size() == 1);
  CHECK(trace.terminated == RunTermination::LocalOpt);
  CHECK(trace.final_tour == oracle::square_perimeter_tour());
  CHECK(trace.final_length() == Approx(4.0).margin(1e-12));

  const RunTrace already = run(sq, oracle::square_perimeter_tour(), PivotRule::first());
  CHECK(already.steps.empty());
  CHECK(already.terminated == RunTermination::LocalOpt);
}

TEST_CASE("is_local_optimum") {
  const Instance sq = oracle::unit_square();
  CHECK(is_local_optimum(oracle::square_perimeter_tour(), sq));
  CHECK(!is_local_optimum(oracle::square_crossing_tour(), sq));
  const RunTrace trace = run(sq, oracle::square_crossing_tour(), PivotRule::best());
  CHECK(is_local_optimum(trace.final_tour, sq));
}

TEST_CASE("traces are monotone and replay exactly") {
  Rng rng(5);
  for (int iter = 0; iter < 12; ++iter) {
    const Instance inst = sample_uniform(20 + static_cast<int>(rng.below(20)), 2,
                                         static_cast<std::uint64_t>(100 + iter));
    for (const PivotRule& rule :
         {PivotRule::first(), PivotRule::best(), PivotRule::random(7 * iter + 1)}) {
      const RunTrace trace = run(inst, random_tour(inst, static_cast<std::uint64_t>(iter)), rule);
      REQUIRE(trace.terminated == RunTermination::LocalOpt);
      double prev = trace.initial_length;
      Tour replayed = trace.initial_tour;
      for (const StepRecord& s : trace.steps) {
        CHECK(s.delta > 0.0);
        CHECK(s.length_after < prev);
        prev = s.length_after;
        const auto added = added_edges(replayed, s.change);
        CHECK((added.first == s.added1 || added.first == s.added2));
        replayed = apply_two_change(replayed, s.change);
      }
      CHECK(replayed == trace.final_tour);
      CHECK(tour_length(trace.final_tour, inst) == Approx(trace.final_length()).epsilon(1e-9));
      CHECK(is_local_optimum(trace.final_tour, inst));
    }
  }
}

TEST_CASE("first-improvement picks the lexicographically first move") {
  // cross-check the resume optimization against a plain rescan
  Rng rng(9);
  for (int iter = 0; iter < 10; ++iter) {
    const Instance inst = sample_uniform(15, 2, static_cast<std::uint64_t>(iter));
    Tour t = random_tour(inst, 3);
    const RunTrace trace = run(inst, t, PivotRule::first());
    // replicate: always apply the first improving move of the full enumeration
    Tour cur = t;
    std::size_t steps = 0;
    while (true) {
      const auto moves = improving_moves(cur, inst);
      if (moves.empty()) break;
      cur = apply_two_change(cur, moves.front().first);
      ++steps;
      REQUIRE(steps < 100000);
    }
    // both reach a local optimum of the same length trajectory family; the
    // step-by-step choice must agree because the scan order is the same
    CHECK(steps == trace.steps.size());
    CHECK(cur == trace.final_tour);
  }
}

TEST_CASE("step limit truncates") {
  const Instance inst = sample_uniform(30, 2, 77);
  const RunTrace trace = run(inst, random_tour(inst, 1), PivotRule::first(), 3);
  CHECK(trace.steps.size() == 3);
  CHECK(trace.terminated == RunTermination::StepLimit);
}

TEST_CASE("random pivot is deterministic per seed") {
  const Instance inst = sample_uniform(25, 2, 13);
  const Tour start = random_tour(inst, 2);
  const RunTrace a = run(inst, start, PivotRule::random(99));
  const RunTrace b = run(inst, start, PivotRule::random(99));
  REQUIRE(a.steps.size() == b.steps.size());
  CHECK(a.final_tour == b.final_tour);
  for (std::size_t i = 0; i < a.steps.size(); ++i)
    CHECK(a.steps[i].change == b.steps[i].change);
}

TEST_CASE("scripted rule rejects bad scripts with the offending index") {
  const Instance sq = oracle::unit_square();
  // move 0 is fine (uncross); move 1 then tries to re-cross, which is not improving
  std::vector<TwoChange> moves{TwoChange(Edge(0, 2), Edge(1, 3)),
                               TwoChange(Edge(0, 1), Edge(2, 3))};
  try {
    run(sq, oracle::square_crossing_tour(), PivotRule::scripted(moves));
    FAIL("expected ScriptViolation");
  } catch (const ScriptViolation& v) {
    CHECK(v.step() == 1);
  }

  // an edge that is not in the tour at all
  std::vector<TwoChange> missing{TwoChange(Edge(0, 1), Edge(2, 3))};
  CHECK_THROWS_AS(run(sq, oracle::square_crossing_tour(), PivotRule::scripted(missing)),
                  ScriptViolation);
}

TEST_CASE("scripted run ends with SCRIPT_END") {
  const GadgetInstance fam = build_euclidean_family(2);
  const RunTrace trace =
      run(fam.instance, fam.initial_tour, PivotRule::scripted(fam.script.moves));
  CHECK(trace.terminated == RunTermination::ScriptEnd);
  CHECK(trace.steps.size() == static_cast<std::size_t>(fam.script.expected_count));
}
