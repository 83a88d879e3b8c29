#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracle.hpp"
#include "tsplab/analysis.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/gadgets.hpp"
#include "tsplab/heuristics.hpp"
#include "tsplab/random_models.hpp"

using namespace tsplab;
using Catch::Approx;

namespace {

StepRecord make_step(Edge r1, Edge r2, Edge a1, Edge a2) {
  StepRecord s;
  s.change = TwoChange(r1, r2);
  s.added1 = a1;
  s.added2 = a2;
  s.delta = 1.0;
  return s;
}

}  // namespace

TEST_CASE("pair classification by vertex overlap") {
  // s1 swaps {1,2},{3,4} -> {1,3},{2,4}
  const StepRecord s1 = make_step(Edge(1, 2), Edge(3, 4), Edge(1, 3), Edge(2, 4));

  // type 0: six distinct vertices; s2 removes {1,3},{5,6}, adds {1,5},{3,6}
  const StepRecord t0 = make_step(Edge(1, 3), Edge(5, 6), Edge(1, 5), Edge(3, 6));
  CHECK(classify_linked_pair(s1, t0) == PairType::Type0);

  // type 1a: v2 = v6; s2 removes {1,3},{5,2}, adds {1,5},{3,2}
  const StepRecord t1a = make_step(Edge(1, 3), Edge(5, 2), Edge(1, 5), Edge(3, 2));
  CHECK(classify_linked_pair(s1, t1a) == PairType::Type1a);

  // type 1b: v2 = v5; s2 removes {1,3},{2,5}, adds {1,2},{3,5}
  const StepRecord t1b = make_step(Edge(1, 3), Edge(2, 5), Edge(1, 2), Edge(3, 5));
  CHECK(classify_linked_pair(s1, t1b) == PairType::Type1b);

  // type 2: v2 = v6, v4 = v5; s2 removes {1,3},{2,4}, adds {1,4},{3,2}
  const StepRecord t2 = make_step(Edge(1, 3), Edge(2, 4), Edge(1, 4), Edge(3, 2));
  CHECK(classify_linked_pair(s1, t2) == PairType::Type2);

  // unlinked: s2 removes neither added edge
  const StepRecord un = make_step(Edge(1, 2), Edge(5, 6), Edge(1, 5), Edge(2, 6));
  CHECK(classify_linked_pair(s1, un) == PairType::Unlinked);

  // the shared vertex can also be v4
  const StepRecord t1a4 = make_step(Edge(1, 3), Edge(5, 4), Edge(1, 5), Edge(3, 4));
  const PairType ty = classify_linked_pair(s1, t1a4);
  CHECK((ty == PairType::Type1a || ty == PairType::Type1b));
}

TEST_CASE("decomposition of trivial traces") {
  const Instance sq = oracle::unit_square();
  const RunTrace one = run(sq, oracle::square_crossing_tour(), PivotRule::first());
  REQUIRE(one.steps.size() == 1);
  const PairReport rep = linked_pair_decomposition(one);
  CHECK(rep.pairs_all == 0);  // no later step removes the added edges
  CHECK(rep.pairs_disjoint == 0);

  const RunTrace zero = run(sq, oracle::square_perimeter_tour(), PivotRule::first());
  const PairReport rep0 = linked_pair_decomposition(zero);
  CHECK(rep0.t == 0);
  CHECK(rep0.pairs_disjoint == 0);
}

TEST_CASE("decomposition bounds hold on engine traces") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = sample_uniform(40, 2, seed);
    for (const PivotRule& rule :
         {PivotRule::first(), PivotRule::best(), PivotRule::random(seed)}) {
      const RunTrace trace = run(inst, random_tour(inst, seed), rule);
      const std::int64_t t = static_cast<std::int64_t>(trace.steps.size());
      const std::int64_t n = inst.n();
      const PairReport rep = linked_pair_decomposition(trace);
      CHECK(rep.pairs_all >= 2 * t - n);
      CHECK(rep.pairs_disjoint >= ceil_div(2 * t - n, 7));
      CHECK(rep.pairs_type01_disjoint >= ceil_div(4 * t - 3 * n, 28));
      // disjointness: no step appears in two kept pairs
      std::vector<char> used(static_cast<std::size_t>(t), 0);
      for (const auto& [i, j] : rep.disjoint_pairs) {
        CHECK(!used[static_cast<std::size_t>(i)]);
        CHECK(!used[static_cast<std::size_t>(j)]);
        used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = 1;
      }
      // every kept pair in the type-01 list really is type 0 or 1
      for (const auto& [i, j] : rep.disjoint_pairs_type01) {
        const PairType ty = classify_linked_pair(trace.steps[static_cast<std::size_t>(i)],
                                                 trace.steps[static_cast<std::size_t>(j)]);
        CHECK((ty == PairType::Type0 || ty == PairType::Type1a || ty == PairType::Type1b));
      }
    }
  }
}

TEST_CASE("type-2 exclusion consistency") {
  // dropping the type-2 members of the inclusive disjoint list still clears
  // the type-0/1 lemma bound, as does the dedicated exclusive construction
  for (std::uint64_t seed = 20; seed <= 26; ++seed) {
    const Instance inst = sample_phi_perturbed(60, 2, 4.0, seed);
    const RunTrace trace = run(inst, random_tour(inst, seed), PivotRule::first());
    const PairReport rep = linked_pair_decomposition(trace);
    std::int64_t filtered = 0;
    for (const auto& [i, j] : rep.disjoint_pairs)
      if (classify_linked_pair(trace.steps[static_cast<std::size_t>(i)],
                               trace.steps[static_cast<std::size_t>(j)]) != PairType::Type2)
        ++filtered;
    const std::int64_t bound =
        ceil_div(4 * rep.t - 3 * static_cast<std::int64_t>(inst.n()), 28);
    CHECK(rep.pairs_type01_disjoint >= bound);
    CHECK(filtered >= bound);
    // the histogram over the inclusive disjoint list accounts for every pair
    std::int64_t hist_sum = 0;
    for (std::int64_t h : rep.histogram) hist_sum += h;
    CHECK(hist_sum == rep.pairs_disjoint);
  }
}

TEST_CASE("held-karp on fixed instances") {
  const Instance tri({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, Metric::euclidean(), "tri");
  CHECK(held_karp_opt(tri).first == Approx(2.0 + std::sqrt(2.0)).margin(1e-12));

  const Instance sq = oracle::unit_square();
  const auto [len, tour] = held_karp_opt(sq);
  CHECK(len == Approx(4.0).margin(1e-12));
  CHECK(tour == oracle::square_perimeter_tour());
  CHECK(tour_length(tour, sq) == Approx(len).margin(1e-12));
}

TEST_CASE("held-karp equals brute force on seeded instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Instance inst = sample_uniform(10, 2, seed);
    const auto [hk, hk_tour] = held_karp_opt(inst);
    const auto [bf, bf_order] = oracle::brute_force_opt(inst);
    CHECK(hk == Approx(bf).margin(1e-9));
    CHECK(tour_length(hk_tour, inst) == Approx(hk).margin(1e-9));
  }
  const Instance big = sample_uniform(19, 2, 1);
  CHECK_THROWS_AS(held_karp_opt(big), CapacityError);
}

TEST_CASE("opt lower bound") {
  // all points in one subcube: inapplicable
  std::vector<Point> clustered(5, Point{0.51, 0.52});
  clustered.push_back(Point{0.52, 0.51});
  const Instance tight(clustered, Metric::euclidean(), "tight");
  CHECK(opt_lower_bound(tight, 1.0) == 0.0);

  // 4x4 grid of subcube centers: k = 16, X = 16, bound = ceil(16/9)/4 = 0.5
  std::vector<Point> grid;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      grid.push_back(Point{(i + 0.5) / 4.0, (j + 0.5) / 4.0});
  const Instance gridded(grid, Metric::euclidean(), "grid");
  CHECK(opt_lower_bound(gridded, 1.0) == Approx(0.5).margin(1e-12));

  std::vector<Point> outside{{-0.1, 0.5}, {0.5, 0.5}, {0.9, 0.9}};
  CHECK_THROWS_AS(opt_lower_bound(Instance(outside, Metric::euclidean(), "x"), 1.0),
                  std::invalid_argument);

  // bound never exceeds the optimum
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = sample_uniform(12, 2, seed);
    CHECK(opt_lower_bound(inst, 1.0) <= held_karp_opt(inst).first + 1e-9);
  }
}

TEST_CASE("state graph longest path on tiny instances") {
  const Instance tri({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, Metric::euclidean(), "tri");
  CHECK(state_graph_longest_path(tri).steps == 0);

  const Instance sq = oracle::unit_square();
  const LongestPathResult res = state_graph_longest_path(sq);
  CHECK(res.steps == 1);
  REQUIRE(res.path.size() == 2);
  CHECK(res.path.back() == oracle::square_perimeter_tour());

  const Instance big = sample_uniform(11, 2, 3);
  CHECK_THROWS_AS(state_graph_longest_path(big), CapacityError);
}

TEST_CASE("state graph of the 8-point gadget admits the scripted path") {
  const GadgetInstance fam = build_euclidean_family(1);
  REQUIRE(fam.instance.n() == 8);
  const LongestPathResult res = state_graph_longest_path(fam.instance);
  CHECK(res.steps >= 2);  // at least the scripted two flips
}

TEST_CASE("state graph dominates engine runs") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance inst = sample_uniform(7, 2, seed);
    const LongestPathResult res = state_graph_longest_path(inst);
    for (std::uint64_t s2 = 0; s2 < 6; ++s2) {
      const Tour start = random_tour(inst, s2);
      for (const PivotRule& rule :
           {PivotRule::first(), PivotRule::best(), PivotRule::random(s2)}) {
        const RunTrace trace = run(inst, start, rule);
        CHECK(static_cast<std::int64_t>(trace.steps.size()) <= res.steps);
      }
    }
    // the witness path is a real improving path
    for (std::size_t i = 0; i + 1 < res.path.size(); ++i)
      CHECK(tour_length(res.path[i + 1], inst) < tour_length(res.path[i], inst));
  }
}

TEST_CASE("crossing count") {
  const Instance sq = oracle::unit_square();
  CHECK(crossing_count(oracle::square_perimeter_tour(), sq) == 0);
  CHECK(crossing_count(oracle::square_crossing_tour(), sq) == 1);

  const Instance cube = sample_uniform(8, 3, 1);
  CHECK_THROWS_AS(crossing_count(Tour::identity(8), cube), std::invalid_argument);

  // local optima of Euclidean instances have no crossings
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance inst = sample_uniform(25, 2, seed);
    const RunTrace trace = run(inst, random_tour(inst, seed), PivotRule::first());
    CHECK(crossing_count(trace.final_tour, inst) == 0);
  }
}

TEST_CASE("exact orientation predicate handles degenerate inputs") {
  using tsplab::exact::orient_sign;
  CHECK(orient_sign({0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}) == 0);  // collinear
  CHECK(orient_sign({0.0, 0.0}, {1.0, 0.0}, {1.0, 1e-300}) == 1);
  CHECK(orient_sign({0.0, 0.0}, {1.0, 0.0}, {1.0, -1e-300}) == -1);
  // nearly collinear: double arithmetic alone misjudges such cases
  const double eps = std::ldexp(1.0, -52);
  CHECK(orient_sign({0.0, 0.0}, {1.0, 1.0}, {0.5 + eps, 0.5}) == -1);
  CHECK(orient_sign({0.0, 0.0}, {1.0, 1.0}, {0.5, 0.5}) == 0);
}

TEST_CASE("min improvement") {
  const Instance sq = oracle::unit_square();
  CHECK(min_improvement(sq, MinImprovementScope::Single) ==
        Approx(2.0 * std::sqrt(2.0) - 2.0).margin(1e-12));

  // independent check: minimum positive delta over all tours and moves
  double brute = std::numeric_limits<double>::infinity();
  for (const std::vector<int>& order :
       {std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 1, 3, 2}, std::vector<int>{0, 2, 1, 3}})
    for (const auto& mv : oracle::all_two_changes(order, sq))
      if (mv.delta > 1e-12) brute = std::min(brute, mv.delta);
  CHECK(min_improvement(sq, MinImprovementScope::Single) == Approx(brute).margin(1e-12));

  // zero-step trace: +infinity sentinel
  const RunTrace zero = run(sq, oracle::square_perimeter_tour(), PivotRule::first());
  CHECK(std::isinf(min_improvement(sq, MinImprovementScope::LinkedPairs01, &zero)));

  // gadget g=1 trace: the two flips are disjoint and linked by no edge, so
  // the pair list is empty; a longer gadget trace has linked pairs
  const GadgetInstance fam = build_euclidean_family(3);
  const RunTrace trace =
      run(fam.instance, fam.initial_tour, PivotRule::scripted(fam.script.moves));
  const double v = min_improvement(fam.instance, MinImprovementScope::LinkedPairs01, &trace);
  CHECK(v > 0.0);
  CHECK(std::isfinite(v));
}

TEST_CASE("single min improvement bounds every engine delta") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = sample_uniform(15, 2, seed);
    const double dmin = min_improvement(inst, MinImprovementScope::Single);
    const RunTrace trace = run(inst, random_tour(inst, seed), PivotRule::first());
    for (const StepRecord& s : trace.steps) CHECK(s.delta >= dmin - 1e-12);
  }
}
