#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tsplab/core.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

// ---------------------------------------------------------------------------
// Linked pairs of 2-changes
// ---------------------------------------------------------------------------

// Two steps are linked when an edge added by the first is removed by the
// second. Writing the first step as exchanging {v1,v2},{v3,v4} for
// {v1,v3},{v2,v4} and the second as removing {v1,v3},{v5,v6} and adding
// {v1,v5},{v3,v6}, the type counts the overlap |{v2,v4} n {v5,v6}|; type 1
// splits by which edges the second step adds.
enum class PairType { Type0, Type1a, Type1b, Type2, Unlinked };

inline const char* pair_type_label(PairType t) {
  switch (t) {
    case PairType::Type0: return "type0";
    case PairType::Type1a: return "type1a";
    case PairType::Type1b: return "type1b";
    case PairType::Type2: return "type2";
    case PairType::Unlinked: return "unlinked";
  }
  return "?";
}

inline PairType classify_linked_pair(const StepRecord& s1, const StepRecord& s2) {
  const Edge a1 = s1.added1, a2 = s1.added2;
  const bool link1 = (s2.change.e1 == a1 || s2.change.e2 == a1);
  const bool link2 = (s2.change.e1 == a2 || s2.change.e2 == a2);
  if (!link1 && !link2) return PairType::Unlinked;
  if (link1 && link2) return PairType::Type2;  // s2 removes both edges s1 added

  // Normalize s1 to the convention: removed {v1,v2},{v3,v4}, added
  // {v1,v3},{v2,v4}, where {v1,v3} is the linking edge.
  const Edge link = link1 ? a1 : a2;
  int v1 = link.u, v3 = link.v;
  const auto partner_in = [](const Edge& e, int v) { return e.u == v ? e.v : e.u; };
  const auto removed_partner = [&](int v) {
    if (s1.change.e1.u == v || s1.change.e1.v == v) return partner_in(s1.change.e1, v);
    return partner_in(s1.change.e2, v);
  };
  int v2 = removed_partner(v1);
  int v4 = removed_partner(v3);

  // s2: the other removed edge is {v5,v6} with v5 added-paired with v1.
  const Edge other = (s2.change.e1 == link) ? s2.change.e2 : s2.change.e1;
  const auto added_mate = [&](int v) -> int {
    if (s2.added1.u == v) return s2.added1.v;
    if (s2.added1.v == v) return s2.added1.u;
    if (s2.added2.u == v) return s2.added2.v;
    return s2.added2.u;
  };
  int v5 = added_mate(v1);
  int v6 = added_mate(v3);

  const auto in_other = [&](int v) { return other.u == v || other.v == v; };
  const int overlap = (in_other(v2) ? 1 : 0) + (in_other(v4) ? 1 : 0);
  if (overlap == 0) return PairType::Type0;
  if (overlap == 2) return PairType::Type2;

  if (!in_other(v2)) {  // make v2 the shared vertex
    std::swap(v1, v3);
    std::swap(v2, v4);
    std::swap(v5, v6);
  }
  return v2 == v6 ? PairType::Type1a : PairType::Type1b;
}

struct PairReport {
  std::int64_t t = 0;                  // trace length
  std::int64_t pairs_all = 0;          // entries in the constructed list L
  std::int64_t pairs_disjoint = 0;     // greedy disjoint sublist L' (all types)
  std::int64_t pairs_type01_disjoint = 0;  // L' when type-2 pairs are skipped
  std::array<std::int64_t, 4> histogram{};  // L' of the inclusive run, by type
  std::vector<std::pair<std::int64_t, std::int64_t>> disjoint_pairs;         // inclusive L'
  std::vector<std::pair<std::int64_t, std::int64_t>> disjoint_pairs_type01;  // exclusive L'
};

// The pairing construction: each step is paired with the first later step
// removing each of its two added edges; a greedy scan in creation order then
// keeps a maximal prefix-disjoint sublist. With exclude_type2, type-2 pairs
// are never added to the list. Guarantees (with t = steps, n = vertices):
// the inclusive disjoint list has >= (2t-n)/7 pairs and the exclusive one
// >= t/7 - 3n/28.
inline PairReport linked_pair_decomposition(const RunTrace& trace, bool exclude_type2 = false) {
  const std::vector<StepRecord>& steps = trace.steps;
  const std::int64_t t = static_cast<std::int64_t>(steps.size());

  std::map<Edge, std::vector<std::int64_t>> removed_at;
  for (std::int64_t i = 0; i < t; ++i) {
    removed_at[steps[static_cast<std::size_t>(i)].change.e1].push_back(i);
    removed_at[steps[static_cast<std::size_t>(i)].change.e2].push_back(i);
  }
  const auto first_removal_after = [&](const Edge& e, std::int64_t i) -> std::int64_t {
    const auto it = removed_at.find(e);
    if (it == removed_at.end()) return -1;
    const auto& v = it->second;
    const auto pos = std::upper_bound(v.begin(), v.end(), i);
    return pos == v.end() ? -1 : *pos;
  };

  const auto construct = [&](bool skip_type2) {
    std::vector<std::pair<std::int64_t, std::int64_t>> list;
    for (std::int64_t i = 0; i < t; ++i) {
      for (const Edge& e : {steps[static_cast<std::size_t>(i)].added1,
                            steps[static_cast<std::size_t>(i)].added2}) {
        const std::int64_t j = first_removal_after(e, i);
        if (j < 0) continue;
        if (skip_type2 && classify_linked_pair(steps[static_cast<std::size_t>(i)],
                                               steps[static_cast<std::size_t>(j)]) ==
                              PairType::Type2)
          continue;
        list.emplace_back(i, j);
      }
    }
    return list;
  };
  const auto greedy_disjoint = [&](const std::vector<std::pair<std::int64_t, std::int64_t>>& list) {
    std::vector<char> used(static_cast<std::size_t>(t), 0);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& [i, j] : list) {
      if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = 1;
      out.emplace_back(i, j);
    }
    return out;
  };

  const auto inclusive = construct(false);
  const auto exclusive = construct(true);

  PairReport rep;
  rep.t = t;
  rep.pairs_all = static_cast<std::int64_t>((exclude_type2 ? exclusive : inclusive).size());
  rep.disjoint_pairs = greedy_disjoint(inclusive);
  rep.disjoint_pairs_type01 = greedy_disjoint(exclusive);
  rep.pairs_disjoint = static_cast<std::int64_t>(rep.disjoint_pairs.size());
  rep.pairs_type01_disjoint = static_cast<std::int64_t>(rep.disjoint_pairs_type01.size());
  for (const auto& [i, j] : rep.disjoint_pairs) {
    const PairType ty = classify_linked_pair(steps[static_cast<std::size_t>(i)],
                                             steps[static_cast<std::size_t>(j)]);
    if (ty != PairType::Unlinked) ++rep.histogram[static_cast<std::size_t>(ty)];
  }
  return rep;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a > 0 ? (a + b - 1) / b : -((-a) / b);
}

// ---------------------------------------------------------------------------
// Exact oracles
// ---------------------------------------------------------------------------

constexpr int kHeldKarpMaxN = 18;

// Exact optimum by dynamic programming over vertex subsets.
inline std::pair<double, Tour> held_karp_opt(const Instance& inst) {
  const int n = inst.n();
  if (n > kHeldKarpMaxN)
    throw CapacityError("held_karp_opt: n > " + std::to_string(kHeldKarpMaxN));
  const int m = n - 1;  // vertices 1..n-1; tours start and end at 0
  const std::size_t nmask = std::size_t{1} << m;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(nmask * static_cast<std::size_t>(m), inf);
  std::vector<std::int8_t> parent(nmask * static_cast<std::size_t>(m), -1);
  const auto idx = [m](std::size_t mask, int v) {
    return mask * static_cast<std::size_t>(m) + static_cast<std::size_t>(v);
  };

  for (int v = 0; v < m; ++v) dp[idx(std::size_t{1} << v, v)] = inst.dist(0, v + 1);
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    for (int v = 0; v < m; ++v) {
      if (!(mask & (std::size_t{1} << v))) continue;
      const double cur = dp[idx(mask, v)];
      if (cur == inf) continue;
      for (int w = 0; w < m; ++w) {
        if (mask & (std::size_t{1} << w)) continue;
        const std::size_t nxt = mask | (std::size_t{1} << w);
        const double cand = cur + inst.dist(v + 1, w + 1);
        if (cand < dp[idx(nxt, w)]) {
          dp[idx(nxt, w)] = cand;
          parent[idx(nxt, w)] = static_cast<std::int8_t>(v);
        }
      }
    }
  }

  const std::size_t full = nmask - 1;
  double best = inf;
  int last = 0;
  for (int v = 0; v < m; ++v) {
    const double cand = dp[idx(full, v)] + inst.dist(v + 1, 0);
    if (cand < best) {
      best = cand;
      last = v;
    }
  }
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::size_t mask = full;
  int v = last;
  while (v >= 0) {
    order.push_back(v + 1);
    const int p = parent[idx(mask, v)];
    mask &= ~(std::size_t{1} << v);
    v = p;
  }
  order.push_back(0);
  std::reverse(order.begin(), order.end());
  return {best, Tour(std::move(order))};
}

// Lower bound on the optimal tour length: partition [0,1]^d into k = l^d
// subcubes with k the largest such value <= n*phi, count occupied subcubes
// X, and return ceil(X / 3^d) * k^(-1/d). Inapplicable (returns 0) unless
// X > 3^d.
inline double opt_lower_bound(const Instance& inst, double phi) {
  if (phi < 1.0) throw std::invalid_argument("opt_lower_bound: phi >= 1");
  const int n = inst.n();
  const int d = inst.dim();
  for (const Point& p : inst.points)
    for (double c : p)
      if (c < 0.0 || c > 1.0)
        throw std::invalid_argument("opt_lower_bound: point outside [0,1]^d");

  const double budget = static_cast<double>(n) * phi;
  std::int64_t ell = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(std::pow(budget, 1.0 / d))));
  const auto power = [d](std::int64_t b) {
    std::int64_t r = 1;
    for (int i = 0; i < d; ++i) r *= b;
    return r;
  };
  while (static_cast<double>(power(ell + 1)) <= budget) ++ell;
  while (ell > 1 && static_cast<double>(power(ell)) > budget) --ell;

  std::vector<std::int64_t> occupied;
  occupied.reserve(inst.points.size());
  for (const Point& p : inst.points) {
    std::int64_t cell = 0;
    for (double c : p) {
      std::int64_t k = static_cast<std::int64_t>(c * static_cast<double>(ell));
      k = std::min<std::int64_t>(ell - 1, std::max<std::int64_t>(0, k));
      cell = cell * ell + k;
    }
    occupied.push_back(cell);
  }
  std::sort(occupied.begin(), occupied.end());
  const std::int64_t x = static_cast<std::int64_t>(
      std::unique(occupied.begin(), occupied.end()) - occupied.begin());

  const std::int64_t pow3d = power(3);
  if (x <= pow3d) return 0.0;
  return static_cast<double>(ceil_div(x, pow3d)) / static_cast<double>(ell);
}

// ---------------------------------------------------------------------------
// State graph
// ---------------------------------------------------------------------------

constexpr int kStateGraphMaxN = 10;

struct LongestPathResult {
  std::int64_t steps = 0;
  std::vector<Tour> path;  // a witness, from start tour to its local optimum
};

// Exact longest path in the improvement digraph over all (n-1)!/2 canonical
// tours. The digraph is acyclic (every arc strictly decreases the length),
// so one forward pass over tours in decreasing length order suffices.
inline LongestPathResult state_graph_longest_path(const Instance& inst) {
  const int n = inst.n();
  if (n > kStateGraphMaxN)
    throw CapacityError("state_graph_longest_path: n > " + std::to_string(kStateGraphMaxN));

  const auto encode = [n](const std::vector<int>& order) {
    std::uint64_t key = 0;
    for (int i = 1; i < n; ++i) key = (key << 4) | static_cast<std::uint64_t>(order[static_cast<std::size_t>(i)]);
    return key;
  };

  std::vector<std::vector<int>> tours;
  std::vector<double> lengths;
  std::unordered_map<std::uint64_t, std::int32_t> index;
  {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (perm[1] > perm[static_cast<std::size_t>(n - 1)]) continue;  // one orientation only
      double len = 0.0;
      for (int i = 0; i < n; ++i)
        len += inst.dist(perm[static_cast<std::size_t>(i)],
                         perm[static_cast<std::size_t>(i == n - 1 ? 0 : i + 1)]);
      index.emplace(encode(perm), static_cast<std::int32_t>(tours.size()));
      tours.push_back(perm);
      lengths.push_back(len);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
  }

  std::vector<std::int32_t> by_length(tours.size());
  std::iota(by_length.begin(), by_length.end(), 0);
  std::sort(by_length.begin(), by_length.end(),
            [&](std::int32_t a, std::int32_t b) { return lengths[static_cast<std::size_t>(a)] > lengths[static_cast<std::size_t>(b)]; });

  std::vector<std::int32_t> longest(tours.size(), 0);
  std::vector<int> scratch;
  for (const std::int32_t src : by_length) {
    const std::vector<int>& order = tours[static_cast<std::size_t>(src)];
    for (int i = 0; i < n; ++i) {
      const int jmax = (i == 0) ? n - 2 : n - 1;
      for (int j = i + 2; j <= jmax; ++j) {
        const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(i + 1)];
        const int c = order[static_cast<std::size_t>(j)],
                  d = order[static_cast<std::size_t>(j == n - 1 ? 0 : j + 1)];
        const double delta =
            inst.dist(a, b) + inst.dist(c, d) - inst.dist(a, c) - inst.dist(b, d);
        if (!(delta > 0.0)) continue;
        scratch = order;
        std::reverse(scratch.begin() + i + 1, scratch.begin() + j + 1);
        if (scratch[1] > scratch[static_cast<std::size_t>(n - 1)])
          std::reverse(scratch.begin() + 1, scratch.end());
        const std::int32_t tgt = index.at(encode(scratch));
        if (longest[static_cast<std::size_t>(tgt)] < longest[static_cast<std::size_t>(src)] + 1)
          longest[static_cast<std::size_t>(tgt)] = longest[static_cast<std::size_t>(src)] + 1;
      }
    }
  }

  // Rebuild a witness by walking maxima: find the sink of a maximum path by
  // a second pass recording predecessors.
  std::int32_t sink = 0;
  for (std::size_t i = 0; i < tours.size(); ++i)
    if (longest[i] > longest[static_cast<std::size_t>(sink)]) sink = static_cast<std::int32_t>(i);

  std::vector<std::int32_t> pred(tours.size(), -1);
  for (const std::int32_t src : by_length) {
    const std::vector<int>& order = tours[static_cast<std::size_t>(src)];
    for (int i = 0; i < n; ++i) {
      const int jmax = (i == 0) ? n - 2 : n - 1;
      for (int j = i + 2; j <= jmax; ++j) {
        const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(i + 1)];
        const int c = order[static_cast<std::size_t>(j)],
                  d = order[static_cast<std::size_t>(j == n - 1 ? 0 : j + 1)];
        const double delta =
            inst.dist(a, b) + inst.dist(c, d) - inst.dist(a, c) - inst.dist(b, d);
        if (!(delta > 0.0)) continue;
        scratch = order;
        std::reverse(scratch.begin() + i + 1, scratch.begin() + j + 1);
        if (scratch[1] > scratch[static_cast<std::size_t>(n - 1)])
          std::reverse(scratch.begin() + 1, scratch.end());
        const std::int32_t tgt = index.at(encode(scratch));
        if (longest[static_cast<std::size_t>(tgt)] == longest[static_cast<std::size_t>(src)] + 1 &&
            pred[static_cast<std::size_t>(tgt)] < 0)
          pred[static_cast<std::size_t>(tgt)] = src;
      }
    }
  }

  LongestPathResult res;
  res.steps = longest[static_cast<std::size_t>(sink)];
  std::vector<std::int32_t> chain;
  for (std::int32_t v = sink; v >= 0; v = pred[static_cast<std::size_t>(v)]) {
    chain.push_back(v);
    if (pred[static_cast<std::size_t>(v)] < 0) break;
  }
  std::reverse(chain.begin(), chain.end());
  for (std::int32_t v : chain) res.path.emplace_back(tours[static_cast<std::size_t>(v)]);
  return res;
}

// ---------------------------------------------------------------------------
// Geometry diagnostics
// ---------------------------------------------------------------------------

namespace exact {

// Sign of the orientation determinant of (a, b, c), exact for double inputs:
// a floating-point filter falls back to rational arithmetic when the sign is
// in doubt.
inline int orient_sign(const Point& a, const Point& b, const Point& c) {
  const double detleft = (b[0] - a[0]) * (c[1] - a[1]);
  const double detright = (b[1] - a[1]) * (c[0] - a[0]);
  const double det = detleft - detright;
  const double magnitude = std::abs(detleft) + std::abs(detright);
  constexpr double kFilter = 4.0e-16;  // > (3 + 16 eps) eps
  if (std::abs(det) > kFilter * magnitude) return det > 0.0 ? 1 : -1;

  using Rational = boost::multiprecision::cpp_rational;
  const Rational ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
  const Rational exact_det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  if (exact_det > 0) return 1;
  if (exact_det < 0) return -1;
  return 0;
}

// Proper crossing of open segments: strictly opposite orientations on both
// sides. Degenerate (collinear) configurations do not count; an
// infinitesimal perturbation removes them.
inline bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orient_sign(p1, p2, q1);
  const int o2 = orient_sign(p1, p2, q2);
  const int o3 = orient_sign(q1, q2, p1);
  const int o4 = orient_sign(q1, q2, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace exact

// Number of tour-edge pairs that properly intersect. Pairs sharing a vertex
// are excluded. Planar instances only.
inline int crossing_count(const Tour& t, const Instance& inst) {
  if (inst.dim() != 2) throw std::invalid_argument("crossing_count: requires d = 2");
  const int n = t.size();
  int count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j <= ((i == 0) ? n - 2 : n - 1); ++j) {
      const int a = t.at(i), b = t.at(i + 1);
      const int c = t.at(j), d = t.at(j == n - 1 ? 0 : j + 1);
      if (exact::segments_cross(inst.points[static_cast<std::size_t>(a)],
                                inst.points[static_cast<std::size_t>(b)],
                                inst.points[static_cast<std::size_t>(c)],
                                inst.points[static_cast<std::size_t>(d)]))
        ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Smallest improvements
// ---------------------------------------------------------------------------

enum class MinImprovementScope { Single, LinkedPairs01 };

constexpr int kMinImprovementMaxN = 200;

// Single: minimum positive improvement over all vertex quadruples
// (v1,v2,v3,v4), Delta = d(v1,v2) + d(v3,v4) - d(v1,v3) - d(v2,v4); the value
// depends only on the four points, so no tour enumeration is needed.
// LinkedPairs01: minimum of delta1 + delta2 over the disjoint type-0/1 pairs
// of a trace. Returns +infinity when the improving set is empty.
inline double min_improvement(const Instance& inst, MinImprovementScope scope,
                              const RunTrace* trace = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  if (scope == MinImprovementScope::Single) {
    const int n = inst.n();
    if (n > kMinImprovementMaxN)
      throw CapacityError("min_improvement: n > " + std::to_string(kMinImprovementMaxN));
    const detail::DistanceCache dist(inst);
    for (int v1 = 0; v1 < n; ++v1)
      for (int v2 = v1 + 1; v2 < n; ++v2)  // v1 = min of the quadruple's orbit
        for (int v3 = v1 + 1; v3 < n; ++v3) {
          if (v3 == v2) continue;
          for (int v4 = v1 + 1; v4 < n; ++v4) {
            if (v4 == v2 || v4 == v3) continue;
            const double delta = dist(v1, v2) + dist(v3, v4) - dist(v1, v3) - dist(v2, v4);
            if (delta > 0.0 && delta < best) best = delta;
          }
        }
    return best;
  }
  if (!trace) throw std::invalid_argument("min_improvement: LinkedPairs01 needs a trace");
  const PairReport rep = linked_pair_decomposition(*trace, true);
  for (const auto& [i, j] : rep.disjoint_pairs_type01) {
    const double sum = trace->steps[static_cast<std::size_t>(i)].delta +
                       trace->steps[static_cast<std::size_t>(j)].delta;
    best = std::min(best, sum);
  }
  return best;
}

}  // namespace tsplab
