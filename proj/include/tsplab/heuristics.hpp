#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tsplab/core.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

enum class InsertionPolicy { Nearest, Cheapest, RandomOrder };

inline const char* insertion_label(InsertionPolicy p) {
  switch (p) {
    case InsertionPolicy::Nearest: return "nearest";
    case InsertionPolicy::Cheapest: return "cheapest";
    case InsertionPolicy::RandomOrder: return "random_order";
  }
  return "?";
}

// Insertion construction: starting from the two mutually closest vertices,
// each selected vertex is inserted at the tour position minimizing
// dist(x,v) + dist(v,y) - dist(x,y). Nearest picks the vertex closest to the
// current subtour, cheapest the vertex with the cheapest insertion, and
// random_order draws the insertion order from the seed. All ties break to
// the lowest vertex index (positions: earliest), so every policy is
// deterministic.
inline Tour insertion_tour(const Instance& inst, InsertionPolicy policy, std::uint64_t seed = 0) {
  const int n = inst.n();
  std::vector<char> used(static_cast<std::size_t>(n), 0);

  int s1 = 0, s2 = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (inst.dist(i, j) < best) {
        best = inst.dist(i, j);
        s1 = i;
        s2 = j;
      }
  std::vector<int> sub{s1, s2};
  used[static_cast<std::size_t>(s1)] = used[static_cast<std::size_t>(s2)] = 1;

  std::vector<int> queue;  // RandomOrder only
  if (policy == InsertionPolicy::RandomOrder) {
    for (int v = 0; v < n; ++v)
      if (!used[static_cast<std::size_t>(v)]) queue.push_back(v);
    Rng rng(stream_seed(seed, stream_tag::kTour, 0));
    rng.shuffle(queue);
  }

  const auto insertion_cost = [&](int v, int* best_pos) -> double {
    const int m = static_cast<int>(sub.size());
    double c = std::numeric_limits<double>::infinity();
    int pos = 0;
    for (int e = 0; e < m; ++e) {
      const int x = sub[static_cast<std::size_t>(e)];
      const int y = sub[static_cast<std::size_t>((e + 1) % m)];
      const double cost = inst.dist(x, v) + inst.dist(v, y) - inst.dist(x, y);
      if (cost < c) {
        c = cost;
        pos = e;
      }
    }
    if (best_pos) *best_pos = pos;
    return c;
  };

  for (std::size_t step = 2; step < static_cast<std::size_t>(n); ++step) {
    int v = -1;
    switch (policy) {
      case InsertionPolicy::Nearest: {
        double bestd = std::numeric_limits<double>::infinity();
        for (int cand = 0; cand < n; ++cand) {
          if (used[static_cast<std::size_t>(cand)]) continue;
          double d = std::numeric_limits<double>::infinity();
          for (int x : sub) d = std::min(d, inst.dist(x, cand));
          if (d < bestd) {
            bestd = d;
            v = cand;
          }
        }
        break;
      }
      case InsertionPolicy::Cheapest: {
        double bestc = std::numeric_limits<double>::infinity();
        for (int cand = 0; cand < n; ++cand) {
          if (used[static_cast<std::size_t>(cand)]) continue;
          const double c = insertion_cost(cand, nullptr);
          if (c < bestc) {
            bestc = c;
            v = cand;
          }
        }
        break;
      }
      case InsertionPolicy::RandomOrder:
        v = queue[step - 2];
        break;
    }
    int pos = 0;
    insertion_cost(v, &pos);
    sub.insert(sub.begin() + pos + 1, v);
    used[static_cast<std::size_t>(v)] = 1;
  }
  return Tour(std::move(sub));
}

// Seeded uniform random cyclic tour.
inline Tour random_tour(const Instance& inst, std::uint64_t seed) {
  const int n = inst.n();
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(stream_seed(seed, stream_tag::kTour, 1));
  rng.shuffle(order);
  return Tour(std::move(order));
}

}  // namespace tsplab
