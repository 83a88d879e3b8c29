#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsplab/core.hpp"

namespace tsplab {

// Undirected edge between two vertex ids, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  Edge() = default;
  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {
    if (a == b) throw std::invalid_argument("Edge: loop");
  }
  friend bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }
  friend bool operator!=(const Edge& a, const Edge& b) { return !(a == b); }
  friend bool operator<(const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  }
};

// A 2-change, identified by the two tour edges it removes. The two edges
// added in exchange are implied: they are the unique reconnection that keeps
// the tour a single cycle.
struct TwoChange {
  Edge e1, e2;
  TwoChange() = default;
  TwoChange(Edge a, Edge b) : e1(a), e2(b) {
    if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v)
      throw std::invalid_argument("TwoChange: edges share a vertex");
  }
  friend bool operator==(const TwoChange& a, const TwoChange& b) {
    return (a.e1 == b.e1 && a.e2 == b.e2) || (a.e1 == b.e2 && a.e2 == b.e1);
  }
};

// Cyclic permutation of 0..n-1 in canonical form: vertex 0 first, and of the
// two neighbors of 0 the smaller one second. Any rotation or reflection of
// the same undirected cycle canonicalizes to the identical vector, so tours
// compare bit-exactly.
class Tour {
 public:
  Tour() = default;  // empty placeholder; any real tour has n >= 3

  explicit Tour(std::vector<int> order) : order_(std::move(order)) {
    validate();
    canonicalize();
  }

  static Tour identity(int n) {
    std::vector<int> o(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) o[static_cast<std::size_t>(i)] = i;
    return Tour(std::move(o));
  }

  const std::vector<int>& order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }
  int at(int pos) const { return order_[static_cast<std::size_t>(pos)]; }

  friend bool operator==(const Tour& a, const Tour& b) { return a.order_ == b.order_; }
  friend bool operator!=(const Tour& a, const Tour& b) { return !(a == b); }

 private:
  void validate() const {
    const int n = static_cast<int>(order_.size());
    if (n < 3) throw std::invalid_argument("Tour: need at least 3 vertices");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int x : order_) {
      if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)])
        throw std::invalid_argument("Tour: order is not a permutation of 0..n-1");
      seen[static_cast<std::size_t>(x)] = 1;
    }
  }

  void canonicalize() {
    const std::size_t n = order_.size();
    const std::size_t z = static_cast<std::size_t>(
        std::find(order_.begin(), order_.end(), 0) - order_.begin());
    std::rotate(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(z), order_.end());
    if (order_[1] > order_[n - 1]) std::reverse(order_.begin() + 1, order_.end());
  }

  std::vector<int> order_;
};

inline double tour_length(const Tour& t, const Instance& inst) {
  if (t.size() != inst.n()) throw std::invalid_argument("tour_length: size mismatch");
  const int n = t.size();
  double len = 0.0;
  for (int i = 0; i < n; ++i) len += inst.dist(t.at(i), t.at(i == n - 1 ? 0 : i + 1));
  return len;
}

namespace detail {

// Edge index e such that {order[e], order[e+1 mod n]} equals the given edge,
// or -1. A simple cycle contains each undirected edge at most once.
inline int find_edge_pos(const std::vector<int>& order, const Edge& e) {
  const int n = static_cast<int>(order.size());
  for (int i = 0; i < n; ++i) {
    const int a = order[static_cast<std::size_t>(i)];
    const int b = order[static_cast<std::size_t>(i == n - 1 ? 0 : i + 1)];
    if ((a == e.u && b == e.v) || (a == e.v && b == e.u)) return i;
  }
  return -1;
}

struct LocatedChange {
  int i, j;            // edge positions, i < j, non-adjacent
  int a, b, c, d;      // order[i], order[i+1], order[j], order[j+1 mod n]
};

inline LocatedChange locate(const std::vector<int>& order, const TwoChange& c) {
  const int n = static_cast<int>(order.size());
  int i = find_edge_pos(order, c.e1);
  int j = find_edge_pos(order, c.e2);
  if (i < 0 || j < 0) throw std::invalid_argument("two-change: removed edge not in tour");
  if (i > j) std::swap(i, j);
  if (j == i + 1 || (i == 0 && j == n - 1))
    throw std::invalid_argument("two-change: removed edges are adjacent in tour");
  return {i, j, order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)],
          order[static_cast<std::size_t>(j)],
          order[static_cast<std::size_t>(j == n - 1 ? 0 : j + 1)]};
}

inline double delta_of(const LocatedChange& lc, const Instance& inst) {
  return inst.dist(lc.a, lc.b) + inst.dist(lc.c, lc.d) - inst.dist(lc.a, lc.c) -
         inst.dist(lc.b, lc.d);
}

}  // namespace detail

// Improvement of a 2-change: removed-edge lengths minus added-edge lengths.
// Positive means the step strictly shortens the tour.
inline double two_change_delta(const Tour& t, const TwoChange& c, const Instance& inst) {
  return detail::delta_of(detail::locate(t.order(), c), inst);
}

// The two edges a change inserts when applied to this tour.
inline std::pair<Edge, Edge> added_edges(const Tour& t, const TwoChange& c) {
  const detail::LocatedChange lc = detail::locate(t.order(), c);
  return {Edge(lc.a, lc.c), Edge(lc.b, lc.d)};
}

// Applies the change: the segment strictly between the first removed edge's
// head and the second removed edge's tail is reversed. The result differs
// from t in exactly the two removed edges and is returned canonicalized.
inline Tour apply_two_change(const Tour& t, const TwoChange& c) {
  std::vector<int> order = t.order();
  const detail::LocatedChange lc = detail::locate(order, c);
  std::reverse(order.begin() + lc.i + 1, order.begin() + lc.j + 1);
  return Tour(std::move(order));
}

}  // namespace tsplab
