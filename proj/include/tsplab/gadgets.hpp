#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsplab/core.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

// Families of two-dimensional Lp instances whose 2-Opt state graphs contain
// exponentially long improving paths. An instance is a chain of gadgets,
// each made of two 4-point blocks. A block is visited either A B C D (short
// state) or A C B D (long state); flipping long -> short is a single
// improving 2-change, and a block can flip while resetting the two blocks of
// the neighboring gadget from short back to long via a fixed sequence of
// seven 2-changes. Chaining these resets doubles the work per gadget level.

enum class GadgetKind { Euclidean, Manhattan, Lp };

inline const char* gadget_kind_label(GadgetKind k) {
  switch (k) {
    case GadgetKind::Euclidean: return "euclidean";
    case GadgetKind::Manhattan: return "manhattan";
    case GadgetKind::Lp: return "lp";
  }
  return "?";
}

enum class BlockState { Short, Long, Intermediate };

// Vertex ids of one block's four points.
struct BlockRef {
  int a = 0, b = 0, c = 0, d = 0;
};

struct GadgetScript {
  std::vector<TwoChange> moves;
  std::int64_t expected_count = 0;
};

struct VerificationReport {
  std::int64_t steps_checked = 0;
  double min_margin = 0.0;
  double max_margin = 0.0;
  bool ok = false;
  std::optional<std::int64_t> first_failure;
};

struct NamedMargin {
  std::string name;
  double value = 0.0;
};

// A built family: the instance, the initial tour, the certified move script,
// and the block structure (in tour order) for state inspection.
struct GadgetInstance {
  Instance instance;
  Tour initial_tour;
  GadgetScript script;
  GadgetKind kind = GadgetKind::Euclidean;
  std::vector<BlockRef> blocks;          // in tour order
  std::vector<char> initial_long;        // per block, 1 = starts in long state
};

namespace gadget_detail {

struct LabeledEdge {
  int block1, corner1, block2, corner2;
};

struct ResetMove {
  LabeledEdge removed1, removed2;
  LabeledEdge added1, added2;
};

// Seven-step reset in block-relative labels (block 0 = X flips long->short,
// blocks 1, 2 = Y, Z are reset short->long; corners 0..3 = A..D).
inline const std::array<ResetMove, 7>& reset_moves() {
  static const std::array<ResetMove, 7> table = {{
      {{0, 0, 0, 2}, {2, 2, 2, 3}, {0, 0, 2, 2}, {0, 2, 2, 3}},
      {{2, 1, 2, 0}, {0, 3, 0, 1}, {2, 1, 0, 3}, {2, 0, 0, 1}},
      {{2, 1, 0, 3}, {1, 2, 1, 3}, {2, 1, 1, 2}, {0, 3, 1, 3}},
      {{1, 1, 1, 0}, {0, 2, 2, 3}, {1, 1, 0, 2}, {1, 0, 2, 3}},
      {{0, 0, 2, 2}, {0, 1, 2, 0}, {0, 0, 0, 1}, {2, 2, 2, 0}},
      {{1, 2, 2, 1}, {1, 0, 2, 3}, {1, 2, 1, 0}, {2, 1, 2, 3}},
      {{0, 2, 1, 1}, {0, 3, 1, 3}, {0, 2, 0, 3}, {1, 1, 1, 3}},
  }};
  return table;
}

inline int corner_id(const BlockRef& b, int corner) {
  switch (corner) {
    case 0: return b.a;
    case 1: return b.b;
    case 2: return b.c;
    default: return b.d;
  }
}

inline Edge labeled(const LabeledEdge& e, const BlockRef& x, const BlockRef& y,
                    const BlockRef& z) {
  const BlockRef* blocks[3] = {&x, &y, &z};
  return Edge(corner_id(*blocks[e.block1], e.corner1), corner_id(*blocks[e.block2], e.corner2));
}

inline void push_reset(std::vector<TwoChange>& moves, const BlockRef& x, const BlockRef& y,
                       const BlockRef& z) {
  for (const ResetMove& m : reset_moves())
    moves.emplace_back(labeled(m.removed1, x, y, z), labeled(m.removed2, x, y, z));
}

// Single 2-change flipping one block from long (A C B D) to short (A B C D).
inline void push_flip(std::vector<TwoChange>& moves, const BlockRef& b) {
  moves.emplace_back(Edge(b.a, b.c), Edge(b.b, b.d));
}

inline void apply_jitter(std::vector<Point>& pts, std::uint64_t jitter_seed) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Rng rng(stream_seed(jitter_seed, stream_tag::kJitter, static_cast<std::uint64_t>(i)));
    for (double& c : pts[i]) c += rng.uniform(-1e-7, 1e-7);
  }
}

inline Tour initial_tour_from_blocks(const std::vector<BlockRef>& blocks,
                                     const std::vector<char>& is_long) {
  std::vector<int> order;
  order.reserve(blocks.size() * 4);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const BlockRef& b = blocks[i];
    if (is_long[i]) {
      order.push_back(b.a);
      order.push_back(b.c);
      order.push_back(b.b);
      order.push_back(b.d);
    } else {
      order.push_back(b.a);
      order.push_back(b.b);
      order.push_back(b.c);
      order.push_back(b.d);
    }
  }
  return Tour(std::move(order));
}

}  // namespace gadget_detail

// Euclidean family with g gadgets (8g points). The base gadget uses
// A=(0,0), B=(1,0), C=(-0.1,1.4), D=(-1.1,4.8) for both blocks; each earlier
// gadget is the image of its successor under (x,y) -> 3*(y,-x) + (-1.2,0.1)
// (rotate by 3 pi / 2, scale by 3, translate). The initial tour has gadget 0
// in (L,L) and all others in (S,S); the script realizes the full improving
// path of 2^(g+3) - 14 moves.
inline GadgetInstance build_euclidean_family(int gadgets, bool jitter = false,
                                             std::uint64_t jitter_seed = 0) {
  if (gadgets < 1) throw std::invalid_argument("build_euclidean_family: need g >= 1");
  const int g = gadgets;

  std::array<Point, 4> base = {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{-0.1, 1.4},
                               Point{-1.1, 4.8}};
  // level k = number of map applications; gadget i has level g-1-i.
  std::vector<std::array<Point, 4>> level(static_cast<std::size_t>(g));
  level[0] = base;
  for (int k = 1; k < g; ++k)
    for (int c = 0; c < 4; ++c) {
      const Point& p = level[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(c)];
      level[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] =
          Point{3.0 * p[1] - 1.2, -3.0 * p[0] + 0.1};
    }

  GadgetInstance out;
  out.kind = GadgetKind::Euclidean;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(8 * g));
  std::vector<std::vector<BlockRef>> block(static_cast<std::size_t>(g),
                                           std::vector<BlockRef>(2));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < 2; ++j) {
      BlockRef b;
      b.a = static_cast<int>(pts.size());
      b.b = b.a + 1;
      b.c = b.a + 2;
      b.d = b.a + 3;
      const auto& gp = level[static_cast<std::size_t>(g - 1 - i)];
      pts.push_back(gp[0]);
      pts.push_back(gp[1]);
      pts.push_back(gp[2]);
      pts.push_back(gp[3]);
      block[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b;
      out.blocks.push_back(b);
      out.initial_long.push_back(i == 0 ? 1 : 0);
    }
  if (jitter) gadget_detail::apply_jitter(pts, jitter_seed);

  out.instance = Instance(std::move(pts), Metric::euclidean(),
                          "euclidean-gadgets-" + std::to_string(g));
  out.initial_tour = gadget_detail::initial_tour_from_blocks(out.blocks, out.initial_long);

  // Gadget i flips block 1 (resetting gadget i+1), recurses, flips block 2
  // (resetting gadget i+1 again), recurses; the last gadget flips its blocks
  // by single 2-changes.
  std::vector<TwoChange>& moves = out.script.moves;
  const auto seq = [&](auto&& self, int i) -> void {
    if (i == g - 1) {
      gadget_detail::push_flip(moves, block[static_cast<std::size_t>(i)][0]);
      gadget_detail::push_flip(moves, block[static_cast<std::size_t>(i)][1]);
      return;
    }
    gadget_detail::push_reset(moves, block[static_cast<std::size_t>(i)][0],
                              block[static_cast<std::size_t>(i + 1)][0],
                              block[static_cast<std::size_t>(i + 1)][1]);
    self(self, i + 1);
    gadget_detail::push_reset(moves, block[static_cast<std::size_t>(i)][1],
                              block[static_cast<std::size_t>(i + 1)][0],
                              block[static_cast<std::size_t>(i + 1)][1]);
    self(self, i + 1);
  };
  seq(seq, 0);
  out.script.expected_count = (std::int64_t{1} << (g + 3)) - 14;
  return out;
}

namespace gadget_detail {

struct PairCoords {
  std::array<Point, 4> reset;       // both reset blocks share coordinates
  std::array<Point, 4> prop_block1;
  std::array<Point, 4> prop_block2;
};

inline PairCoords manhattan_base() {
  PairCoords c;
  c.reset = {Point{0.0, 1.0}, Point{0.0, 0.0}, Point{-0.7, 0.1}, Point{-1.2, 0.08}};
  c.prop_block1 = {Point{-2.0, 1.8}, Point{-3.3, 2.8}, Point{-1.3, 1.4}, Point{1.5, 0.9}};
  c.prop_block2 = {Point{-0.7, 1.6}, Point{-1.5, 1.2}, Point{1.9, -1.5}, Point{-0.8, -1.1}};
  return c;
}

inline Point manhattan_map(const Point& p) { return Point{7.7 * p[0] + 1.93, 7.7 * p[1] + 0.3}; }

inline PairCoords lp_base() {
  PairCoords c;
  c.reset = {Point{0.0, 1.0}, Point{0.0, 0.0}, Point{3.5, 3.7}, Point{7.8, -3.2}};
  c.prop_block1 = {Point{-2.5, -2.4}, Point{-4.7, -7.3}, Point{-8.6, -4.6}, Point{3.7, 9.8}};
  c.prop_block2 = {Point{3.2, 2.0}, Point{7.2, 7.2}, Point{-6.5, -1.6}, Point{-1.5, -7.1}};
  return c;
}

// Rotation by pi, scale by 7.8, translate by (7.2, 5.3).
inline Point lp_map(const Point& p) { return Point{-7.8 * p[0] + 7.2, -7.8 * p[1] + 5.3}; }

template <typename MapFn>
inline GadgetInstance build_chain_family(int pairs, const PairCoords& base, MapFn&& map,
                                         GadgetKind kind, Metric metric, bool jitter,
                                         std::uint64_t jitter_seed) {
  if (pairs < 1) throw std::invalid_argument("gadget family: need n >= 1");
  const int n = pairs;

  std::vector<PairCoords> level(static_cast<std::size_t>(n));
  level[0] = base;
  for (int k = 1; k < n; ++k) {
    const PairCoords& prev = level[static_cast<std::size_t>(k - 1)];
    PairCoords& cur = level[static_cast<std::size_t>(k)];
    for (int c = 0; c < 4; ++c) {
      cur.reset[static_cast<std::size_t>(c)] = map(prev.reset[static_cast<std::size_t>(c)]);
      cur.prop_block1[static_cast<std::size_t>(c)] =
          map(prev.prop_block1[static_cast<std::size_t>(c)]);
      cur.prop_block2[static_cast<std::size_t>(c)] =
          map(prev.prop_block2[static_cast<std::size_t>(c)]);
    }
  }

  GadgetInstance out;
  out.kind = kind;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(16 * n));
  // Blocks in tour order: P_i block1, P_i block2, R_i block1, R_i block2.
  std::vector<std::array<BlockRef, 4>> pair_blocks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const PairCoords& pc = level[static_cast<std::size_t>(n - 1 - i)];
    const std::array<const std::array<Point, 4>*, 4> coords = {&pc.prop_block1, &pc.prop_block2,
                                                               &pc.reset, &pc.reset};
    for (int b = 0; b < 4; ++b) {
      BlockRef ref;
      ref.a = static_cast<int>(pts.size());
      ref.b = ref.a + 1;
      ref.c = ref.a + 2;
      ref.d = ref.a + 3;
      for (int c = 0; c < 4; ++c) pts.push_back((*coords[static_cast<std::size_t>(b)])[static_cast<std::size_t>(c)]);
      pair_blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] = ref;
      out.blocks.push_back(ref);
      out.initial_long.push_back((i == 0 && b < 2) ? 1 : 0);  // only P_0 starts (L,L)
    }
  }
  if (jitter) apply_jitter(pts, jitter_seed);

  out.instance = Instance(std::move(pts), metric,
                          std::string(gadget_kind_label(kind)) + "-pairs-" + std::to_string(n));
  out.initial_tour = initial_tour_from_blocks(out.blocks, out.initial_long);

  // P_i in (L,L) flips block 1 singly, then block 2 resets R_i. R_i then
  // behaves like a Euclidean gadget toward P_{i+1}: each of its blocks flips
  // while resetting P_{i+1}, recursing twice; the last reset gadget flips
  // its two blocks by single 2-changes.
  std::vector<TwoChange>& moves = out.script.moves;
  const auto P = [&](int i, int j) -> const BlockRef& {
    return pair_blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };
  const auto R = [&](int i, int j) -> const BlockRef& {
    return pair_blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(2 + j)];
  };
  const auto propagate = [&](auto&& self, int i) -> void {
    push_flip(moves, P(i, 0));
    push_reset(moves, P(i, 1), R(i, 0), R(i, 1));
    if (i == n - 1) {
      push_flip(moves, R(i, 0));
      push_flip(moves, R(i, 1));
      return;
    }
    push_reset(moves, R(i, 0), P(i + 1, 0), P(i + 1, 1));
    self(self, i + 1);
    push_reset(moves, R(i, 1), P(i + 1, 0), P(i + 1, 1));
    self(self, i + 1);
  };
  propagate(propagate, 0);
  out.script.expected_count = (std::int64_t{1} << (n + 4)) - 22;
  return out;
}

}  // namespace gadget_detail

// Manhattan family with n propagation/reset gadget pairs (16n points);
// pair i is pair i+1 scaled by 7.7 and translated by (1.93, 0.3). The script
// realizes the improving path of 2^(n+4) - 22 moves.
inline GadgetInstance build_manhattan_family(int pairs, bool jitter = false,
                                             std::uint64_t jitter_seed = 0) {
  return gadget_detail::build_chain_family(pairs, gadget_detail::manhattan_base(),
                                           gadget_detail::manhattan_map, GadgetKind::Manhattan,
                                           Metric::manhattan(), jitter, jitter_seed);
}

// Lp family for p >= 3 or p = infinity; pair i is pair i+1 rotated by pi,
// scaled by 7.8 and translated by (7.2, 5.3). Same script shape as the
// Manhattan family.
inline GadgetInstance build_lp_family(int pairs, Metric metric, bool jitter = false,
                                      std::uint64_t jitter_seed = 0) {
  if (!metric.is_inf() && metric.p() < 3)
    throw std::invalid_argument("build_lp_family: p must be >= 3 or inf (dedicated families cover p = 1, 2)");
  return gadget_detail::build_chain_family(pairs, gadget_detail::lp_base(), gadget_detail::lp_map,
                                           GadgetKind::Lp, metric, jitter, jitter_seed);
}

// Replays the script through the engine's scripted pivot rule. ok iff every
// move applies, every delta is strictly positive, and the number of steps
// equals the family's closed-form count.
inline VerificationReport verify_script(const Instance& inst, const Tour& start,
                                        const GadgetScript& script) {
  VerificationReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.max_margin = -std::numeric_limits<double>::infinity();
  try {
    const RunTrace trace = run(inst, start, PivotRule::scripted(script.moves),
                               static_cast<std::int64_t>(script.moves.size()) + 1);
    rep.steps_checked = static_cast<std::int64_t>(trace.steps.size());
    for (const StepRecord& s : trace.steps) {
      rep.min_margin = std::min(rep.min_margin, s.delta);
      rep.max_margin = std::max(rep.max_margin, s.delta);
    }
    rep.ok = (rep.steps_checked == script.expected_count) && rep.min_margin > 0.0;
  } catch (const ScriptViolation& v) {
    rep.steps_checked = v.step();
    rep.ok = false;
    rep.first_failure = v.step();
  }
  if (rep.steps_checked == 0) {
    rep.min_margin = 0.0;
    rep.max_margin = 0.0;
    rep.ok = script.expected_count == 0;
  }
  return rep;
}

// Every improvement inequality of the family at its two scaling levels: the
// in-pair sequences at base scale and the cross-pair reset sequence between
// the once-scaled gadget and the base gadget. Values are the exact 2-change
// improvements, named by role and step.
inline std::vector<NamedMargin> inequality_margins(GadgetKind kind, Metric metric) {
  std::vector<NamedMargin> out;
  const auto seven = [&](const Instance& inst, const BlockRef& x, const BlockRef& y,
                         const BlockRef& z, const std::string& prefix) {
    for (std::size_t k = 0; k < gadget_detail::reset_moves().size(); ++k) {
      const auto& m = gadget_detail::reset_moves()[k];
      const Edge r1 = gadget_detail::labeled(m.removed1, x, y, z);
      const Edge r2 = gadget_detail::labeled(m.removed2, x, y, z);
      const Edge a1 = gadget_detail::labeled(m.added1, x, y, z);
      const Edge a2 = gadget_detail::labeled(m.added2, x, y, z);
      const double v = inst.dist(r1.u, r1.v) + inst.dist(r2.u, r2.v) - inst.dist(a1.u, a1.v) -
                       inst.dist(a2.u, a2.v);
      out.push_back({prefix + "_step" + std::to_string(k + 1), v});
    }
  };
  const auto flip_margin = [&](const Instance& inst, const BlockRef& b) {
    return inst.dist(b.a, b.c) + inst.dist(b.b, b.d) - inst.dist(b.a, b.b) -
           inst.dist(b.c, b.d);
  };

  if (kind == GadgetKind::Euclidean) {
    const GadgetInstance fam = build_euclidean_family(2);
    // gadget 0 = scaled, gadget 1 = base; both sequences share coordinates.
    seven(fam.instance, fam.blocks[0], fam.blocks[2], fam.blocks[3], "reset1");
    seven(fam.instance, fam.blocks[1], fam.blocks[2], fam.blocks[3], "reset2");
    return out;
  }

  const GadgetInstance fam = kind == GadgetKind::Manhattan
                                 ? build_manhattan_family(2)
                                 : build_lp_family(2, metric);
  // Blocks: [P0b1 P0b2 R0b1 R0b2 P1b1 P1b2 R1b1 R1b2]; pair 0 scaled, pair 1 base.
  const BlockRef& p1b1 = fam.blocks[4];
  const BlockRef& p1b2 = fam.blocks[5];
  const BlockRef& r1b1 = fam.blocks[6];
  const BlockRef& r1b2 = fam.blocks[7];
  const BlockRef& r0b2 = fam.blocks[3];
  out.push_back({"reset_block_short_state", flip_margin(fam.instance, r1b1)});
  out.push_back({"prop_block1_flip", flip_margin(fam.instance, p1b1)});
  seven(fam.instance, p1b2, r1b1, r1b2, "prop_to_reset");
  seven(fam.instance, r0b2, p1b1, p1b2, "reset_to_prop");
  return out;
}

// Classifies how one block's four points are currently visited: consecutive
// as A B C D (short), as A C B D (long), or neither (intermediate, during a
// reset).
inline BlockState block_state(const Tour& t, const BlockRef& b) {
  const int n = t.size();
  int pa = -1;
  for (int i = 0; i < n; ++i)
    if (t.at(i) == b.a) pa = i;
  if (pa < 0) return BlockState::Intermediate;
  const auto read = [&](int dir) {
    std::array<int, 4> w;
    for (int k = 0; k < 4; ++k) w[static_cast<std::size_t>(k)] = t.at(((pa + dir * k) % n + n) % n);
    return w;
  };
  for (int dir : {1, -1}) {
    const std::array<int, 4> w = read(dir);
    if (w[0] == b.a && w[1] == b.b && w[2] == b.c && w[3] == b.d) return BlockState::Short;
    if (w[0] == b.a && w[1] == b.c && w[2] == b.b && w[3] == b.d) return BlockState::Long;
  }
  return BlockState::Intermediate;
}

inline std::vector<BlockState> block_states(const Tour& t, const std::vector<BlockRef>& blocks) {
  std::vector<BlockState> out;
  out.reserve(blocks.size());
  for (const BlockRef& b : blocks) out.push_back(block_state(t, b));
  return out;
}

}  // namespace tsplab
