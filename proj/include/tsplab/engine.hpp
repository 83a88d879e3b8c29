#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tsplab/core.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

enum class Pivot { FirstImprovement, BestImprovement, RandomImprovement, Scripted };

inline const char* pivot_label(Pivot p) {
  switch (p) {
    case Pivot::FirstImprovement: return "first";
    case Pivot::BestImprovement: return "best";
    case Pivot::RandomImprovement: return "random";
    case Pivot::Scripted: return "scripted";
  }
  return "?";
}

struct PivotRule {
  Pivot kind = Pivot::FirstImprovement;
  std::uint64_t seed = 0;                       // RandomImprovement
  const std::vector<TwoChange>* script = nullptr;  // Scripted

  static PivotRule first() { return {Pivot::FirstImprovement, 0, nullptr}; }
  static PivotRule best() { return {Pivot::BestImprovement, 0, nullptr}; }
  static PivotRule random(std::uint64_t seed) { return {Pivot::RandomImprovement, seed, nullptr}; }
  static PivotRule scripted(const std::vector<TwoChange>& moves) {
    return {Pivot::Scripted, 0, &moves};
  }
};

struct StepRecord {
  std::int64_t index = 0;
  TwoChange change;        // removed edges
  Edge added1, added2;     // edges inserted by this step
  double delta = 0.0;      // > 0
  double length_after = 0.0;
};

enum class RunTermination { LocalOpt, StepLimit, ScriptEnd };

inline const char* termination_label(RunTermination t) {
  switch (t) {
    case RunTermination::LocalOpt: return "LOCAL_OPT";
    case RunTermination::StepLimit: return "STEP_LIMIT";
    case RunTermination::ScriptEnd: return "SCRIPT_END";
  }
  return "?";
}

struct RunTrace {
  const Instance* instance = nullptr;
  Tour initial_tour;
  Tour final_tour;
  double initial_length = 0.0;
  std::vector<StepRecord> steps;
  RunTermination terminated = RunTermination::LocalOpt;

  double final_length() const {
    return steps.empty() ? initial_length : steps.back().length_after;
  }
};

constexpr std::int64_t kNoStepLimit = std::numeric_limits<std::int32_t>::max();

// All strictly improving 2-changes of a tour with delta > eps, enumerated
// over the n(n-3)/2 non-adjacent edge pairs in lexicographic position order.
inline std::vector<std::pair<TwoChange, double>> improving_moves(const Tour& t,
                                                                 const Instance& inst,
                                                                 double eps = 0.0) {
  const int n = t.size();
  std::vector<std::pair<TwoChange, double>> out;
  for (int i = 0; i < n; ++i) {
    const int jmax = (i == 0) ? n - 2 : n - 1;
    for (int j = i + 2; j <= jmax; ++j) {
      const int a = t.at(i), b = t.at(i + 1);
      const int c = t.at(j), d = t.at(j == n - 1 ? 0 : j + 1);
      const double delta =
          inst.dist(a, b) + inst.dist(c, d) - inst.dist(a, c) - inst.dist(b, d);
      if (delta > eps) out.emplace_back(TwoChange(Edge(a, b), Edge(c, d)), delta);
    }
  }
  return out;
}

inline bool is_local_optimum(const Tour& t, const Instance& inst) {
  return improving_moves(t, inst, 0.0).empty();
}

namespace detail {

// Pairwise distances are cached for instances up to this size (32 MB of
// doubles at the limit); beyond it distances are recomputed on the fly.
constexpr int kDistanceCacheLimit = 2048;

class DistanceCache {
 public:
  explicit DistanceCache(const Instance& inst) : inst_(&inst), n_(inst.n()) {
    if (n_ <= kDistanceCacheLimit) {
      matrix_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          matrix_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(j)] = inst.dist(i, j);
    }
  }

  double operator()(int i, int j) const {
    if (!matrix_.empty())
      return matrix_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                     static_cast<std::size_t>(j)];
    return inst_->dist(i, j);
  }

 private:
  const Instance* inst_;
  int n_;
  std::vector<double> matrix_;
};

// Mutable cyclic order plus vertex->position index, kept canonical at all
// times: vertex 0 stays at position 0 (a 2-change never reverses across it),
// so after each reversal at most one reflection restores canonical form.
// The engine's scan order therefore coincides with the position order of the
// canonicalized Tour.
struct WorkTour {
  std::vector<int> order;
  std::vector<int> pos;

  explicit WorkTour(const Tour& t) : order(t.order()), pos(order.size()) {
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
      pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
  }

  int n() const { return static_cast<int>(order.size()); }

  void reverse_segment(int i, int j) {  // reverses order[i..j], i <= j
    while (i < j) {
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
      pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
      pos[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] = j;
      ++i;
      --j;
    }
  }

  // Applies the 2-change removing edges i and j; returns true when the
  // result had to be reflected to stay canonical.
  bool apply(int i, int j) {
    reverse_segment(i + 1, j);
    const std::size_t last = order.size() - 1;
    if (order[1] > order[last]) {
      reverse_segment(1, static_cast<int>(last));
      return true;
    }
    return false;
  }
};

}  // namespace detail

// Runs 2-Opt under the given pivot rule until no improving move exists, the
// step limit is reached, or the script is exhausted. Every recorded delta is
// strictly positive; lengths along the trace are strictly decreasing.
//
// FirstImprovement applies, at every step, the first entry of
// improving_moves on the current canonicalized tour (lexicographic over
// edge-index pairs, restarting from the top after each applied move). The
// scan skips pairs whose edges were untouched by the previous reversal;
// they are provably still non-improving, so the chosen move is identical to
// the one a full rescan would pick.
inline RunTrace run(const Instance& inst, const Tour& start, const PivotRule& rule,
                    std::int64_t step_limit = kNoStepLimit) {
  if (step_limit < 0) throw std::invalid_argument("run: negative step limit");
  if (rule.kind == Pivot::Scripted && rule.script == nullptr)
    throw std::invalid_argument("run: scripted rule without script");

  const detail::DistanceCache dist(inst);
  detail::WorkTour work(start);
  const int n = work.n();

  RunTrace trace{&inst, start, start, tour_length(start, inst), {}, RunTermination::LocalOpt};

  Rng pivot_rng(stream_seed(rule.seed, stream_tag::kPivot, 0));
  double length = trace.initial_length;
  std::size_t script_next = 0;
  int stable_below = 0;  // FirstImprovement: pairs (a,b) with b < stable_below are non-improving

  const auto eval = [&](int i, int j) -> double {
    const int a = work.order[static_cast<std::size_t>(i)];
    const int b = work.order[static_cast<std::size_t>(i + 1)];
    const int c = work.order[static_cast<std::size_t>(j)];
    const int d = work.order[static_cast<std::size_t>(j == n - 1 ? 0 : j + 1)];
    return dist(a, b) + dist(c, d) - dist(a, c) - dist(b, d);
  };

  while (static_cast<std::int64_t>(trace.steps.size()) < step_limit) {
    int mi = -1, mj = -1;
    double mdelta = 0.0;

    switch (rule.kind) {
      case Pivot::FirstImprovement: {
        for (int i = 0; i < n && mi < 0; ++i) {
          const int jmax = (i == 0) ? n - 2 : n - 1;
          int j = std::max(i + 2, stable_below);
          for (; j <= jmax; ++j) {
            const double delta = eval(i, j);
            if (delta > 0.0) {
              mi = i;
              mj = j;
              mdelta = delta;
              break;
            }
          }
        }
        break;
      }
      case Pivot::BestImprovement:
      case Pivot::RandomImprovement: {
        std::vector<std::pair<int, int>> improving;
        for (int i = 0; i < n; ++i) {
          const int jmax = (i == 0) ? n - 2 : n - 1;
          for (int j = i + 2; j <= jmax; ++j) {
            const double delta = eval(i, j);
            if (delta > 0.0) {
              if (rule.kind == Pivot::BestImprovement) {
                if (delta > mdelta) {
                  mi = i;
                  mj = j;
                  mdelta = delta;
                }
              } else {
                improving.emplace_back(i, j);
              }
            }
          }
        }
        if (rule.kind == Pivot::RandomImprovement && !improving.empty()) {
          const auto [i, j] = improving[pivot_rng.below(improving.size())];
          mi = i;
          mj = j;
          mdelta = eval(i, j);
        }
        break;
      }
      case Pivot::Scripted: {
        if (script_next >= rule.script->size()) {
          trace.terminated = RunTermination::ScriptEnd;
          trace.final_tour = Tour(work.order);
          return trace;
        }
        const std::int64_t idx = static_cast<std::int64_t>(script_next);
        const TwoChange& mv = (*rule.script)[script_next++];
        const auto edge_pos = [&](const Edge& e) -> int {
          const int pu = work.pos[static_cast<std::size_t>(e.u)];
          const int pv = work.pos[static_cast<std::size_t>(e.v)];
          if ((pu + 1) % n == pv) return pu;
          if ((pv + 1) % n == pu) return pv;
          return -1;
        };
        if (mv.e1.u >= n || mv.e1.v >= n || mv.e2.u >= n || mv.e2.v >= n)
          throw ScriptViolation(idx, "vertex id out of range");
        int pi = edge_pos(mv.e1);
        int pj = edge_pos(mv.e2);
        if (pi < 0 || pj < 0) throw ScriptViolation(idx, "removed edge not in tour");
        if (pi > pj) std::swap(pi, pj);
        if (pj == pi + 1 || (pi == 0 && pj == n - 1))
          throw ScriptViolation(idx, "removed edges adjacent in tour");
        const double delta = eval(pi, pj);
        if (!(delta > 0.0)) throw ScriptViolation(idx, "prescribed move is not improving");
        mi = pi;
        mj = pj;
        mdelta = delta;
        break;
      }
    }

    if (mi < 0) {
      trace.terminated = RunTermination::LocalOpt;
      trace.final_tour = Tour(work.order);
      return trace;
    }

    const int a = work.order[static_cast<std::size_t>(mi)];
    const int b = work.order[static_cast<std::size_t>(mi + 1)];
    const int c = work.order[static_cast<std::size_t>(mj)];
    const int d = work.order[static_cast<std::size_t>(mj == n - 1 ? 0 : mj + 1)];
    const bool reflected = work.apply(mi, mj);
    length -= mdelta;
    stable_below = reflected ? 0 : mi;

    StepRecord rec;
    rec.index = static_cast<std::int64_t>(trace.steps.size());
    rec.change = TwoChange(Edge(a, b), Edge(c, d));
    rec.added1 = Edge(a, c);
    rec.added2 = Edge(b, d);
    rec.delta = mdelta;
    rec.length_after = length;
    trace.steps.push_back(rec);
  }

  trace.terminated = RunTermination::StepLimit;
  trace.final_tour = Tour(work.order);
  return trace;
}

// Default step budget for phi-perturbed inputs, scaled as n^4 * phi.
inline std::int64_t suggested_step_limit(int n, double phi) {
  const double v = 10.0 * std::pow(static_cast<double>(n), 4) * std::max(phi, 1.0);
  if (v >= static_cast<double>(kNoStepLimit)) return kNoStepLimit;
  return static_cast<std::int64_t>(v);
}

}  // namespace tsplab
