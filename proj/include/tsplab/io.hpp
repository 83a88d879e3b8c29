#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tsplab/core.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/gadgets.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

// Plain-text formats. Every file opens with a versioned comment line; floats
// are written with 17 significant digits so coordinates and margins survive
// round trips bit-exactly.

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace io_detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline bool is_comment(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t') continue;
    return c == '#';
  }
  return true;  // blank
}

struct LineReader {
  std::istream& in;
  int line_no = 0;
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!is_comment(line)) return true;
    }
    return false;
  }
};

inline double parse_double(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + s + "'");
  }
}

inline long parse_long(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
}

}  // namespace io_detail

// --- instance ---------------------------------------------------------------

inline void write_instance(std::ostream& out, const Instance& inst,
                           const std::map<std::string, std::string>& meta = {}) {
  out << "# tsplab instance v1\n";
  out << "name " << (inst.name.empty() ? "unnamed" : inst.name) << "\n";
  out << "n " << inst.n() << "\n";
  out << "d " << inst.dim() << "\n";
  out << "metric " << inst.metric.label() << "\n";
  for (const auto& [k, v] : meta) out << "meta " << k << " " << v << "\n";
  out << "points\n";
  for (const Point& p : inst.points) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << format_double(p[i]);
    out << "\n";
  }
}

inline Instance read_instance(std::istream& in) {
  io_detail::LineReader r{in};
  std::string line, name;
  int n = -1, d = -1;
  Metric metric = Metric::euclidean();
  bool saw_points = false;
  while (r.next(line)) {
    const auto tok = io_detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "points") {
      saw_points = true;
      break;
    }
    if (tok.size() < 2) throw ParseError(r.line_no, "malformed header line");
    if (tok[0] == "name") name = tok[1];
    else if (tok[0] == "n") n = static_cast<int>(io_detail::parse_long(tok[1], r.line_no));
    else if (tok[0] == "d") d = static_cast<int>(io_detail::parse_long(tok[1], r.line_no));
    else if (tok[0] == "metric") {
      try {
        metric = Metric::from_label(tok[1]);
      } catch (const std::exception&) {
        throw ParseError(r.line_no, "bad metric '" + tok[1] + "'");
      }
    }
    // "meta" lines are informational and skipped on read.
  }
  if (!saw_points) throw ParseError(r.line_no, "missing 'points' section");
  if (n < 3 || d < 2) throw ParseError(r.line_no, "missing or invalid n / d header");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(pts.size()) < n) {
    if (!r.next(line)) throw ParseError(r.line_no, "unexpected end of points section");
    const auto tok = io_detail::tokens(line);
    if (static_cast<int>(tok.size()) != d)
      throw ParseError(r.line_no, "expected " + std::to_string(d) + " coordinates");
    Point p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
      p[static_cast<std::size_t>(k)] = io_detail::parse_double(tok[static_cast<std::size_t>(k)], r.line_no);
    pts.push_back(std::move(p));
  }
  return Instance(std::move(pts), metric, name);
}

// --- tour -------------------------------------------------------------------

inline void write_tour(std::ostream& out, const Tour& t) {
  out << "# tsplab tour v1\n";
  out << "n " << t.size() << "\n";
  out << "order";
  for (int v : t.order()) out << " " << v;
  out << "\n";
}

inline Tour read_tour(std::istream& in) {
  io_detail::LineReader r{in};
  std::string line;
  int n = -1;
  while (r.next(line)) {
    auto tok = io_detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "n" && tok.size() == 2)
      n = static_cast<int>(io_detail::parse_long(tok[1], r.line_no));
    else if (tok[0] == "order") {
      if (static_cast<int>(tok.size()) != n + 1)
        throw ParseError(r.line_no, "order length does not match n");
      std::vector<int> order;
      order.reserve(static_cast<std::size_t>(n));
      for (std::size_t i = 1; i < tok.size(); ++i)
        order.push_back(static_cast<int>(io_detail::parse_long(tok[i], r.line_no)));
      try {
        return Tour(std::move(order));
      } catch (const std::exception& e) {
        throw ParseError(r.line_no, e.what());
      }
    } else {
      throw ParseError(r.line_no, "unexpected line in tour file");
    }
  }
  throw ParseError(r.line_no, "missing 'order' line");
}

// --- script -----------------------------------------------------------------

// One move per line: step index and the four vertex ids of the removed edges.
inline void write_script(std::ostream& out, const GadgetScript& script) {
  out << "# tsplab script v1\n";
  out << "expected " << script.expected_count << "\n";
  out << "moves " << script.moves.size() << "\n";
  for (std::size_t i = 0; i < script.moves.size(); ++i) {
    const TwoChange& m = script.moves[i];
    out << i << " " << m.e1.u << " " << m.e1.v << " " << m.e2.u << " " << m.e2.v << "\n";
  }
}

inline GadgetScript read_script(std::istream& in) {
  io_detail::LineReader r{in};
  std::string line;
  GadgetScript script;
  long count = -1;
  while (r.next(line)) {
    const auto tok = io_detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "expected" && tok.size() == 2) {
      script.expected_count = io_detail::parse_long(tok[1], r.line_no);
      continue;
    }
    if (tok[0] == "moves" && tok.size() == 2) {
      count = io_detail::parse_long(tok[1], r.line_no);
      continue;
    }
    if (tok.size() != 5) throw ParseError(r.line_no, "expected 'index u1 u2 v1 v2'");
    try {
      script.moves.emplace_back(
          Edge(static_cast<int>(io_detail::parse_long(tok[1], r.line_no)),
               static_cast<int>(io_detail::parse_long(tok[2], r.line_no))),
          Edge(static_cast<int>(io_detail::parse_long(tok[3], r.line_no)),
               static_cast<int>(io_detail::parse_long(tok[4], r.line_no))));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(r.line_no, e.what());
    }
  }
  if (count >= 0 && count != static_cast<long>(script.moves.size()))
    throw ParseError(r.line_no, "move count mismatch");
  if (script.expected_count == 0)
    script.expected_count = static_cast<std::int64_t>(script.moves.size());
  return script;
}

// --- trace ------------------------------------------------------------------

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "# tsplab trace v1\n";
  out << "step,u1,u2,v1,v2,delta,length_after\n";
  for (const StepRecord& s : trace.steps) {
    out << s.index << "," << s.change.e1.u << "," << s.change.e1.v << "," << s.change.e2.u << ","
        << s.change.e2.v << "," << format_double(s.delta) << ","
        << format_double(s.length_after) << "\n";
  }
}

// --- TSPLIB -----------------------------------------------------------------

struct TsplibReadResult {
  Instance instance;
  bool rounding_divergence_warning = true;  // distances are used unrounded here
};

// Reads NODE_COORD_SECTION files with EUC_2D or MAN_2D edge weights.
// Coordinates are taken verbatim; distances in this library are never
// rounded to integers, which diverges from the TSPLIB convention.
inline TsplibReadResult read_tsplib(std::istream& in) {
  std::string line, name = "tsplib";
  Metric metric = Metric::euclidean();
  bool metric_seen = false;
  int n = -1;
  int line_no = 0;
  std::vector<Point> pts;
  bool in_coords = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = io_detail::tokens(line);
    if (tok.empty()) continue;
    if (!in_coords) {
      std::string key = tok[0];
      if (!key.empty() && key.back() == ':') key.pop_back();
      std::string value;
      if (tok.size() >= 2) value = tok[1] == ":" ? (tok.size() >= 3 ? tok[2] : "") : tok[1];
      if (key == "NAME") name = value;
      else if (key == "DIMENSION") n = static_cast<int>(io_detail::parse_long(value, line_no));
      else if (key == "EDGE_WEIGHT_TYPE") {
        if (value == "EUC_2D") metric = Metric::euclidean();
        else if (value == "MAN_2D") metric = Metric::manhattan();
        else throw ParseError(line_no, "unsupported EDGE_WEIGHT_TYPE '" + value + "'");
        metric_seen = true;
      } else if (key == "NODE_COORD_SECTION") {
        if (n < 0) throw ParseError(line_no, "NODE_COORD_SECTION before DIMENSION");
        in_coords = true;
      } else if (key == "EOF") {
        break;
      }
      // TYPE, COMMENT and unknown keys are ignored.
      continue;
    }
    if (tok[0] == "EOF") break;
    if (tok.size() != 3) throw ParseError(line_no, "expected 'id x y'");
    pts.push_back(Point{io_detail::parse_double(tok[1], line_no),
                        io_detail::parse_double(tok[2], line_no)});
  }
  if (!metric_seen) throw ParseError(line_no, "missing EDGE_WEIGHT_TYPE");
  if (static_cast<int>(pts.size()) != n)
    throw ParseError(line_no, "coordinate count does not match DIMENSION");
  return {Instance(std::move(pts), metric, name), true};
}

inline void write_tsplib(std::ostream& out, const Instance& inst) {
  if (inst.dim() != 2)
    throw std::invalid_argument("write_tsplib: only d = 2 supported");
  std::string type;
  if (inst.metric == Metric::euclidean()) type = "EUC_2D";
  else if (inst.metric == Metric::manhattan()) type = "MAN_2D";
  else throw std::invalid_argument("write_tsplib: only L1 / L2 metrics map to TSPLIB");
  out << "NAME : " << (inst.name.empty() ? "tsplab" : inst.name) << "\n";
  out << "TYPE : TSP\n";
  out << "COMMENT : distances are real-valued (no TSPLIB integer rounding)\n";
  out << "DIMENSION : " << inst.n() << "\n";
  out << "EDGE_WEIGHT_TYPE : " << type << "\n";
  out << "NODE_COORD_SECTION\n";
  for (int i = 0; i < inst.n(); ++i)
    out << (i + 1) << " " << format_double(inst.points[static_cast<std::size_t>(i)][0]) << " "
        << format_double(inst.points[static_cast<std::size_t>(i)][1]) << "\n";
  out << "EOF\n";
}

// --- file helpers -----------------------------------------------------------

template <typename WriteFn>
inline void write_file(const std::string& path, WriteFn&& fn) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  fn(out);
}

template <typename ReadFn>
inline auto read_file(const std::string& path, ReadFn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return fn(in);
}

}  // namespace tsplab
