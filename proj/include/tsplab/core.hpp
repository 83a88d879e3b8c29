#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsplab {

// Thrown when an input exceeds a hard size limit (exact solvers, enumeration).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a scripted move cannot be applied or is not improving.
class ScriptViolation : public std::runtime_error {
 public:
  ScriptViolation(std::int64_t step, const std::string& what)
      : std::runtime_error("script violation at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

// Thrown by file readers; carries the 1-based line number of the offense.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Lp metric selector: a finite exponent p >= 1 or the max-coordinate metric.
class Metric {
 public:
  static Metric lp(int p) {
    if (p < 1) throw std::invalid_argument("Metric: p must be >= 1");
    return Metric(p);
  }
  static Metric manhattan() { return Metric(1); }
  static Metric euclidean() { return Metric(2); }
  static Metric linf() { return Metric(kInf); }

  bool is_inf() const { return p_ == kInf; }
  // Only valid for finite metrics.
  int p() const {
    if (is_inf()) throw std::logic_error("Metric: p() on L-infinity");
    return p_;
  }

  std::string label() const { return is_inf() ? "inf" : std::to_string(p_); }

  static Metric from_label(const std::string& s) {
    if (s == "inf" || s == "INF" || s == "Inf") return linf();
    std::size_t pos = 0;
    const int p = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("Metric: bad label '" + s + "'");
    return lp(p);
  }

  friend bool operator==(const Metric& a, const Metric& b) { return a.p_ == b.p_; }
  friend bool operator!=(const Metric& a, const Metric& b) { return !(a == b); }

 private:
  static constexpr int kInf = -1;
  explicit Metric(int p) : p_(p) {}
  int p_;
};

using Point = std::vector<double>;

// Lp distance. Finite p is evaluated via max-factorization
// m * (sum (|x_i - y_i| / m)^p)^(1/p) so that large exponents (up to p = 64
// and beyond) neither overflow nor underflow to zero.
inline double distance(const Point& a, const Point& b, const Metric& m) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
  const std::size_t d = a.size();
  double maxd = 0.0;
  for (std::size_t i = 0; i < d; ++i) maxd = std::max(maxd, std::abs(a[i] - b[i]));
  if (m.is_inf() || maxd == 0.0) return maxd;
  const int p = m.p();
  if (p == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::abs(a[i] - b[i]);
    return s;
  }
  if (p == 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double t = a[i] - b[i];
      s += t * t;
    }
    return std::sqrt(s);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double t = std::abs(a[i] - b[i]) / maxd;
    s += std::pow(t, static_cast<double>(p));
  }
  return maxd * std::pow(s, 1.0 / static_cast<double>(p));
}

// A point set together with the metric used to measure it. Immutable after
// construction; coincident points are allowed (zero-length edges are legal).
struct Instance {
  std::vector<Point> points;
  Metric metric = Metric::euclidean();
  std::string name;

  Instance() = default;
  Instance(std::vector<Point> pts, Metric m, std::string label = "")
      : points(std::move(pts)), metric(m), name(std::move(label)) {
    validate();
  }

  int n() const { return static_cast<int>(points.size()); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

  double dist(int i, int j) const { return distance(points[i], points[j], metric); }

  void validate() const {
    if (points.size() < 3) throw std::invalid_argument("Instance: need n >= 3 points");
    const std::size_t d = points[0].size();
    if (d < 2) throw std::invalid_argument("Instance: need dimension >= 2");
    for (const Point& p : points) {
      if (p.size() != d) throw std::invalid_argument("Instance: mixed dimensions");
      for (double c : p)
        if (!std::isfinite(c)) throw std::invalid_argument("Instance: non-finite coordinate");
    }
  }
};

}  // namespace tsplab
