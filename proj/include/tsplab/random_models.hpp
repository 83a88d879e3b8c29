#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsplab/core.hpp"
#include "tsplab/rng.hpp"

namespace tsplab {

// Probabilistic input models: points drawn independently from densities on
// [0,1]^d bounded by phi, plus (truncated) Gaussian smoothing. All samplers
// are pure functions of (seed, parameters); per-point streams make them
// order-independent.

struct DensitySpec {
  double phi = 1.0;
  int d = 2;
  std::optional<std::vector<Point>> anchors;
};

struct SmoothingParams {
  double sigma = 0.1;
  double alpha = 1.0;
  bool truncated = true;
};

inline Instance sample_uniform(int n, int d, std::uint64_t seed,
                               Metric metric = Metric::euclidean()) {
  if (n < 3) throw std::invalid_argument("sample_uniform: n >= 3");
  if (d < 2) throw std::invalid_argument("sample_uniform: d >= 2");
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(stream_seed(seed, stream_tag::kOffset, static_cast<std::uint64_t>(i)));
    Point p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = rng.uniform01();
    pts[static_cast<std::size_t>(i)] = std::move(p);
  }
  return Instance(std::move(pts), metric, "uniform-n" + std::to_string(n) + "-s" + std::to_string(seed));
}

// Point i is uniform on an axis-aligned subcube of side phi^(-1/d), centered
// on its anchor but clipped so the subcube stays inside [0,1]^d. The realized
// density is exactly phi. Anchors default to seeded per-point draws; for
// phi = 1 the subcube is the whole unit cube and this reduces to
// sample_uniform on the same seed path.
inline Instance sample_phi_perturbed(int n, int d, double phi, std::uint64_t seed,
                                     const std::vector<Point>* anchors = nullptr,
                                     Metric metric = Metric::euclidean()) {
  if (n < 3) throw std::invalid_argument("sample_phi_perturbed: n >= 3");
  if (d < 2) throw std::invalid_argument("sample_phi_perturbed: d >= 2");
  if (phi < 1.0) throw std::invalid_argument("sample_phi_perturbed: phi >= 1");
  if (anchors && static_cast<int>(anchors->size()) != n)
    throw std::invalid_argument("sample_phi_perturbed: anchor count != n");
  const double side = std::pow(phi, -1.0 / static_cast<double>(d));
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Point anchor(static_cast<std::size_t>(d));
    if (anchors) {
      anchor = (*anchors)[static_cast<std::size_t>(i)];
      if (static_cast<int>(anchor.size()) != d)
        throw std::invalid_argument("sample_phi_perturbed: anchor dimension mismatch");
    } else {
      Rng arng(stream_seed(seed, stream_tag::kAnchor, static_cast<std::uint64_t>(i)));
      for (int k = 0; k < d; ++k) anchor[static_cast<std::size_t>(k)] = arng.uniform01();
    }
    Rng rng(stream_seed(seed, stream_tag::kOffset, static_cast<std::uint64_t>(i)));
    Point p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const double center =
          std::min(1.0 - side / 2.0, std::max(side / 2.0, anchor[static_cast<std::size_t>(k)]));
      p[static_cast<std::size_t>(k)] = center - side / 2.0 + rng.uniform01() * side;
    }
    pts[static_cast<std::size_t>(i)] = std::move(p);
  }
  return Instance(std::move(pts), metric,
                  "phi" + std::to_string(phi) + "-n" + std::to_string(n) + "-s" + std::to_string(seed));
}

inline Instance sample_phi_perturbed(int n, const DensitySpec& spec, std::uint64_t seed,
                                     Metric metric = Metric::euclidean()) {
  return sample_phi_perturbed(n, spec.d, spec.phi, seed,
                              spec.anchors ? &*spec.anchors : nullptr, metric);
}

// Adds per-coordinate Gaussian noise to base points in [0,1]^d. Truncated
// noise is drawn by rejection into [-alpha, alpha], so the conditional
// density bound applies verbatim. The result is rescaled from the support
// hull [-alpha, 1+alpha]^d back to [0,1]^d.
inline Instance sample_smoothed_gaussian(const std::vector<Point>& base,
                                         const SmoothingParams& params, std::uint64_t seed,
                                         Metric metric = Metric::euclidean()) {
  if (base.size() < 3) throw std::invalid_argument("sample_smoothed_gaussian: n >= 3");
  if (params.sigma <= 0.0) throw std::invalid_argument("sample_smoothed_gaussian: sigma > 0");
  if (params.alpha < 1.0) throw std::invalid_argument("sample_smoothed_gaussian: alpha >= 1");
  const int d = static_cast<int>(base[0].size());
  const double span = 2.0 * params.alpha + 1.0;
  std::vector<Point> pts(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (static_cast<int>(base[i].size()) != d)
      throw std::invalid_argument("sample_smoothed_gaussian: mixed dimensions");
    Rng rng(stream_seed(seed, stream_tag::kSmooth, static_cast<std::uint64_t>(i)));
    Point p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const double b = base[i][static_cast<std::size_t>(k)];
      if (b < 0.0 || b > 1.0)
        throw std::invalid_argument("sample_smoothed_gaussian: base point outside [0,1]^d");
      double z = params.sigma * rng.normal();
      if (params.truncated)
        while (std::abs(z) > params.alpha) z = params.sigma * rng.normal();
      p[static_cast<std::size_t>(k)] = (b + z + params.alpha) / span;
    }
    pts[i] = std::move(p);
  }
  return Instance(std::move(pts), metric, "gaussian-s" + std::to_string(seed));
}

// Density bound phi corresponding to a Gaussian perturbation. The truncated
// bound (valid for sigma <= 1) is
//   [ (1/(sigma sqrt(2 pi))) / (1 - sigma exp(-alpha^2/(2 sigma^2))) ]^d,
// the untruncated bound is (1/(sqrt(2 pi) sigma))^d. Note the bound refers
// to densities on the pre-rescale support; mapping [-alpha, 1+alpha]^d onto
// the unit cube inflates it by (2 alpha + 1)^d.
inline double phi_of_gaussian(const SmoothingParams& params, int d) {
  if (params.sigma <= 0.0) throw std::invalid_argument("phi_of_gaussian: sigma > 0");
  constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
  if (!params.truncated) return std::pow(1.0 / (kSqrt2Pi * params.sigma), d);
  if (params.sigma > 1.0)
    throw std::domain_error("phi_of_gaussian: truncated bound requires sigma <= 1");
  const double num = 1.0 / (params.sigma * kSqrt2Pi);
  const double den =
      1.0 - params.sigma * std::exp(-(params.alpha * params.alpha) / (2.0 * params.sigma * params.sigma));
  return std::pow(num / den, d);
}

inline double rescale_inflation(const SmoothingParams& params, int d) {
  return std::pow(2.0 * params.alpha + 1.0, d);
}

}  // namespace tsplab
