#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tsplab/random_models.hpp"

using namespace tsplab;
using Catch::Approx;

TEST_CASE("pinned generator produces frozen values") {
  // golden values; a change here would silently break every seeded result
  // the first outputs of seed 0 are the canonical splitmix64 test vector
  Rng r(0);
  CHECK(r.next() == 0xe220a8397b1dcdafULL);
  CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(r.next() == 0x06c45d188009454fULL);
  Rng u(12345);
  CHECK(u.uniform01() == Approx(0.13307966866142729).margin(1e-17));
  CHECK(u.uniform01() == Approx(0.20481663336165912).margin(1e-17));
  CHECK(stream_seed(7, stream_tag::kOffset, 3) == 8337520925100549192ULL);
  Rng g(42);
  CHECK(g.normal() == Approx(0.88224890622226881).margin(1e-15));
  CHECK(g.normal() == Approx(-0.45084987571886009).margin(1e-15));
}

TEST_CASE("sample_uniform determinism and support") {
  const Instance a = sample_uniform(5, 2, 1);
  const Instance b = sample_uniform(5, 2, 1);
  CHECK(a.points == b.points);
  CHECK(sample_uniform(5, 2, 2).points != a.points);

  const Instance big = sample_uniform(2000, 3, 9);
  for (const Point& p : big.points)
    for (double c : p) {
      CHECK(c >= 0.0);
      CHECK(c < 1.0);
    }
}

TEST_CASE("sample_uniform empirical mean") {
  const Instance inst = sample_uniform(50000, 2, 12345);
  double sum = 0.0;
  for (const Point& p : inst.points) sum += p[0] + p[1];
  const double mean = sum / (2.0 * 50000.0);
  CHECK(mean >= 0.497);
  CHECK(mean <= 0.503);
}

TEST_CASE("phi = 1 reproduces the uniform sampler exactly") {
  const Instance u = sample_uniform(40, 2, 7);
  const Instance p = sample_phi_perturbed(40, 2, 1.0, 7);
  CHECK(u.points == p.points);
}

TEST_CASE("phi-perturbed points live on subcubes of side phi^(-1/d)") {
  // phi = 4, d = 2: side 1/2
  std::vector<Point> anchors(10, Point{0.5, 0.5});
  const Instance inst = sample_phi_perturbed(10, 2, 4.0, 3, &anchors);
  for (const Point& pt : inst.points)
    for (double c : pt) {
      CHECK(c >= 0.25);
      CHECK(c <= 0.75);
    }
  // adversarial anchors cluster everything: diameter <= sqrt(d) * side
  double diam = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      diam = std::max(diam, inst.dist(i, j));
  CHECK(diam <= std::sqrt(2.0) * 0.5 + 1e-12);
}

TEST_CASE("density spec overload matches the explicit arguments") {
  DensitySpec spec;
  spec.phi = 4.0;
  spec.d = 2;
  spec.anchors = std::vector<Point>(10, Point{0.3, 0.7});
  const Instance a = sample_phi_perturbed(10, spec, 9);
  const Instance b = sample_phi_perturbed(10, 2, 4.0, 9, &*spec.anchors);
  CHECK(a.points == b.points);
}

TEST_CASE("phi-perturbed output stays inside the unit cube") {
  std::vector<Point> corner_anchors(20, Point{0.0, 0.0});
  const Instance inst = sample_phi_perturbed(20, 2, 16.0, 5, &corner_anchors);
  for (const Point& pt : inst.points)
    for (double c : pt) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
  CHECK_THROWS_AS(sample_phi_perturbed(10, 2, 0.5, 1), std::invalid_argument);
}

TEST_CASE("smoothing degenerates to rescaled base points for tiny sigma") {
  std::vector<Point> base{{0.1, 0.2}, {0.5, 0.5}, {0.9, 0.4}};
  const SmoothingParams params{1e-12, 1.0, true};
  const Instance inst = sample_smoothed_gaussian(base, params, 4);
  for (std::size_t i = 0; i < base.size(); ++i)
    for (int k = 0; k < 2; ++k)
      CHECK(inst.points[i][static_cast<std::size_t>(k)] ==
            Approx((base[i][static_cast<std::size_t>(k)] + 1.0) / 3.0).margin(1e-9));
}

TEST_CASE("truncated smoothing keeps offsets inside [-alpha, alpha]") {
  std::vector<Point> base(200, Point{0.5, 0.5});
  const SmoothingParams params{0.8, 1.0, true};
  const Instance inst = sample_smoothed_gaussian(base, params, 11);
  for (const Point& p : inst.points)
    for (double c : p) {
      // pre-rescale coordinate = c * 3 - 1 must be in [0.5 - 1, 0.5 + 1]
      const double pre = c * 3.0 - 1.0;
      CHECK(pre >= -0.5 - 1e-12);
      CHECK(pre <= 1.5 + 1e-12);
    }
  CHECK_THROWS_AS(sample_smoothed_gaussian(base, SmoothingParams{0.0, 1.0, true}, 1),
                  std::invalid_argument);
}

TEST_CASE("phi_of_gaussian closed forms") {
  // untruncated identity: sigma = 1/sqrt(2 pi) gives phi = 1
  const double s0 = 1.0 / std::sqrt(2.0 * M_PI);
  CHECK(phi_of_gaussian({s0, 1.0, false}, 2) == Approx(1.0).margin(1e-12));

  // untruncated, sigma = 0.1, d = 2: 1 / (2 pi sigma^2)
  CHECK(phi_of_gaussian({0.1, 1.0, false}, 2) ==
        Approx(1.0 / (2.0 * M_PI * 0.01)).margin(1e-9));

  // truncated, sigma = 0.5, alpha = 1, d = 1: displayed formula
  const double expect =
      (1.0 / (0.5 * std::sqrt(2.0 * M_PI))) / (1.0 - 0.5 * std::exp(-2.0));
  CHECK(phi_of_gaussian({0.5, 1.0, true}, 1) == Approx(expect).margin(1e-12));

  CHECK_THROWS_AS(phi_of_gaussian({1.5, 1.0, true}, 2), std::domain_error);
}

TEST_CASE("phi_of_gaussian decreases in sigma (untruncated)") {
  double prev = phi_of_gaussian({0.05, 1.0, false}, 2);
  for (double s : {0.1, 0.2, 0.4, 0.8, 1.6}) {
    const double cur = phi_of_gaussian({s, 1.0, false}, 2);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("empirical density of smoothed samples respects the closed-form bound") {
  // all base points identical: the sharpest case for the max density
  const int n = 10000;
  const SmoothingParams params{0.1, 1.0, true};
  std::vector<Point> base(static_cast<std::size_t>(n), Point{0.5, 0.5});
  const Instance inst = sample_smoothed_gaussian(base, params, 2024);

  const int grid = 100;
  std::vector<int> hist(static_cast<std::size_t>(grid * grid), 0);
  for (const Point& p : inst.points) {
    const int gx = std::min(grid - 1, static_cast<int>(p[0] * grid));
    const int gy = std::min(grid - 1, static_cast<int>(p[1] * grid));
    ++hist[static_cast<std::size_t>(gx * grid + gy)];
  }
  int max_count = 0;
  for (int c : hist) max_count = std::max(max_count, c);

  // density bound after rescaling, as cell probability
  const double bound = phi_of_gaussian(params, 2) * rescale_inflation(params, 2);
  const double p_cell = bound / (grid * grid);
  const double limit = n * p_cell + 3.0 * std::sqrt(n * p_cell * (1.0 - p_cell));
  CHECK(static_cast<double>(max_count) <= limit);
}
