#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "renyiq/compander.hpp"
#include "renyiq/errors.hpp"
#include "renyiq/quantizer.hpp"

using namespace renyiq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Quantizer uniform_cells(std::size_t n) {
  std::vector<double> b, c;
  for (std::size_t k = 1; k < n; ++k) b.push_back(double(k) / n);
  for (std::size_t k = 0; k < n; ++k) c.push_back((k + 0.5) / n);
  return Quantizer(b, c);
}

ProbabilityVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (double& v : p) v = e(rng);
  double s = 0.0;
  for (double v : p) s += v;
  for (double& v : p) v /= s;
  return ProbabilityVector(p);
}

}  // namespace

TEST_CASE("quantize examples", "[quantizer]") {
  const Quantizer q({0.5}, {0.25, 0.75});
  CHECK(q.quantize(0.5) == 0.25);
  CHECK(q.quantize(0.7) == 0.75);
  CHECK(q.quantize(-3.0) == 0.25);
  CHECK(q.quantize(1e9) == 0.75);
}

TEST_CASE("quantizer invariants are enforced", "[quantizer]") {
  CHECK_THROWS_AS(Quantizer({0.5, 0.5}, {0.0, 0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(Quantizer({0.5}, {0.25}), DomainError);
  // Codepoint on its cell boundary is not interior.
  CHECK_THROWS_AS(Quantizer({0.5}, {0.5, 0.75}), DomainError);
  CHECK_THROWS_AS(Quantizer({0.5}, {0.25, 0.5}), DomainError);
}

TEST_CASE("cells tile the line", "[quantizer][property]") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 2.0);
  std::vector<double> b;
  for (int i = 0; i < 30; ++i) b.push_back(z(rng));
  std::sort(b.begin(), b.end());
  std::vector<double> c{b.front() - 1.0};
  for (std::size_t k = 1; k < b.size(); ++k) c.push_back(0.5 * (b[k - 1] + b[k]));
  c.push_back(b.back() + 1.0);
  const Quantizer q(b, c);
  for (int t = 0; t < 2000; ++t) {
    const double x = t % 10 == 0 ? b[t % b.size()] : z(rng);
    std::size_t hits = 0, found = 0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q.cell(k).contains(x)) {
        ++hits;
        found = k;
      }
    }
    REQUIRE(hits == 1);
    CHECK(q.cell_index(x) == found);
    CHECK(q.quantize(x) == c[found]);
  }
}

TEST_CASE("cell_probabilities examples", "[quantizer]") {
  const auto p = cell_probabilities(uniform_cells(4), uniform(0, 1));
  for (double v : p.entries()) CHECK_THAT(v, WithinAbs(0.25, 1e-15));

  const auto g = cell_probabilities(Quantizer({0.0}, {-1.0, 1.0}), gaussian(0, 1));
  CHECK_THAT(g[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(g[1], WithinAbs(0.5, 1e-15));

  const auto s = cell_probabilities(Quantizer({0.1}, {0.05, 0.5}), uniform(0, 1));
  CHECK_THAT(s[0], WithinAbs(0.1, 1e-15));
  CHECK_THAT(s[1], WithinAbs(0.9, 1e-15));
}

TEST_CASE("probability vector validation", "[quantizer]") {
  CHECK_THROWS_AS(ProbabilityVector({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(ProbabilityVector({-0.1, 1.1}), DomainError);
  CHECK_THROWS_AS(ProbabilityVector({}), DomainError);
}

TEST_CASE("renyi_entropy_vec examples", "[quantizer]") {
  const ProbabilityVector u({0.25, 0.25, 0.25, 0.25});
  CHECK_THAT(renyi_entropy_vec(u, 0.5), WithinAbs(std::log(4.0), 1e-15));
  CHECK_THAT(renyi_entropy_vec(ProbabilityVector({0.5, 0.5, 0.0}), 0.0),
             WithinAbs(std::log(2.0), 1e-15));
  // mpmath: 2 log(sqrt(0.75) + 0.5)
  CHECK_THAT(renyi_entropy_vec(ProbabilityVector({0.75, 0.25}), 0.5),
             WithinAbs(0.6238107163648714, 1e-14));
  // Shannon branch.
  const ProbabilityVector p({0.75, 0.25});
  const double shannon = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  CHECK_THAT(renyi_entropy_vec(p, 1.0), WithinAbs(shannon, 1e-15));
  CHECK_THAT(renyi_entropy_vec(p, 1.0 - 5e-7), WithinAbs(shannon, 1e-15));
  CHECK_THROWS_AS(renyi_entropy_vec(p, 1.5), DomainError);
}

TEST_CASE("renyi entropy is nonincreasing in alpha and bounded",
          "[quantizer][property]") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 17;
    const auto p = random_vector(rng, n);
    double last = kInf;
    for (int k = 0; k <= 50; ++k) {
      const double h = renyi_entropy_vec(p, k / 50.0);
      CHECK(h <= last + 1e-12);
      CHECK(h >= 0.0);
      CHECK(h <= std::log(double(n)) + 1e-12);
      last = h;
    }
    CHECK(renyi_entropy_vec(p, 0.5) < std::log(double(n)) - 1e-9);
  }
  const ProbabilityVector flat(std::vector<double>(7, 1.0 / 7.0));
  CHECK_THAT(renyi_entropy_vec(flat, 0.3), WithinAbs(std::log(7.0), 1e-9));
}

TEST_CASE("quantizer_entropy examples", "[quantizer]") {
  CHECK_THAT(quantizer_entropy(uniform_cells(4), uniform(0, 1), 0.3),
             WithinAbs(std::log(4.0), 1e-14));
  for (double a : {0.0, 0.2, 0.7, 1.0}) {
    CHECK_THAT(quantizer_entropy(Quantizer({0.0}, {-1, 1}), gaussian(0, 1), a),
               WithinAbs(std::log(2.0), 1e-14));
  }
  CHECK_THAT(quantizer_entropy(Quantizer({0.75}, {0.5, 0.9}), uniform(0, 1), 0.5),
             WithinAbs(0.6238107163648714, 1e-14));
}

TEST_CASE("quantizer entropy near alpha = 1", "[quantizer][property]") {
  const Quantizer q = build_compander(PointDensity(gaussian(0.0, 1.5)), 37);
  const Density g = gaussian(0, 1);
  CHECK(std::abs(quantizer_entropy(q, g, 1.0 - 1e-6) -
                 quantizer_entropy(q, g, 1.0)) < 1e-4);
}

TEST_CASE("quantizer entropy ignores cell order", "[quantizer][property]") {
  const Density g = laplacian(0.0, 1.0);
  const Quantizer q = build_compander(PointDensity(gaussian(0, 2)), 12);
  auto p = cell_probabilities(q, g).entries();
  const double base = renyi_entropy_vec(ProbabilityVector(p), 0.4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(p.begin(), p.end(), rng);
    CHECK_THAT(renyi_entropy_vec(ProbabilityVector(p), 0.4), WithinRel(base, 1e-14));
  }
}

TEST_CASE("distortion examples", "[quantizer]") {
  for (std::size_t n : {2, 4, 9, 64}) {
    CHECK_THAT(distortion(uniform_cells(n), uniform(0, 1), 2.0),
               WithinAbs(1.0 / (12.0 * n * n), 1e-10));
  }
  CHECK_THAT(distortion(uniform_cells(4), uniform(0, 1), 2.0),
             WithinAbs(0.00520833, 1e-8));
  CHECK_THAT(distortion(Quantizer({0.5}, {0.25, 0.75}), uniform(0, 1), 1.0),
             WithinAbs(0.125, 1e-14));
  const double c = std::sqrt(2.0 / M_PI);
  // mpmath: 1 - 2/pi
  CHECK_THAT(distortion(Quantizer({0.0}, {-c, c}), gaussian(0, 1), 2.0),
             WithinAbs(0.36338022763241866, 1e-10));
  CHECK_THROWS_AS(distortion(uniform_cells(2), uniform(0, 1), 0.5), DomainError);
}

TEST_CASE("distortion is shift invariant", "[quantizer][property]") {
  const double s = 3.0;
  const Density g = gaussian(0.2, 1.1);
  const Quantizer q = build_compander(PointDensity(gaussian(0.2, 2.0)), 25);
  auto b = q.breakpoints();
  auto c = q.codepoints();
  for (double& v : b) v += s;
  for (double& v : c) v += s;
  const Quantizer qs(b, c);
  for (double r : {1.0, 2.0, 3.5}) {
    CHECK_THAT(distortion(qs, affine(g, 1.0, s), r),
               WithinRel(distortion(q, g, r), 1e-9));
  }
}

TEST_CASE("restricted_metrics examples", "[quantizer]") {
  const auto m = restricted_metrics(uniform_cells(4), uniform(0, 1),
                                    Interval{0.0, 0.5}, 0.5, 2.0);
  CHECK_THAT(m.entropy_restricted, WithinAbs(std::log(2.0), 1e-14));
  CHECK_THAT(m.restricted_power_sum, WithinAbs(1.0, 1e-14));
  CHECK_THAT(m.entropy_power_sum, WithinAbs(2.0, 1e-14));
  CHECK_THAT(m.distortion_restricted, WithinAbs(1.0 / 192.0, 1e-12));

  const Quantizer q = build_compander(PointDensity(gaussian(0, 1.3)), 20);
  const Density g = gaussian(0, 1);
  const auto all = restricted_metrics(q, g, Interval::real_line(), 0.6, 2.0);
  CHECK_THAT(all.entropy_restricted,
             WithinAbs(quantizer_entropy(q, g, 0.6), 1e-12));
  CHECK_THAT(all.distortion_restricted, WithinRel(distortion(q, g, 2.0), 1e-12));

  CHECK_THROWS_AS(restricted_metrics(q, uniform(0, 1), Interval{2.0, 3.0}, 0.5, 2.0),
                  EmptyConditioningError);
}

TEST_CASE("distortion decomposes over a two-set partition",
          "[quantizer][property]") {
  const Density g = laplacian(0.3, 0.9);
  const Quantizer q = build_compander(PointDensity(laplacian(0.3, 2.0)), 33);
  for (const Interval a1 : {Interval{0.0, 1.0}, Interval{-0.77, 0.123},
                            Interval{0.5, kInf}}) {
    const Region a2 = complement(a1);
    const double d = distortion(q, g, 2.0);
    const auto m1 = restricted_metrics(q, g, a1, 0.5, 2.0);
    const auto m2 = restricted_metrics(q, g, a2, 0.5, 2.0);
    const double sum =
        g.mass(a1) * m1.distortion_restricted + g.mass(a2) * m2.distortion_restricted;
    CHECK_THAT(sum, WithinRel(d, 1e-9));
  }
}

TEST_CASE("codepoint_count_in examples", "[quantizer]") {
  const Quantizer q = uniform_cells(4);
  CHECK(codepoint_count_in(q, {0.0, 0.5}) == 2);
  CHECK(codepoint_count_in(q, {2.0, 3.0}) == 0);
  CHECK(codepoint_count_in(q, Interval::real_line()) == 4);
}

TEST_CASE("quantizer json", "[quantizer]") {
  const Quantizer q({0.5}, {0.25, 0.75});
  CHECK(q.to_json().dump() == R"({"breakpoints":[0.5],"codepoints":[0.25,0.75]})");
  const Quantizer back = Quantizer::from_json(q.to_json());
  CHECK(back.breakpoints() == q.breakpoints());
  CHECK(back.codepoints() == q.codepoints());
}
