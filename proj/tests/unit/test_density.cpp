#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "renyiq/density.hpp"
#include "renyiq/errors.hpp"
#include "renyiq/quadrature.hpp"

using namespace renyiq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<Density> zoo() {
  return {uniform(0.0, 1.0),
          uniform(-2.0, 3.0),
          gaussian(0.0, 1.0),
          gaussian(1.5, 0.3),
          laplacian(0.0, 1.0),
          laplacian(-1.0, 2.5),
          exponential(1.0, 0.0),
          exponential(3.0, -1.0),
          piecewise_linear({{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}}),
          restrict(gaussian(0.0, 1.0), {0.0, kInf}),
          restrict(laplacian(0.0, 1.0), {-1.0, 2.0}),
          tilt(piecewise_linear({{0.0, 1.0}, {1.0, 3.0}, {3.0, 0.5}}), 0.4),
          affine(gaussian(0.0, 1.0), 3.0, 1.0),
          mixture({{0.3, gaussian(-1.0, 0.5)}, {0.7, gaussian(1.0, 1.0)}})};
}

double quad_pdf(const Density& d) {
  return integrate_on_support([&](double x) { return d.pdf(x); }, d.support(),
                              d.core(), d.kinks(), {1e-11, 1e-14, 1'000'000})
      .value;
}

}  // namespace

TEST_CASE("pdf examples", "[density]") {
  CHECK(uniform(0, 1).pdf(0.5) == 1.0);
  CHECK(uniform(0, 1).pdf(2.0) == 0.0);
  // mpmath: 1/sqrt(2 pi)
  CHECK_THAT(gaussian(0, 1).pdf(0.0), WithinRel(0.39894228040143268, 1e-14));
}

TEST_CASE("cdf examples", "[density]") {
  CHECK(uniform(0, 1).cdf(0.25) == 0.25);
  CHECK(laplacian(0, 1).cdf(0.0) == 0.5);
  CHECK_THAT(gaussian(0, 1).cdf(1.0), WithinRel(0.84134474606854295, 1e-14));
}

TEST_CASE("quantile examples", "[density]") {
  CHECK_THAT(uniform(0, 1).quantile(0.75), WithinAbs(0.75, 1e-15));
  CHECK_THAT(laplacian(0, 1).quantile(0.5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(gaussian(0, 1).quantile(0.8413447), WithinAbs(1.0, 1e-6));
  CHECK_THAT(gaussian(0, 1).quantile(0.8413447),
             WithinAbs(0.99999980961110624, 1e-12));
  CHECK_THROWS_AS(gaussian(0, 1).quantile(0.0), DomainError);
  CHECK_THROWS_AS(gaussian(0, 1).quantile(1.0), DomainError);
  CHECK_THROWS_AS(uniform(0, 1).quantile(-0.2), DomainError);
}

TEST_CASE("power_integral examples", "[density]") {
  CHECK_THAT(power_integral(uniform(0, 1), 0.6), WithinAbs(1.0, 1e-14));
  CHECK_THAT(power_integral(gaussian(0, 1), 0.6), WithinAbs(1.86450, 1e-4));
  CHECK_THAT(power_integral(gaussian(0, 1), 0.6),
             WithinRel(1.8644912453132446, 1e-13));
  CHECK_THAT(power_integral(uniform(0, 2), 0.5), WithinRel(std::sqrt(2.0), 1e-14));
}

TEST_CASE("power integral closed forms agree with quadrature", "[density]") {
  for (const auto& d : {gaussian(0.3, 1.7), laplacian(0.0, 0.8),
                        exponential(2.0, 0.5)}) {
    for (double beta : {0.2, 0.6, 1.0}) {
      const double closed = power_integral(d, beta);
      const double quad = integrate_on_support(
          [&](double x) { return std::pow(d.pdf(x), beta); }, d.support(),
          d.core(), d.kinks(), {1e-12, 1e-300, 1'000'000})
                              .value;
      CHECK_THAT(quad, WithinRel(closed, 1e-9));
    }
  }
}

TEST_CASE("renyi_differential_entropy examples", "[density]") {
  CHECK_THAT(renyi_differential_entropy(uniform(0, 1), 0.6), WithinAbs(0.0, 1e-14));
  CHECK_THAT(renyi_differential_entropy(uniform(0, 2), 0.3),
             WithinRel(std::log(2.0), 1e-13));
  CHECK_THAT(renyi_differential_entropy(uniform(0, 2), 2.5),
             WithinRel(std::log(2.0), 1e-13));
  // mpmath: log(2 pi e)/2
  CHECK_THAT(renyi_differential_entropy(gaussian(0, 1), 1.0),
             WithinAbs(1.4189385332046727, 1e-9));
}

TEST_CASE("entropy is continuous across beta = 1", "[density][property]") {
  const Density g = gaussian(0, 1);
  const double at1 = renyi_differential_entropy(g, 1.0);
  CHECK(std::abs(renyi_differential_entropy(g, 1.0 - 1e-4) - at1) < 1e-2);
  CHECK(std::abs(renyi_differential_entropy(g, 1.0 + 1e-4) - at1) < 1e-2);
}

TEST_CASE("absolute_moment examples", "[density]") {
  CHECK_THAT(absolute_moment(uniform(0, 1), 2.0), WithinAbs(1.0 / 3.0, 1e-12));
  CHECK_THAT(absolute_moment(gaussian(0, 1), 2.0), WithinAbs(1.0, 1e-9));
  CHECK_THAT(absolute_moment(laplacian(0, 1), 2.0), WithinAbs(2.0, 1e-9));
  CHECK_THROWS_AS(absolute_moment(gaussian(0, 1), 0.5), DomainError);
}

TEST_CASE("restrict examples", "[density]") {
  const Density half = restrict(uniform(0, 1), {0.0, 0.5});
  CHECK_THAT(half.pdf(0.25), WithinRel(2.0, 1e-14));
  CHECK(half.pdf(0.75) == 0.0);
  CHECK_THAT(half.cdf(0.25), WithinAbs(0.5, 1e-14));

  const Density pos = restrict(gaussian(0, 1), {0.0, kInf});
  // mpmath: 2 * npdf(1)
  CHECK_THAT(pos.pdf(1.0), WithinAbs(0.4839414490382867, 1e-6));
  CHECK_THAT(pos.pdf(1.0), WithinRel(0.4839414490382867, 1e-13));
  CHECK_THAT(quad_pdf(pos), WithinAbs(1.0, 1e-9));

  CHECK_THROWS_AS(restrict(uniform(0, 1), {2.0, 3.0}), EmptyConditioningError);
  CHECK_THROWS_AS(restrict(uniform(0, 1), {0.5, 0.5}), EmptyConditioningError);
}

TEST_CASE("restricted power integral", "[density][property]") {
  const Density g = gaussian(0.2, 1.3);
  for (const Interval i : {Interval{-0.5, 1.0}, Interval{0.0, kInf},
                           Interval{-kInf, -1.0}}) {
    const Density gi = restrict(g, i);
    for (double beta : {0.3, 0.6, 0.9}) {
      const double m = g.mass(i);
      const Interval s = intersect(i, g.core());
      const double partial =
          integrate_on_support([&](double x) { return std::pow(g.pdf(x), beta); },
                               i, s, {}, {1e-12, 1e-300, 1'000'000})
              .value;
      CHECK_THAT(power_integral(gi, beta),
                 WithinRel(std::pow(m, -beta) * partial, 1e-8));
    }
  }
}

TEST_CASE("weak unimodality", "[density]") {
  CHECK(check_weak_unimodality(gaussian(0, 1), 64).passed);
  CHECK(check_weak_unimodality(uniform(0, 1), 64).passed);
  CHECK(check_weak_unimodality(laplacian(0, 1), 64).passed);
  const auto bimodal = check_weak_unimodality(
      mixture({{0.5, uniform(0, 1)}, {0.5, uniform(2, 3)}}), 64);
  CHECK_FALSE(bimodal.passed);
  CHECK(bimodal.failing_level.has_value());
}

TEST_CASE("normalization of every family", "[density][property]") {
  for (const auto& d : zoo()) {
    INFO(d.family());
    CHECK_THAT(quad_pdf(d), WithinAbs(1.0, 1e-8));
    CHECK_THAT(power_integral(d, 1.0), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("cdf and quantile are inverse and monotone", "[density][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (const auto& d : zoo()) {
    INFO(d.family());
    double last_x = -kInf;
    std::vector<double> ps;
    for (int i = 0; i < 40; ++i) ps.push_back(u(rng));
    std::sort(ps.begin(), ps.end());
    for (double p : ps) {
      const double x = d.quantile(p);
      CHECK(x >= last_x);
      last_x = x;
      CHECK_THAT(d.cdf(x), WithinAbs(p, 1e-9));
      if (d.pdf(x) > 1e-3) CHECK_THAT(d.quantile(d.cdf(x)), WithinAbs(x, 1e-9));
      CHECK_THAT(d.upper_quantile(1.0 - p), WithinAbs(x, 1e-8));
      CHECK_THAT(d.cdf(x) + d.ccdf(x), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("pdf is zero outside support", "[density][property]") {
  for (const auto& d : zoo()) {
    const Interval s = d.support();
    if (std::isfinite(s.lo)) CHECK(d.pdf(s.lo - 1.0) == 0.0);
    if (std::isfinite(s.hi)) CHECK(d.pdf(s.hi + 1.0) == 0.0);
  }
}

TEST_CASE("power integral scaling", "[density][property]") {
  for (const auto& base : {gaussian(0, 1), laplacian(0.5, 1.0), uniform(0, 1),
                           piecewise_linear({{0, 0}, {1, 1}, {3, 0}})}) {
    for (double s : {0.5, 2.0, 10.0}) {
      const Density scaled = affine(base, s, 0.0);
      for (double beta : {0.3, 0.7}) {
        CHECK_THAT(power_integral(scaled, beta),
                   WithinRel(std::pow(s, 1.0 - beta) * power_integral(base, beta),
                             1e-8));
      }
    }
  }
}

TEST_CASE("closed-form tilts", "[density]") {
  const Density t = tilt(gaussian(1.0, 2.0), 0.25);
  CHECK(t.family() == "gaussian");
  CHECK_THAT(t.pdf(1.0), WithinRel(gaussian(1.0, 4.0).pdf(1.0), 1e-14));
  CHECK(tilt(laplacian(0, 1), 0.5).family() == "laplacian");
  CHECK(tilt(uniform(0, 1), 0.5).family() == "uniform");
  CHECK(tilt(restrict(gaussian(0, 1), {0, 1}), 0.5).family() == "restricted");

  const Density pl = piecewise_linear({{0.0, 1.0}, {1.0, 3.0}, {3.0, 0.5}});
  const Density tp = tilt(pl, 0.4);
  CHECK(tp.family() == "tilted");
  const double z = power_integral(pl, 0.4);
  CHECK_THAT(tp.pdf(1.7), WithinRel(std::pow(pl.pdf(1.7), 0.4) / z, 1e-10));
  // Tilt of a tilt composes the exponents.
  CHECK_THAT(tilt(tp, 2.0).pdf(0.5), WithinRel(tilt(pl, 0.8).pdf(0.5), 1e-9));
}

TEST_CASE("mass uses the half-open convention", "[density]") {
  const Density g = gaussian(0, 1);
  CHECK_THAT(g.mass(Interval{-kInf, 0.0}), WithinAbs(0.5, 1e-15));
  CHECK_THAT(g.mass(Region{{-kInf, -1.0}, {1.0, kInf}}),
             WithinRel(2.0 * (1.0 - 0.84134474606854295), 1e-13));
  // Far tail keeps relative precision.
  CHECK_THAT(g.mass(Interval{7.0, 8.0}),
             WithinRel(g.ccdf(7.0) - g.ccdf(8.0), 1e-14));
  CHECK(g.mass(Interval{7.0, 8.0}) > 0.0);
}

TEST_CASE("construction rejects bad parameters", "[density]") {
  CHECK_THROWS_AS(uniform(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(gaussian(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(laplacian(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(exponential(-1.0), DomainError);
  CHECK_THROWS_AS(piecewise_linear({{0.0, 0.0}, {1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(tilt(gaussian(0, 1), 0.0), DomainError);
}

TEST_CASE("json round trip", "[density]") {
  for (const auto& d : zoo()) {
    INFO(d.to_json().dump());
    const Density back = density_from_json(d.to_json());
    for (double x : {-1.3, 0.1, 0.7, 1.9}) {
      CHECK_THAT(back.pdf(x), WithinAbs(d.pdf(x), 1e-12));
    }
  }
}

TEST_CASE("json errors name the field", "[density]") {
  using nlohmann::json;
  try {
    density_from_json(json{{"family", "gaussian"}, {"mean", 0}}, "source");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("source.sigma") != std::string::npos);
  }
  CHECK_THROWS_AS(density_from_json(json{{"family", "cauchy"}}), ConfigError);
  CHECK_THROWS_AS(density_from_json(json{{"family", "uniform"}, {"a", 1}, {"b", 0}}),
                  ConfigError);
}

TEST_CASE("concurrent evaluation", "[density]") {
  const Density d = tilt(piecewise_linear({{0, 1}, {1, 2}, {2, 0.2}}), 0.5);
  std::vector<double> expected;
  for (int i = 0; i < 64; ++i) expected.push_back(d.cdf(0.03 * i));
  std::vector<std::thread> pool;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&] {
      for (int i = 0; i < 64; ++i) {
        if (d.cdf(0.03 * i) != expected[i]) ++mismatches;
      }
    });
  }
  for (auto& t : pool) t.join();
  CHECK(mismatches == 0);
}
