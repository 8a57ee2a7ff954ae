#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "renyiq/density.hpp"
#include "renyiq/errors.hpp"
#include "renyiq/quadrature.hpp"

using namespace renyiq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constant and polynomial integrands", "[quadrature]") {
  const auto one = integrate([](double) { return 1.0; }, {0.0, 1.0});
  CHECK_THAT(one.value, WithinAbs(1.0, 1e-15));
  CHECK(one.error_estimate < 1e-14);
  CHECK(one.subdivisions >= 1);

  const auto sq = integrate([](double x) { return x * x; }, {0.0, 1.0});
  CHECK_THAT(sq.value, WithinAbs(1.0 / 3.0, 1e-10));
}

TEST_CASE("normal mass within eight sigma", "[quadrature]") {
  const auto res = integrate(
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); },
      {-8.0, 8.0});
  // mpmath: erf(8/sqrt(2))
  CHECK_THAT(res.value, WithinAbs(0.99999999999999876, 1e-9));
  CHECK(res.error_estimate <= 1e-9 * res.value);
}

TEST_CASE("infinite endpoints are rejected", "[quadrature]") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, {0.0, kInf}),
                  DomainError);
}

TEST_CASE("non-finite integrand raises divergence", "[quadrature]") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, {0.0, 1.0}),
                  DivergentIntegralError);
}

TEST_CASE("subdivision budget", "[quadrature]") {
  QuadratureOptions opts;
  opts.max_subdivisions = 3;
  opts.rel_tol = 1e-14;
  CHECK_THROWS_AS(
      integrate([](double x) { return std::sin(200.0 * x); }, {0.0, 10.0}, opts),
      NonConvergenceError);
}

TEST_CASE("deterministic results", "[quadrature]") {
  auto f = [](double x) { return std::exp(-std::abs(x)) * std::cos(3 * x); };
  const auto a = integrate(f, {-5.0, 7.0});
  const auto b = integrate(f, {-5.0, 7.0});
  CHECK(a.value == b.value);
  CHECK(a.subdivisions == b.subdivisions);
}

TEST_CASE("linearity and splitting", "[quadrature][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double a = u(rng), b = u(rng), s = 0.3 + std::abs(u(rng));
    auto f = [s](double x) { return std::exp(-x * x / s); };
    auto g = [](double x) { return std::abs(std::sin(x)); };
    const Interval dom{-1.0, 3.0};
    const double lhs =
        integrate([&](double x) { return a * f(x) + b * g(x); }, dom).value;
    const double rhs = a * integrate(f, dom).value + b * integrate(g, dom).value;
    CHECK_THAT(lhs, WithinAbs(rhs, 1e-9 * (std::abs(a) + std::abs(b)) * 4));

    const double cut = -1.0 + 4.0 * (u(rng) + 2.0) / 4.0;
    const double whole = integrate(f, dom).value;
    const double parts =
        integrate(f, {dom.lo, cut}).value + integrate(f, {cut, dom.hi}).value;
    CHECK_THAT(parts, WithinAbs(whole, 2e-9 * whole));
  }
}

TEST_CASE("kinks as breakpoints", "[quadrature]") {
  const double kink = 0.3;
  std::vector<double> bp{kink};
  const auto res = integrate([&](double x) { return std::abs(x - kink); },
                             {0.0, 1.0}, bp);
  CHECK_THAT(res.value, WithinAbs(0.5 * (0.09 + 0.49), 1e-14));
}

TEST_CASE("integrate_on_support follows heavy tails", "[quadrature]") {
  // ∫ e^{-|x|/5} over the line = 10; the core window alone misses most of it.
  const auto res = integrate_on_support(
      [](double x) { return std::exp(-std::abs(x) / 5.0); },
      Interval::real_line(), {-1.0, 1.0}, {});
  CHECK_THAT(res.value, WithinRel(10.0, 1e-9));
}

TEST_CASE("integrate_on_support reports divergence", "[quadrature]") {
  CHECK_THROWS_AS(integrate_on_support([](double) { return 1.0; },
                                       {0.0, kInf}, {0.0, 1.0}, {}),
                  DivergentIntegralError);
}

TEST_CASE("truncate_support", "[quadrature]") {
  const Interval u = truncate_support(uniform(0.0, 1.0), 1e-3);
  CHECK(u == Interval{0.0, 1.0});

  const Interval g = truncate_support(gaussian(0.0, 1.0), 1e-12);
  // mpmath: -sqrt(2) erfcinv(2e-12)
  CHECK_THAT(g.lo, WithinRel(-7.0344838253011319, 1e-10));
  CHECK_THAT(g.hi, WithinRel(7.0344838253011319, 1e-10));

  const Interval e = truncate_support(exponential(1.0, 0.0), 1e-12);
  CHECK(e.lo == 0.0);
  CHECK_THAT(e.hi, WithinRel(27.631021115928548, 1e-12));

  CHECK_THROWS_AS(truncate_support(gaussian(0.0, 1.0), 0.5), DomainError);
  CHECK_THROWS_AS(truncate_support(gaussian(0.0, 1.0), 0.0), DomainError);
}
