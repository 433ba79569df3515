#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sympb/periodic_series.hpp"

using namespace sympb;

namespace {

constexpr double kPi = std::numbers::pi;

// 1 + 0.3 cos(2x) - 0.2 sin(5x) on period 2 pi: every derivative is known in closed form.
double f(double x) { return 1.0 + 0.3 * std::cos(2 * x) - 0.2 * std::sin(5 * x); }
double df(double x) { return -0.6 * std::sin(2 * x) - std::cos(5 * x); }
double d3f(double x) { return 2.4 * std::sin(2 * x) + 25.0 * std::cos(5 * x); }

PeriodicSeries sampled(int M) {
  std::vector<double> s(M);
  for (int i = 0; i < M; ++i) s[i] = f(2 * kPi * i / M);
  return PeriodicSeries::from_samples(s, 2 * kPi);
}

}  // namespace

TEST_CASE("trigonometric interpolation reproduces a band-limited function and its derivatives") {
  const auto p = sampled(64);
  CHECK(p.bandwidth() == 5);
  CHECK(p.mean() == doctest::Approx(1.0).epsilon(1e-15));
  for (double x : {0.0, 0.37, 1.9, 4.4, 6.1}) {
    CHECK(std::abs(p(x) - f(x)) < 1e-14);
    CHECK(std::abs(p.derivative(x, 1) - df(x)) < 1e-13);
    CHECK(std::abs(p.derivative(x, 3) - d3f(x)) < 1e-11);
  }
  CHECK(p.cosine_coefficient(2) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(p.sine_coefficient(5) == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("derivatives and Taylor coefficients agree with single-order evaluation") {
  const auto p = sampled(32);
  std::vector<double> d(5), taylor(5);
  p.derivatives(0.8, d);
  p.taylor_coefficients(0.8, taylor);
  double fact = 1.0;
  for (int n = 0; n < 5; ++n) {
    if (n > 0) fact *= n;
    CHECK(std::abs(d[n] - p.derivative(0.8, n)) < 1e-12);
    CHECK(std::abs(taylor[n] * fact - d[n]) < 1e-11);
  }
}

TEST_CASE("oscillating integral is the antiderivative of f minus its mean") {
  const auto p = sampled(32);
  // int_0^x 0.3 cos 2t - 0.2 sin 5t = 0.15 sin 2x + 0.04 (cos 5x - 1)
  for (double x : {0.4, 2.0, 5.5}) CHECK(std::abs(p.oscillating_integral(x) - (0.15 * std::sin(2 * x) + 0.04 * (std::cos(5 * x) - 1))) < 1e-14);
}

TEST_CASE("combine and differentiated are linear operations on the series") {
  const auto p = sampled(32);
  const auto q = PeriodicSeries::combine(2.0, p, -1.0, p.differentiated(), 0.5);
  for (double x : {0.1, 3.3}) CHECK(std::abs(q(x) - (2 * f(x) - df(x) + 0.5)) < 1e-13);
}

TEST_CASE("under-resolved samples are flagged") {
  // cos(26 x) on 64 samples sits above the 3M/8 = 24 resolution limit.
  std::vector<double> s(64);
  for (int i = 0; i < 64; ++i) s[i] = std::cos(26 * 2 * kPi * i / 64.0);
  CHECK_FALSE(PeriodicSeries::from_samples(s, 2 * kPi).resolved());
  CHECK(sampled(64).resolved());
}

TEST_CASE("trig_coefficients recovers cosine and sine amplitudes of random tables") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(9), b(9), s(32, 0.0);
    for (int p = 0; p <= 8; ++p) {
      a[p] = u(rng);
      b[p] = p ? u(rng) : 0.0;
    }
    for (int i = 0; i < 32; ++i)
      for (int p = 0; p <= 8; ++p) s[i] += a[p] * std::cos(2 * kPi * p * i / 32) + b[p] * std::sin(2 * kPi * p * i / 32);
    std::vector<double> c, sn;
    trig_coefficients(s, 8, c, sn);
    for (int p = 0; p <= 8; ++p) {
      CHECK(std::abs(c[p] - a[p]) < 1e-14);
      CHECK(std::abs(sn[p] - b[p]) < 1e-14);
    }
  }
}
