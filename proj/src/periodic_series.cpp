#include "sympb/periodic_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "sympb/errors.hpp"

namespace sympb {

namespace {

constexpr int kResync = 32;

// Calls f(m, exp(i m w t)) for m = 1..K, refreshing the phase periodically so the
// recurrence error stays near machine precision.
template <class F>
void for_each_phase(int K, double omega, double t, F&& f) {
  const std::complex<double> step = std::polar(1.0, omega * t);
  std::complex<double> z = step;
  for (int m = 1; m <= K; ++m) {
    if (m % kResync == 0) z = std::polar(1.0, omega * t * m);
    f(m, z);
    z *= step;
  }
}

}  // namespace

std::vector<std::complex<double>> forward_dft(std::span<const double> samples) {
  Eigen::FFT<double> fft;
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

void trig_coefficients(std::span<const double> samples, int max_mode, std::vector<double>& cos,
                       std::vector<double>& sin) {
  const int M = static_cast<int>(samples.size());
  if (max_mode >= (M + 1) / 2) throw InvalidInput("trig_coefficients: too many modes for grid");
  const auto X = forward_dft(samples);
  cos.assign(max_mode + 1, 0.0);
  sin.assign(max_mode + 1, 0.0);
  cos[0] = X[0].real() / M;
  for (int p = 1; p <= max_mode; ++p) {
    cos[p] = 2.0 * X[p].real() / M;
    sin[p] = -2.0 * X[p].imag() / M;
  }
}

PeriodicSeries::PeriodicSeries(double period, double mean, std::vector<std::complex<double>> modes,
                               bool resolved)
    : period_(period),
      omega_(2.0 * std::numbers::pi / period),
      mean_(mean),
      modes_(std::move(modes)),
      resolved_(resolved) {}

PeriodicSeries PeriodicSeries::from_samples(std::span<const double> samples, double period,
                                            double cutoff) {
  const int M = static_cast<int>(samples.size());
  if (M < 4) throw InvalidInput("PeriodicSeries: need at least 4 samples");
  const auto X = forward_dft(samples);
  const int half = (M - 1) / 2;  // Nyquist mode excluded for even M
  double scale = std::abs(X[0]);
  for (int m = 1; m <= half; ++m) scale = std::max(scale, std::abs(X[m]));
  int K = 0;
  for (int m = 1; m <= half; ++m)
    if (std::abs(X[m]) > cutoff * scale) K = m;
  std::vector<std::complex<double>> modes(K);
  for (int m = 1; m <= K; ++m) modes[m - 1] = X[m] / static_cast<double>(M);
  const bool resolved = K <= (3 * M) / 8;
  return PeriodicSeries(period, X[0].real() / M, std::move(modes), resolved);
}

void PeriodicSeries::derivatives(double t, std::span<double> out) const {
  const int n = static_cast<int>(out.size());
  std::fill(out.begin(), out.end(), 0.0);
  if (n == 0) return;
  for_each_phase(bandwidth(), omega_, t, [&](int m, std::complex<double> z) {
    std::complex<double> term = modes_[m - 1] * z;
    const std::complex<double> factor(0.0, m * omega_);
    for (int k = 0; k < n; ++k) {
      out[k] += 2.0 * term.real();
      term *= factor;
    }
  });
  out[0] += mean_;
}

void PeriodicSeries::taylor_coefficients(double t, std::span<double> out) const {
  const int n = static_cast<int>(out.size());
  std::fill(out.begin(), out.end(), 0.0);
  if (n == 0) return;
  for_each_phase(bandwidth(), omega_, t, [&](int m, std::complex<double> z) {
    std::complex<double> term = modes_[m - 1] * z;
    for (int k = 0; k < n; ++k) {
      out[k] += 2.0 * term.real();
      term *= std::complex<double>(0.0, m * omega_ / (k + 1));
    }
  });
  out[0] += mean_;
}

double PeriodicSeries::derivative(double t, int order) const {
  if (order < 0) throw InvalidInput("PeriodicSeries: negative derivative order");
  const std::complex<double> i_pow = std::pow(std::complex<double>(0.0, 1.0), order);
  double sum = 0.0;
  for_each_phase(bandwidth(), omega_, t, [&](int m, std::complex<double> z) {
    sum += 2.0 * std::pow(m * omega_, order) * (modes_[m - 1] * z * i_pow).real();
  });
  return sum + (order == 0 ? mean_ : 0.0);
}

double PeriodicSeries::oscillating_integral(double t) const {
  double sum = 0.0;
  for_each_phase(bandwidth(), omega_, t, [&](int m, std::complex<double> z) {
    const std::complex<double> denom(0.0, m * omega_);
    sum += 2.0 * (modes_[m - 1] * (z - 1.0) / denom).real();
  });
  return sum;
}

double PeriodicSeries::cosine_coefficient(int m) const {
  if (m == 0) return mean_;
  if (m > bandwidth()) return 0.0;
  return 2.0 * modes_[m - 1].real();
}

double PeriodicSeries::sine_coefficient(int m) const {
  if (m == 0 || m > bandwidth()) return 0.0;
  return -2.0 * modes_[m - 1].imag();
}

PeriodicSeries PeriodicSeries::differentiated(int order) const {
  std::vector<std::complex<double>> modes(modes_.size());
  for (int m = 1; m <= bandwidth(); ++m)
    modes[m - 1] = modes_[m - 1] * std::pow(std::complex<double>(0.0, m * omega_), order);
  return PeriodicSeries(period_, order == 0 ? mean_ : 0.0, std::move(modes), resolved_);
}

PeriodicSeries PeriodicSeries::combine(double alpha, const PeriodicSeries& a, double beta,
                                       const PeriodicSeries& b, double shift) {
  if (std::abs(a.period_ - b.period_) > 1e-14 * a.period_)
    throw InvalidInput("PeriodicSeries::combine: period mismatch");
  const int K = std::max(a.bandwidth(), b.bandwidth());
  std::vector<std::complex<double>> modes(K);
  for (int m = 1; m <= K; ++m) {
    std::complex<double> v = 0.0;
    if (m <= a.bandwidth()) v += alpha * a.modes_[m - 1];
    if (m <= b.bandwidth()) v += beta * b.modes_[m - 1];
    modes[m - 1] = v;
  }
  return PeriodicSeries(a.period_, alpha * a.mean_ + beta * b.mean_ + shift, std::move(modes),
                        a.resolved_ && b.resolved_);
}

}  // namespace sympb
