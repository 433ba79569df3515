#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sympb {

// Relative threshold below which a Fourier mode counts as discretisation noise.
inline constexpr double kSpectralCutoff = 1e-14;

// Real trigonometric series f(t) = c0 + 2 Re sum_{m=1..K} c_m exp(i m w t), w = 2 pi / period.
class PeriodicSeries {
 public:
  PeriodicSeries() = default;
  PeriodicSeries(double period, double mean, std::vector<std::complex<double>> modes,
                 bool resolved = true);

  // Interpolates M equispaced samples on [0, period), dropping the Nyquist mode and
  // every mode past the last one above cutoff * (largest coefficient).
  static PeriodicSeries from_samples(std::span<const double> samples, double period,
                                     double cutoff = kSpectralCutoff);

  double operator()(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const;
  // Writes f, f', ..., f^(n-1) into out (n = out.size()).
  void derivatives(double t, std::span<double> out) const;

  // Taylor coefficients f^(n)(t) / n! for n = 0..out.size()-1.
  void taylor_coefficients(double t, std::span<double> out) const;

  // Integral over [0, t] of f - mean.
  double oscillating_integral(double t) const;

  double period() const { return period_; }
  double mean() const { return mean_; }
  int bandwidth() const { return static_cast<int>(modes_.size()); }
  bool resolved() const { return resolved_; }
  const std::vector<std::complex<double>>& modes() const { return modes_; }

  // Coefficients of the real form a0 + sum a_m cos(m w t) + b_m sin(m w t).
  double cosine_coefficient(int m) const;
  double sine_coefficient(int m) const;

  PeriodicSeries differentiated(int order = 1) const;

  // alpha * a + beta * b + shift; both operands must share the period.
  static PeriodicSeries combine(double alpha, const PeriodicSeries& a, double beta,
                                const PeriodicSeries& b, double shift = 0.0);

 private:
  double period_ = 1.0;
  double omega_ = 0.0;
  double mean_ = 0.0;
  std::vector<std::complex<double>> modes_;
  bool resolved_ = true;
};

// Plain complex DFT helpers around Eigen's FFT module.
std::vector<std::complex<double>> forward_dft(std::span<const double> samples);

// Cosine/sine coefficients of a real periodic table sampled on j/M, j = 0..M-1.
// cos[p], sin[p] for p = 0..max_mode (sin[0] = 0).
void trig_coefficients(std::span<const double> samples, int max_mode, std::vector<double>& cos,
                       std::vector<double>& sin);

}  // namespace sympb
