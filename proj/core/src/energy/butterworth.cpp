#include "ffsim/energy/butterworth.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace ffsim::energy {

namespace {

using Complex = std::complex<double>;

// Expands prod (z - r_k) into polynomial coefficients, highest power first.
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> coeffs{1.0};
  for (const Complex& r : roots) {
    coeffs.push_back(0.0);
    for (std::size_t i = coeffs.size() - 1; i > 0; --i)
      coeffs[i] -= r * coeffs[i - 1];
  }
  return coeffs;
}

}  // namespace

IirCoeffs butterworth_lowpass(int order, double fc_hz, double fs_hz) {
  if (order < 1) throw FilterDomainError("filter order must be >= 1");
  if (fs_hz <= 0.0) throw FilterDomainError("sampling rate must be positive");
  if (fc_hz <= 0.0 || fc_hz >= fs_hz / 2.0)
    throw FilterDomainError("cutoff must lie strictly below the Nyquist rate");

  const double pi = std::numbers::pi;
  // Prewarped analog cutoff; the bilinear transform uses k = 2 fs.
  const double k = 2.0 * fs_hz;
  const double warped = k * std::tan(pi * fc_hz / fs_hz);

  // Left-half-plane Butterworth poles scaled by the warped cutoff, mapped to
  // the z-plane via s -> k (z-1)/(z+1)  <=>  z = (1 + s/k) / (1 - s/k).
  std::vector<Complex> zpoles;
  for (int m = 0; m < order; ++m) {
    double theta = pi * (2.0 * m + 1.0) / (2.0 * order) + pi / 2.0;
    Complex s = warped * Complex(std::cos(theta), std::sin(theta));
    zpoles.push_back((1.0 + s / k) / (1.0 - s / k));
  }
  // All zeros land at z = -1.
  std::vector<Complex> zzeros(static_cast<std::size_t>(order), Complex(-1.0, 0.0));

  std::vector<Complex> az = poly_from_roots(zpoles);
  std::vector<Complex> bz = poly_from_roots(zzeros);

  IirCoeffs c;
  c.a.resize(az.size());
  c.b.resize(bz.size());
  for (std::size_t i = 0; i < az.size(); ++i) c.a[i] = az[i].real();

  // Normalize to unit DC gain: H(1) = g * B(1) / A(1) = 1.
  double a1 = 0.0, b1 = 0.0;
  for (const Complex& v : az) a1 += v.real();
  for (const Complex& v : bz) b1 += v.real();
  double gain = a1 / b1;
  for (std::size_t i = 0; i < bz.size(); ++i) c.b[i] = gain * bz[i].real();
  return c;
}

double magnitude_response(const IirCoeffs& c, double f_hz, double fs_hz) {
  const double omega = 2.0 * std::numbers::pi * f_hz / fs_hz;
  Complex num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < c.b.size(); ++n)
    num += c.b[n] * std::exp(Complex(0.0, -omega * static_cast<double>(n)));
  for (std::size_t n = 0; n < c.a.size(); ++n)
    den += c.a[n] * std::exp(Complex(0.0, -omega * static_cast<double>(n)));
  return std::abs(num / den);
}

double max_pole_radius(const IirCoeffs& c) {
  const std::size_t n = c.a.size() - 1;
  if (n == 0) return 0.0;
  // Companion-matrix eigenvalues of the monic denominator.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    companion(0, static_cast<Eigen::Index>(i)) = -c.a[i + 1] / c.a[0];
    if (i + 1 < n)
      companion(static_cast<Eigen::Index>(i) + 1, static_cast<Eigen::Index>(i)) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  double radius = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    radius = std::max(radius, std::abs(solver.eigenvalues()[i]));
  return radius;
}

std::vector<double> filter_signal(const IirCoeffs& c,
                                  const std::vector<double>& x) {
  const std::size_t nb = c.b.size(), na = c.a.size();
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nb && i <= n; ++i) acc += c.b[i] * x[n - i];
    for (std::size_t i = 1; i < na && i <= n; ++i) acc -= c.a[i] * y[n - i];
    y[n] = acc / c.a[0];
  }
  return y;
}

CurrentTrace apply_filter(const IirCoeffs& c, const CurrentTrace& x) {
  CurrentTrace out = x;
  out.samples_ma = filter_signal(c, x.samples_ma);
  return out;
}

}  // namespace ffsim::energy
