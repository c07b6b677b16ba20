#include "vortexlab/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortexlab::fft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        Complex u = a[i + j];
        Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<Complex> dft_direct(const std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<Complex> out(n);
  const double sgn = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sgn * kTwoPi * static_cast<double>(k * j % n) / static_cast<double>(n);
      acc += a[j] * Complex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

std::vector<Complex> dft(const std::vector<Complex>& a, bool inverse) {
  if (a.empty()) throw std::invalid_argument("dft: empty input");
  std::vector<Complex> out;
  if (is_pow2(a.size())) {
    out = a;
    fft_radix2(out, inverse);
  } else {
    out = dft_direct(a, inverse);
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(a.size());
    for (auto& c : out) c *= scale;
  }
  return out;
}

Eigen::VectorXcd spectral_derivative(const Eigen::VectorXcd& samples) {
  const auto n = static_cast<std::size_t>(samples.size());
  if (n < 2) throw std::invalid_argument("spectral_derivative: need at least 2 samples");
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = samples(static_cast<Eigen::Index>(i));
  auto hat = dft(a, false);
  // wavenumber m in (-n/2, n/2]; Nyquist zeroed.
  for (std::size_t k = 0; k < n; ++k) {
    double m = (k <= n / 2) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    if (2 * k == n) m = 0.0;
    hat[k] *= Complex(0.0, kTwoPi * m);
  }
  auto der = dft(hat, true);
  Eigen::VectorXcd out(samples.size());
  for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = der[i];
  return out;
}

Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& samples) {
  Eigen::VectorXcd c = samples.cast<Complex>();
  return spectral_derivative(c).real();
}

Eigen::MatrixXcd spectral_derivative_cols(const Eigen::MatrixXcd& samples) {
  Eigen::MatrixXcd out(samples.rows(), samples.cols());
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out.col(j) = spectral_derivative(Eigen::VectorXcd(samples.col(j)));
  return out;
}

Eigen::MatrixXd spectral_derivative_cols(const Eigen::MatrixXd& samples) {
  Eigen::MatrixXd out(samples.rows(), samples.cols());
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out.col(j) = spectral_derivative(Eigen::VectorXd(samples.col(j)));
  return out;
}

Complex spectral_eval(const Eigen::VectorXcd& samples, double t) {
  const auto n = static_cast<std::size_t>(samples.size());
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = samples(static_cast<Eigen::Index>(i));
  auto hat = dft(a, false);
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double m = (k <= n / 2) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    if (2 * k == n) {
      // split the Nyquist mode symmetrically
      acc += hat[k] * std::cos(kTwoPi * m * t);
      continue;
    }
    acc += hat[k] * Complex(std::cos(kTwoPi * m * t), std::sin(kTwoPi * m * t));
  }
  return acc / static_cast<double>(n);
}

}  // namespace vortexlab::fft

namespace vortexlab::quad {

double periodic_mean(const Eigen::VectorXd& f) {
  if (f.size() == 0) throw std::invalid_argument("periodic_mean: empty input");
  return f.mean();
}

Eigen::VectorXd cumtrapz_periodic(const Eigen::VectorXd& f, double* full) {
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("cumtrapz_periodic: need at least 2 samples");
  const double h = 1.0 / static_cast<double>(n);
  Eigen::VectorXd out(n);
  out(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) out(i) = out(i - 1) + 0.5 * h * (f(i - 1) + f(i));
  if (full) *full = out(n - 1) + 0.5 * h * (f(n - 1) + f(0));
  return out;
}

double integrate_uniform(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 2) return 0.0;
  const Eigen::Index intervals = n - 1;
  double acc = 0.0;
  Eigen::Index start = 0;
  if (intervals % 2 == 1) {
    if (n >= 3) {
      // 3rd-order open formula for the first interval
      acc += h * (5.0 * f(0) + 8.0 * f(1) - f(2)) / 12.0;
    } else {
      acc += 0.5 * h * (f(0) + f(1));
    }
    start = 1;
  }
  for (Eigen::Index i = start; i + 2 < n; i += 2) {
    acc += h * (f(i) + 4.0 * f(i + 1) + f(i + 2)) / 3.0;
  }
  return acc;
}

Eigen::VectorXd tail_integrals(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("tail_integrals: need at least 2 samples");
  // Local 4th-order antiderivative increments: integrate each interval with a
  // cubic through four neighboring nodes, then accumulate from the right.
  Eigen::VectorXd inc(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (i == 0 && n >= 4) {
      inc(i) = h * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3)) / 24.0;
    } else if (i + 2 >= n && n >= 4) {
      inc(i) = h * (9.0 * f(n - 1) + 19.0 * f(n - 2) - 5.0 * f(n - 3) + f(n - 4)) / 24.0;
    } else if (i >= 1 && i + 2 < n) {
      inc(i) = h * (-f(i - 1) + 13.0 * f(i) + 13.0 * f(i + 1) - f(i + 2)) / 24.0;
    } else {
      inc(i) = 0.5 * h * (f(i) + f(i + 1));
    }
  }
  Eigen::VectorXd tail(n);
  tail(n - 1) = 0.0;
  for (Eigen::Index i = n - 2; i >= 0; --i) tail(i) = tail(i + 1) + inc(i);
  return tail;
}

double fit_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: bad input sizes");
  const double xm = x.mean();
  const double ym = y.mean();
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    num += (x(i) - xm) * (y(i) - ym);
    den += (x(i) - xm) * (x(i) - xm);
  }
  if (den == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return num / den;
}

}  // namespace vortexlab::quad
