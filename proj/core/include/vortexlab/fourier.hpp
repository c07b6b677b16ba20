#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Spectral differentiation and quadrature helpers for uniformly sampled
// 1-periodic data. Differentiation goes through the discrete Fourier
// transform, so it is exact (to rounding) on trigonometric polynomials
// below the Nyquist frequency and exponentially accurate on analytic data.

namespace vortexlab::fft {

using Complex = std::complex<double>;

/// Forward/inverse DFT, unnormalized forward, 1/N on the inverse.
/// Radix-2 when the length is a power of two, direct evaluation otherwise.
std::vector<Complex> dft(const std::vector<Complex>& a, bool inverse);

/// Derivative of a smooth 1-periodic function from its samples f(i/N),
/// i = 0..N-1. The Nyquist mode is dropped so real data stays real.
Eigen::VectorXcd spectral_derivative(const Eigen::VectorXcd& samples);
Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& samples);

/// Column-wise derivative of loop samples (rows = sample index).
Eigen::MatrixXcd spectral_derivative_cols(const Eigen::MatrixXcd& samples);
Eigen::MatrixXd spectral_derivative_cols(const Eigen::MatrixXd& samples);

/// Trigonometric interpolation of periodic samples at parameter t in [0,1).
Complex spectral_eval(const Eigen::VectorXcd& samples, double t);

}  // namespace vortexlab::fft

namespace vortexlab::quad {

/// Mean of samples = trapezoid rule over the full period (Haar mass 1).
double periodic_mean(const Eigen::VectorXd& f);

/// Cumulative trapezoid of samples on t_i = i/N; out[i] ~ int_0^{t_i} f.
/// Also returns the full-period integral (out has N entries, the value at
/// t=1 is returned separately).
Eigen::VectorXd cumtrapz_periodic(const Eigen::VectorXd& f, double* full = nullptr);

/// Integral of f over [x[0], x[last]] on a uniform grid, composite Simpson
/// with a third-order closing formula on an odd leftover interval. O(h^4).
double integrate_uniform(const Eigen::VectorXd& f, double h);

/// Right tail integrals T[i] = int_{s_i}^{s_last} f ds for a uniform grid,
/// fourth-order accurate, additive by construction: T[i] - T[j] is the
/// integral over [s_i, s_j].
Eigen::VectorXd tail_integrals(const Eigen::VectorXd& f, double h);

/// Least-squares slope of y against x.
double fit_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace vortexlab::quad
