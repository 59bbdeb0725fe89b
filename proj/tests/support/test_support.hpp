#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specshift/opcalc.hpp"
#include "specshift/random.hpp"

namespace specshift::testing {

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Direct matrix polynomial c0 I + c1 A + c2 A^2 + ... by repeated multiplication.
inline ComplexMatrix matrix_polynomial(const std::vector<double>& c, const ComplexMatrix& a) {
  const auto n = a.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  ComplexMatrix power = ComplexMatrix::Identity(n, n);
  for (double ck : c) {
    acc += ck * power;
    power = power * a;
  }
  return acc;
}

/// sin(A) from its Taylor series with long double accumulation; accurate to a few ulp
/// for ||A|| <= 4 with 60 terms.
inline ComplexMatrix matrix_sin_series(const ComplexMatrix& a) {
  using LMat = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  const LMat al = a.cast<std::complex<long double>>();
  LMat term = al;
  LMat acc = al;
  for (int k = 1; k < 60; ++k) {
    term = (term * al * al) / static_cast<long double>(-(2 * k) * (2 * k + 1));
    acc += term;
  }
  return acc.cast<std::complex<double>>();
}

/// Closed-form eigenvalues (ascending) of a Hermitian matrix of size 1 or 2.
inline std::vector<double> small_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() == 1) return {m(0, 0).real()};
  const double a = m(0, 0).real(), d = m(1, 1).real();
  const double r = std::hypot((a - d) / 2, std::abs(m(0, 1)));
  return {(a + d) / 2 - r, (a + d) / 2 + r};
}

/// f(M) for Hermitian M of size 1 or 2 through the spectral projections
/// P = (M - mu I) / (lambda - mu).
template <class F>
ComplexMatrix small_apply(F&& f, const ComplexMatrix& m) {
  const std::vector<double> ev = small_eigenvalues(m);
  const auto n = m.rows();
  if (n == 1 || ev[1] - ev[0] < 1e-300) return f(ev[0]) * ComplexMatrix::Identity(n, n);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix hi = (m - ev[0] * id) / (ev[1] - ev[0]);
  return f(ev[1]) * hi + f(ev[0]) * (id - hi);
}

/// Trace norm of a Hermitian matrix of size 1 or 2.
inline double small_s1(const ComplexMatrix& m) {
  double sum = 0.0;
  for (double v : small_eigenvalues(m)) sum += std::abs(v);
  return sum;
}

inline double random_in(Rng& rng, double lo, double hi) { return uniform_real(rng, lo, hi); }

}  // namespace specshift::testing
