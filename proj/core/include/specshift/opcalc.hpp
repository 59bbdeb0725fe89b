#pragma once

#include <complex>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "specshift/funlib.hpp"

namespace specshift {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Dense self-adjoint matrix; the finite-dimensional model of a compact self-adjoint operator.
///
/// Construction replaces M by (M + M*)/2, so stored entries satisfy
/// a(j,k) == conj(a(k,j)) bit for bit and the diagonal is real. Non-finite entries
/// are rejected with NonFinite.
class HermitianOperator {
public:
  explicit HermitianOperator(const ComplexMatrix& m);
  explicit HermitianOperator(const RealMatrix& m);

  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(std::span<const double> values);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::complex<double> operator()(int j, int k) const { return m_(j, k); }

  /// True when every off-diagonal entry is exactly zero.
  bool is_diagonal() const noexcept;
  double max_abs_entry() const noexcept;

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);
  friend bool operator==(const HermitianOperator& a, const HermitianOperator& b) {
    return a.m_ == b.m_;
  }

private:
  struct Trusted {};
  HermitianOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Eigenvalues ascending, eigenvectors as unitary columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Throws ConvergenceFailure when the eigensolver result misses
/// ||U*U - I||_max <= 1e-10 or ||U diag(l) U* - A||_max <= 1e-10 max(1, ||A||_max).
SpectralDecomposition decompose(const HermitianOperator& a);

/// f(A) = U diag(f(l_1), ..., f(l_n)) U*. DomainError if f is undefined on the spectrum.
HermitianOperator apply_function(const ScalarFunction& f, const HermitianOperator& a);
HermitianOperator apply_function(const ScalarFunction& f, const SpectralDecomposition& eig);

enum class Schatten { one, two, infinity };

std::string to_string(Schatten p);

/// Schatten-p norm from singular values; X need not be Hermitian.
double schatten_norm(const ComplexMatrix& x, Schatten p);
/// Same value, computed from |eigenvalues|.
double schatten_norm(const HermitianOperator& x, Schatten p);

/// max(1, ||A||, ||B||) in operator norm; normalizes relative tolerances.
double operator_scale(const HermitianOperator& a, const HermitianOperator& b);

struct Truncation {
  HermitianOperator truncated;
  int discarded_rank = 0;
};

/// A chi_[-delta, delta](A): eigenvalues with |l| > delta are set to zero.
Truncation spectral_truncation(const HermitianOperator& a, double delta);

/// A pair (A, B) with its Schatten-1 and operator-norm increment ratios for one function.
struct RatioWitness {
  HermitianOperator a;
  HermitianOperator b;
  std::string function_id;
  double increment_s1 = 0.0;     // ||f(B) - f(A)||_1
  double perturbation_s1 = 0.0;  // ||B - A||_1
  double increment_op = 0.0;
  double perturbation_op = 0.0;
  double ratio_s1 = 0.0;
  double ratio_op = 0.0;

  double ratio(Schatten p) const { return p == Schatten::one ? ratio_s1 : ratio_op; }
};

/// Throws DimensionMismatch, or DegeneratePair when ||B - A||_1 <= 1e-14 dim scale.
RatioWitness increment_ratio(const ScalarFunction& f, const HermitianOperator& a,
                             const HermitianOperator& b);

struct TraceTransferReport {
  double delta = 0.0;
  double shift = 0.0;  // f(0), subtracted before everything else
  int discarded_rank_a = 0;
  int discarded_rank_b = 0;
  double tail_a_s1 = 0.0;  // ||f(A) - f(A_d)||_1
  double tail_b_s1 = 0.0;
  int tail_a_rank = 0;
  int tail_b_rank = 0;
  double core_s1 = 0.0;   // ||f(A_d) - f(B_d)||_1
  double total_s1 = 0.0;  // ||f(A) - f(B)||_1
  double residual_s1 = 0.0;
  double scale = 1.0;
};

/// Splits f(A) - f(B) into two finite-rank spectral tails and the increment of the
/// truncated pair, and measures how well the pieces reassemble.
TraceTransferReport trace_transfer_check(const ScalarFunction& f, double delta,
                                         const HermitianOperator& a, const HermitianOperator& b);

/// Number of singular values above tol.
int numerical_rank(const ComplexMatrix& x, double tol);

}  // namespace specshift
