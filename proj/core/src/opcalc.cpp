#include "specshift/opcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "specshift/error.hpp"

namespace specshift {

namespace {

void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has NaN or infinite entries");
}

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "operator must be a non-empty square matrix");
  }
}

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operators have dimensions " +
                                                  std::to_string(a.dim()) + " and " +
                                                  std::to_string(b.dim()));
  }
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  for (Eigen::Index j = 0; j < h.rows(); ++j) h(j, j) = h(j, j).real();
  return h;
}

RealVector hermitian_eigenvalues(const HermitianOperator& x) {
  const int n = x.dim();
  if (x.is_diagonal()) {
    RealVector d(n);
    for (int i = 0; i < n; ++i) d(i) = x(i, i).real();
    return d;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

double norm_from_moduli(const RealVector& s, Schatten p) {
  switch (p) {
    case Schatten::one: return s.sum();
    case Schatten::two: return std::sqrt(s.squaredNorm());
    case Schatten::infinity: return s.size() == 0 ? 0.0 : s.maxCoeff();
  }
  return 0.0;
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  require_square(m);
  require_finite(m);
  m_ = symmetrized(m);
}

HermitianOperator::HermitianOperator(const RealMatrix& m)
    : HermitianOperator(ComplexMatrix(m.cast<std::complex<double>>())) {}

HermitianOperator HermitianOperator::zero(int dim) {
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error(ErrorKind::NonFinite, "non-finite diagonal entry");
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
  }
  return HermitianOperator(std::move(m), Trusted{});
}

bool HermitianOperator::is_diagonal() const noexcept {
  for (Eigen::Index k = 0; k < m_.cols(); ++k)
    for (Eigen::Index j = 0; j < m_.rows(); ++j)
      if (j != k && m_(j, k) != std::complex<double>(0.0, 0.0)) return false;
  return true;
}

double HermitianOperator::max_abs_entry() const noexcept {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  return HermitianOperator(ComplexMatrix(a.m_ + b.m_));
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  return HermitianOperator(ComplexMatrix(a.m_ - b.m_));
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(ComplexMatrix(s * a.m_));
}

SpectralDecomposition decompose(const HermitianOperator& a) {
  const int n = a.dim();
  SpectralDecomposition out;

  if (a.is_diagonal()) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix::Zero(n, n);
    for (int c = 0; c < n; ++c) {
      out.eigenvalues(c) = a(order[c], order[c]).real();
      out.eigenvectors(order[c], c) = 1.0;
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "eigenvalue iteration did not converge");
  }
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  const ComplexMatrix& u = out.eigenvectors;
  const double unitarity =
      (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const double reconstruction =
      (u * out.eigenvalues.cast<std::complex<double>>().asDiagonal() * u.adjoint() - a.matrix())
          .cwiseAbs()
          .maxCoeff();
  if (unitarity > 1e-10 || reconstruction > 1e-10 * std::max(1.0, a.max_abs_entry())) {
    throw Error(ErrorKind::ConvergenceFailure,
                "eigendecomposition misses tolerance (unitarity " + std::to_string(unitarity) +
                    ", reconstruction " + std::to_string(reconstruction) + ")");
  }
  return out;
}

HermitianOperator apply_function(const ScalarFunction& f, const SpectralDecomposition& eig) {
  const Eigen::Index n = eig.eigenvalues.size();
  Eigen::VectorXcd fl(n);
  for (Eigen::Index i = 0; i < n; ++i) fl(i) = f(eig.eigenvalues(i));
  // f constant on the spectrum: f(A) = cI exactly.
  if ((fl.array() == fl(0)).all()) {
    return HermitianOperator(ComplexMatrix(fl(0) * ComplexMatrix::Identity(n, n)));
  }
  const ComplexMatrix& u = eig.eigenvectors;
  return HermitianOperator(ComplexMatrix(u * fl.asDiagonal() * u.adjoint()));
}

HermitianOperator apply_function(const ScalarFunction& f, const HermitianOperator& a) {
  return apply_function(f, decompose(a));
}

std::string to_string(Schatten p) {
  switch (p) {
    case Schatten::one: return "schatten1";
    case Schatten::two: return "schatten2";
    case Schatten::infinity: return "operator";
  }
  return "unknown";
}

double schatten_norm(const ComplexMatrix& x, Schatten p) {
  require_finite(x);
  if (x.size() == 0) return 0.0;
  if (p == Schatten::two) return x.norm();
  if (x.rows() == 1 && x.cols() == 1) return std::abs(x(0, 0));
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  return norm_from_moduli(svd.singularValues(), p);
}

double schatten_norm(const HermitianOperator& x, Schatten p) {
  if (p == Schatten::two) return x.matrix().norm();
  return norm_from_moduli(hermitian_eigenvalues(x).cwiseAbs(), p);
}

double operator_scale(const HermitianOperator& a, const HermitianOperator& b) {
  return std::max({1.0, schatten_norm(a, Schatten::infinity), schatten_norm(b, Schatten::infinity)});
}

Truncation spectral_truncation(const HermitianOperator& a, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::BadParams, "truncation level must be a positive finite number");
  }
  const SpectralDecomposition eig = decompose(a);
  const Eigen::Index n = eig.eigenvalues.size();
  Eigen::VectorXcd kept(n);
  int discarded = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = eig.eigenvalues(i);
    if (std::abs(l) <= delta) {
      kept(i) = l;
    } else {
      kept(i) = 0.0;
      ++discarded;
    }
  }
  if (discarded == 0) return {a, 0};
  const ComplexMatrix& u = eig.eigenvectors;
  return {HermitianOperator(ComplexMatrix(u * kept.asDiagonal() * u.adjoint())), discarded};
}

RatioWitness increment_ratio(const ScalarFunction& f, const HermitianOperator& a,
                             const HermitianOperator& b) {
  require_same_dim(a, b);
  const HermitianOperator diff = b - a;
  const double pert_s1 = schatten_norm(diff, Schatten::one);
  const double scale = operator_scale(a, b);
  if (pert_s1 <= 1e-14 * a.dim() * scale) {
    throw Error(ErrorKind::DegeneratePair, "A and B coincide to working precision");
  }
  const HermitianOperator inc = apply_function(f, b) - apply_function(f, a);

  RatioWitness w{a, b, f.id()};
  w.perturbation_s1 = pert_s1;
  w.perturbation_op = schatten_norm(diff, Schatten::infinity);
  w.increment_s1 = schatten_norm(inc, Schatten::one);
  w.increment_op = schatten_norm(inc, Schatten::infinity);
  w.ratio_s1 = w.increment_s1 / w.perturbation_s1;
  w.ratio_op = w.increment_op / w.perturbation_op;
  return w;
}

int numerical_rank(const ComplexMatrix& x, double tol) {
  require_finite(x);
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  const RealVector& s = svd.singularValues();
  return static_cast<int>((s.array() > tol).count());
}

TraceTransferReport trace_transfer_check(const ScalarFunction& f, double delta,
                                         const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  TraceTransferReport r;
  r.delta = delta;
  r.shift = f(0.0);
  r.scale = operator_scale(a, b);
  const ScalarFunction g = f.shifted(r.shift);

  const Truncation ta = spectral_truncation(a, delta);
  const Truncation tb = spectral_truncation(b, delta);
  r.discarded_rank_a = ta.discarded_rank;
  r.discarded_rank_b = tb.discarded_rank;

  const HermitianOperator ga = apply_function(g, a);
  const HermitianOperator gb = apply_function(g, b);
  const HermitianOperator ga_d = apply_function(g, ta.truncated);
  const HermitianOperator gb_d = apply_function(g, tb.truncated);

  const ComplexMatrix tail_a = ga.matrix() - ga_d.matrix();
  const ComplexMatrix tail_b = gb.matrix() - gb_d.matrix();
  const ComplexMatrix core = ga_d.matrix() - gb_d.matrix();
  const ComplexMatrix total = ga.matrix() - gb.matrix();

  const double rank_tol = 1e-10 * a.dim() * r.scale;
  r.tail_a_s1 = schatten_norm(tail_a, Schatten::one);
  r.tail_b_s1 = schatten_norm(tail_b, Schatten::one);
  r.tail_a_rank = numerical_rank(tail_a, rank_tol);
  r.tail_b_rank = numerical_rank(tail_b, rank_tol);
  r.core_s1 = schatten_norm(core, Schatten::one);
  r.total_s1 = schatten_norm(total, Schatten::one);
  r.residual_s1 = schatten_norm(ComplexMatrix(total - (tail_a + core - tail_b)), Schatten::one);
  return r;
}

}  // namespace specshift
