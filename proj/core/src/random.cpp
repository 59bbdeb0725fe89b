#include "specshift/random.hpp"

#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace specshift {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

double uniform_real(Rng& rng, double lo, double hi) {
  return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
}

double standard_normal(Rng& rng) {
  return boost::random::normal_distribution<double>(0.0, 1.0)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

ComplexMatrix haar_unitary(Rng& rng, int dim) {
  ComplexMatrix z(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j) z(j, k) = {standard_normal(rng), standard_normal(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const double mod = std::abs(r(k, k));
    if (mod > 0.0) q.col(k) *= r(k, k) / mod;
  }
  return q;
}

HermitianOperator random_hermitian(Rng& rng, int dim, double lo, double hi,
                                   bool complex_entries) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    m(j, j) = uniform_real(rng, lo, hi);
    for (int k = j + 1; k < dim; ++k) {
      const double re = uniform_real(rng, lo, hi);
      const double im = complex_entries ? uniform_real(rng, lo, hi) : 0.0;
      m(j, k) = {re, im};
      m(k, j) = {re, -im};
    }
  }
  return HermitianOperator(m);
}

}  // namespace specshift
