#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "specshift/opcalc.hpp"

namespace specshift {

/// Engine used for every seeded computation. Distributions come from Boost.Random,
/// whose output is specified bit for bit, so seeded results do not depend on the
/// standard library in use.
using Rng = std::mt19937_64;

/// Independent substream seed for (seed, stream); splitmix64 finalizer over both words.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

double uniform_real(Rng& rng, double lo, double hi);
double standard_normal(Rng& rng);
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal folded back into Q.
ComplexMatrix haar_unitary(Rng& rng, int dim);

/// Hermitian matrix with real and imaginary parts of each upper entry uniform in [lo, hi]
/// (imaginary parts zero when `complex_entries` is false).
HermitianOperator random_hermitian(Rng& rng, int dim, double lo, double hi,
                                   bool complex_entries = true);

}  // namespace specshift
