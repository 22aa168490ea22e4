#pragma once

#include "superem/sinogram.hpp"

#include <cstdint>

namespace superem {

/// Two-step count simulation: scale `noise_free` so it sums to `target_counts`,
/// then replace every bin by a Poisson draw with that mean.
///
/// Draws are made in bin order from boost::random::mt19937_64 seeded with `seed`,
/// using boost::random::poisson_distribution (inversion below mean 10, PTRS
/// transformed rejection above); both are header-defined, so output is identical
/// on every platform. Throws std::invalid_argument for an all-zero or negative input.
Sinogram simulate_counts(const Sinogram& noise_free, std::int64_t target_counts, std::uint64_t seed);

}  // namespace superem
