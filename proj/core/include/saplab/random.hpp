#pragma once

// Seed derivation for reproducible, parallel Monte Carlo: every
// (master seed, stream, index) triple gets its own generator.

#include <cstdint>
#include <random>

namespace saplab {

using Rng = std::mt19937_64;

/// One splitmix64 finalization step.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `index` within logical stream `stream`.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream,
                             std::uint64_t index);

Rng make_rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index);

/// Unit-mean exponential (Rayleigh power fading) draw.
double draw_fading(Rng& rng);

double draw_uniform(Rng& rng);

}  // namespace saplab
