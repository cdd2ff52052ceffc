#include "saplab/random.hpp"

namespace saplab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream,
                             std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master_seed) ^ stream) ^ index);
}

Rng make_rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index) {
  return Rng(substream_seed(master_seed, stream, index));
}

double draw_fading(Rng& rng) { return std::exponential_distribution<double>(1.0)(rng); }

double draw_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace saplab
