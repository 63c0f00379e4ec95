#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace taskbench {

// All sampling goes through these helpers instead of <random> distributions,
// whose output is implementation-defined. mt19937_64 itself is fully
// specified by the standard, so every seeded run is byte-identical on any
// platform.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be > 0.
std::uint64_t rng_below(Rng& rng, std::uint64_t n);

// FNV-1a over a byte string. Used for the published random-relation mapping
// and for deriving per-task seeds from a run seed.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

// Per-task seed: hash of (run seed, task string) so builds are independent
// of task ordering and job count.
std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& tag);

// Fisher-Yates with rng_below; deterministic for a given engine state.
template <typename T>
void shuffle_seeded(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// k distinct indices from [0, n), in selection order. k <= n.
std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k);

}  // namespace taskbench
