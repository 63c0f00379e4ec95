#include "taskbench/util/rng.hpp"

#include <cassert>
#include <cstring>

namespace taskbench {

std::uint64_t rng_below(Rng& rng, std::uint64_t n) {
  assert(n > 0);
  if (n == 1) return 0;
  // Masked rejection sampling: unbiased and engine-order deterministic.
  std::uint64_t mask = ~std::uint64_t{0};
  std::uint64_t limit = n - 1;
  int bits = 0;
  while (limit >> bits) ++bits;
  mask = (bits >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
  for (;;) {
    std::uint64_t x = rng() & mask;
    if (x < n) return x;
  }
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& tag) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(base_seed >> (8 * i));
  std::uint64_t h = fnv1a64(buf, 8);
  // continue the same FNV stream over the tag bytes
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
  assert(k <= n);
  // Partial Fisher-Yates over an index array.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng_below(rng, n - i));
    std::swap(idx[i], idx[j]);
    out.push_back(idx[i]);
  }
  return out;
}

}  // namespace taskbench
