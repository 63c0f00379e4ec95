#pragma once

#include <cstdint>
#include <string>

namespace taskbench {

// SHA-256 (FIPS 180-4). Digests are used as dataset/manifest fingerprints
// and as cache keys for remote query responses.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(const std::string& s) { update(s.data(), s.size()); }
  // Lowercase hex digest; the object must not be reused afterwards.
  std::string hex_digest();

 private:
  void process_block(const unsigned char* block);
  std::uint32_t state_[8];
  unsigned char buf_[64];
  std::size_t buf_len_ = 0;
  std::uint64_t total_len_ = 0;
};

std::string sha256_hex(const std::string& data);
// Throws DataError if the file cannot be read.
std::string sha256_file_hex(const std::string& path);

}  // namespace taskbench
