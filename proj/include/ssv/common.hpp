#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssv {

/// Malformed input data (CSV rows, headers, timestamps). CLI exit code 2.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem/stream failure. CLI exit code 2.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mathematical or statistical precondition violation. CLI exit code 1.
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit over raw bytes. Non-cryptographic; used for provenance
/// digests and stream derivation, where only determinism matters.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

std::string to_hex(std::uint64_t v);

/// Deterministic per-stream seed: two splitmix64 finalizer rounds over
/// (seed, stream). Distinct streams give statistically independent engines.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  };
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  return mix(mix(x));
}

}  // namespace ssv
