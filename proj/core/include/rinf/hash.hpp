#pragma once

#include <cstdint>
#include <string_view>

namespace rinf {

/// 64-bit FNV-1a. Stable across platforms and runs; used for table keys and
/// for the presentation fingerprints stored in cache/certificate files.
class Fnv1a {
public:
  void add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kPrime;
    }
  }

  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (word >> (8 * i)) & 0xffu;
      state_ *= kPrime;
    }
  }

  std::uint64_t value() const { return state_; }

private:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ull;
  static constexpr std::uint64_t kPrime = 0x100000001b3ull;
  std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view bytes) {
  Fnv1a h;
  h.add(bytes);
  return h.value();
}

} // namespace rinf
