#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace crabnet {

using Rng = std::mt19937_64;

/// Independent stream for a (seed, tag...) tuple. Streams never depend on the
/// order in which other streams were consumed.
Rng derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// Stable 64-bit tag for a short ASCII label.
constexpr std::uint64_t stream_tag(const char* label) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char* p = label; *p != '\0'; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace crabnet
