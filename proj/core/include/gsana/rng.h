#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gsana {

// Independent, reproducible random stream derived from a run seed and a
// stream name ("bootstrap", "perturb-edges", ...).
inline std::mt19937_64 named_stream(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (const char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace gsana
