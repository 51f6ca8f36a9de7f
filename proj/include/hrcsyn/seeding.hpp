#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace hrcsyn {

/// Independent, reproducible seed for sub-stream `stream` of `base`.
/// std::seed_seq's mixing is fully specified, so values are portable.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace hrcsyn
