#pragma once

// Deterministic random streams. Every stream is an independent mt19937_64
// seeded from (root seed, tag, indices), so results do not depend on how work
// is split across threads.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string_view>

namespace sharpsum {

using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, std::string_view tag,
                std::initializer_list<std::uint64_t> indices = {});

// Uniform on the open interval (0, 1), from the top 53 bits.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once; callers write results into per-index slots and reduce
// them afterwards in index order.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace sharpsum
