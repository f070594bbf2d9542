// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef WLSEVI_RANDOM_HPP
#define WLSEVI_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace wlsevi {

/// Identifiers written into run metadata.
inline constexpr std::string_view kGeneratorId = "mt19937_64;u=((x>>11)+0.5)*2^-53";
inline constexpr std::string_view kSeedMixId = "seed_r=master_seed^splitmix64(r)";

/// SplitMix64 finalizer (64-bit avalanche).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t replication) {
  return master_seed ^ splitmix64(replication);
}

/// Uniforms on the open interval (0, 1), one engine output per draw. The
/// mapping is spelled out instead of std::uniform_real_distribution so the
/// stream is identical across standard libraries.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wlsevi

#endif  // WLSEVI_RANDOM_HPP
