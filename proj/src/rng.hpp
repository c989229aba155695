// Copyright 2026 The occulab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCCULAB_RNG_HPP
#define OCCULAB_RNG_HPP

#include <cstdint>
#include <random>

namespace occulab {

/// SplitMix64 finaliser. Used only to spread (seed, replica, stream) into
/// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replica,
                                    std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ replica) ^
                    (stream * 0xD1B54A32D192ED03ULL));
}

/// One independent Gaussian stream. Every (seed, replica, stream) triple gets
/// its own engine, so results never depend on which worker ran a replica.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream)
      : engine_(derive_seed(seed, replica, stream)) {}

  double operator()() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace occulab

#endif  // OCCULAB_RNG_HPP
