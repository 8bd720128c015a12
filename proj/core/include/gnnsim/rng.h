// Copyright 2026 The gnnsim Authors
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

#ifndef GNNSIM_RNG_H_
#define GNNSIM_RNG_H_

#include <cstdint>
#include <random>

namespace gnnsim {

// Mixes `parent` and `index` into a child seed with SplitMix64 finalizers.
//
// Stream derivation rule (stable across releases):
//   child = mix(parent ^ mix(index + 0x9E3779B97F4A7C15))
// where mix is the SplitMix64 output function. Experiment seeds are derived
// as derive_seed(master, command_tag), iterations as
// derive_seed(command_seed, iteration), and inside one sampling iteration
// substream 0 selects the seed batch while substream h (1-based) drives hop h.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

// Seedable, splittable generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; bounded draws use Lemire's
// multiply-shift rejection so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent generator for a numbered substream; depends only on seed(),
  // never on how many values this generator has produced.
  Rng substream(std::uint64_t index) const {
    return Rng(derive_seed(seed_, index));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace gnnsim

#endif  // GNNSIM_RNG_H_
