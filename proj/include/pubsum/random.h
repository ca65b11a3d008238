// Copyright 2026 The PubSum Authors.
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

#ifndef PUBSUM_RANDOM_H_
#define PUBSUM_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace pubsum {

// All seeded randomness goes through these helpers rather than the std
// distributions, whose output is implementation-defined. Same seed gives the
// same stream on every platform.
using Rng = std::mt19937_64;

uint64_t SplitMix64(uint64_t x);

// Independent stream for (seed, stream) pairs, e.g. one per paper.
Rng MakeRng(uint64_t seed, uint64_t stream = 0);

// Uniform integer in [0, n). n must be positive.
uint64_t UniformIndex(Rng& rng, uint64_t n);

// Uniform double in [0, 1).
double UniformUnit(Rng& rng);

template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = UniformIndex(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

// k distinct indices from [0, n), in draw order.
std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k, Rng& rng);

}  // namespace pubsum

#endif  // PUBSUM_RANDOM_H_
