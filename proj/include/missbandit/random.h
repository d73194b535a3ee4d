// Copyright 2026 The missbandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MISSBANDIT_RANDOM_H_
#define MISSBANDIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace missbandit {

// Seeded random stream with the same output sequence on every platform.
// Uniform and normal draws are built directly on std::mt19937_64.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // An independent stream keyed by (seed of this stream, tag). Does not
  // advance this stream.
  RandomStream derive(std::uint64_t tag) const;

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Marsaglia polar method).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform on {0, ..., n - 1}.
  std::size_t index(std::size_t n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer, used to decorrelate nearby seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace missbandit

#endif  // MISSBANDIT_RANDOM_H_
