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

#include "missbandit/random.h"

#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

namespace missbandit {
namespace {

TEST(RandomStreamTest, SameSeedSameSequence) {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.uniform(), b.uniform());
    ASSERT_EQ(a.normal(), b.normal());
  }
}

TEST(RandomStreamTest, NearbySeedsDiffer) {
  RandomStream a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.uniform() == b.uniform();
  EXPECT_EQ(equal, 0);
}

TEST(RandomStreamTest, DeriveDoesNotAdvanceParentAndIsKeyed) {
  RandomStream parent(7);
  RandomStream copy(7);
  RandomStream c1 = parent.derive(1);
  RandomStream c1_again = parent.derive(1);
  RandomStream c2 = parent.derive(2);
  EXPECT_EQ(parent.uniform(), copy.uniform());
  const double x = c1.uniform();
  EXPECT_EQ(x, c1_again.uniform());
  EXPECT_NE(x, c2.uniform());
}

TEST(RandomStreamTest, UniformStaysInUnitInterval) {
  RandomStream rng(3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is 1/sqrt(12 n) ~ 6.5e-4.
  EXPECT_NEAR(sum / n, 0.5, 4 * 6.5e-4);
}

TEST(RandomStreamTest, NormalMoments) {
  RandomStream rng(11);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(RandomStreamTest, IndexCoversRangeUniformly) {
  RandomStream rng(5);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = rng.index(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 4.0 * std::sqrt(n / 7.0));
}

TEST(RandomStreamTest, BernoulliRate) {
  RandomStream rng(9);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3);
  EXPECT_NEAR(hits / static_cast<double>(n), 0.3, 4.0 * std::sqrt(0.21 / n));
  EXPECT_FALSE(rng.bernoulli(0.0));
  EXPECT_TRUE(rng.bernoulli(1.0));
}

TEST(MixSeedTest, IsABijectionOnSamples) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(mix_seed(i));
  EXPECT_EQ(seen.size(), 10000u);
}

}  // namespace
}  // namespace missbandit
