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

#include "missbandit/normal.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "missbandit/errors.h"

namespace missbandit {
namespace {

// Reference values from a 25-digit arbitrary-precision evaluation.
struct QuantileCase {
  double p;
  double z;
};

constexpr QuantileCase kQuantiles[] = {
    {1e-12, -7.0344838253011315}, {1e-6, -4.7534243088228989},
    {0.001, -3.0902323061678135}, {0.025, -1.9599639845400542},
    {0.1, -1.2815515655446005},   {0.3, -0.52440051270804078},
    {0.5, 0.0},                   {0.75, 0.67448975019608174},
    {0.9, 1.2815515655446005},    {0.975, 1.9599639845400542},
    {0.999999, 4.7534243088228989},
};

TEST(NormalQuantileTest, MatchesHighPrecisionReference) {
  for (const QuantileCase& c : kQuantiles) {
    EXPECT_NEAR(normal_quantile(c.p), c.z, 1e-9) << "p = " << c.p;
  }
}

TEST(NormalQuantileTest, InvertsTheDistributionFunction) {
  for (double p = 0.001; p < 1.0; p += 0.0137) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13 + 1e-12 * p);
  }
}

TEST(NormalQuantileTest, EndpointsAndDomain) {
  EXPECT_EQ(normal_quantile(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(normal_quantile(1.0), std::numeric_limits<double>::infinity());
  EXPECT_THROW(normal_quantile(-0.1), DomainError);
  EXPECT_THROW(normal_quantile(1.5), DomainError);
  EXPECT_THROW(normal_quantile(std::nan("")), DomainError);
}

TEST(NormalQuantileTest, IsAntisymmetric) {
  // 1 - p must be exact in binary, or the comparison measures rounding.
  for (double p : {0x1p-30, 0x1p-7, 0.25, 0.375}) {
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-9);
  }
}

TEST(NormalCdfTest, ReferenceValues) {
  EXPECT_NEAR(normal_cdf(-8.0) / 6.2209605742717841e-16, 1.0, 1e-12);
  EXPECT_NEAR(normal_cdf(-3.0), 0.0013498980316300945, 1e-16);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145705, 1e-15);
  EXPECT_NEAR(normal_cdf(0.5), 0.6914624612740131, 1e-15);
  EXPECT_NEAR(normal_cdf(2.0), 0.97724986805182079, 1e-15);
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
}

TEST(NormalPdfTest, ReferenceValues) {
  EXPECT_NEAR(normal_pdf(-3.0), 0.0044318484119380072, 1e-16);
  EXPECT_NEAR(normal_pdf(0.5), 0.35206532676429948, 1e-15);
  EXPECT_NEAR(normal_pdf(2.0), 0.053990966513188052, 1e-15);
  EXPECT_DOUBLE_EQ(normal_pdf(1.3), normal_pdf(-1.3));
}

}  // namespace
}  // namespace missbandit
