// Copyright 2026 The clssmt Authors
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

// The decision procedure against saturation of the BCD rules.

#include <gtest/gtest.h>

#include <random>

#include "clssmt/types.hpp"
#include "oracles/bcd_closure.hpp"

namespace clssmt {
namespace {

const oracle::BcdClosure& closure() {
  static const oracle::BcdClosure c;
  return c;
}

TEST(SubtypeOracleTest, KnownFacts) {
  const auto& c = closure();
  // a & b <= a; a </= b.
  EXPECT_TRUE(c.leq(0b011, 0b001));
  EXPECT_FALSE(c.leq(0b001, 0b010));
}

// x <= y iff x <= every generator of y, for both sides; so comparing all
// of x against every generator decides the whole universe.
TEST(SubtypeOracleTest, AgreesOnEveryTypeAgainstEveryGenerator) {
  const auto& c = closure();
  int discrepancies = 0;
  for (std::uint32_t x = 1; x <= oracle::BcdClosure::kUniverse; ++x) {
    Type tx = c.type(x);
    for (int g = 0; g < oracle::BcdClosure::kGenerators; ++g) {
      std::uint32_t y = 1u << g;
      bool want = c.leq(x, y);
      bool got = is_subtype(tx, c.type(y));
      if (want != got && ++discrepancies <= 10)
        ADD_FAILURE() << to_string(tx) << " <= " << to_string(c.type(y)) << ": oracle "
                      << want << ", decision " << got;
    }
  }
  EXPECT_EQ(discrepancies, 0);
}

TEST(SubtypeOracleTest, AgreesOnSampledPairs) {
  const auto& c = closure();
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::uint32_t> any(1, oracle::BcdClosure::kUniverse);
  int positives = 0;
  for (int i = 0; i < 20000; ++i) {
    std::uint32_t x = any(rng), y = any(rng);
    if (i % 2) y = x & any(rng) ? x & any(rng) : x;  // bias towards related pairs
    if (y == 0) y = x;
    bool want = c.leq(x, y);
    positives += want;
    ASSERT_EQ(is_subtype(c.type(x), c.type(y)), want)
        << to_string(c.type(x)) << " <= " << to_string(c.type(y));
  }
  EXPECT_GT(positives, 1000);
}

}  // namespace
}  // namespace clssmt
