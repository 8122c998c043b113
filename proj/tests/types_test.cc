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

#include "clssmt/types.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>

#include "support.hpp"

namespace clssmt {
namespace {

Type T(const char* text) { return parse_type(text); }

std::set<std::string> path_strings(const Type& t, std::size_t arity) {
  std::set<std::string> out;
  for (const auto& p : paths(t, arity)) out.insert(to_string(p));
  return out;
}

TEST(ParseTypeTest, ArrowOfConstructors) {
  Type t = T("Pos(3,4) -> Pos(3,3)");
  ASSERT_TRUE(t.is(Type::Kind::Arrow));
  EXPECT_EQ(t.source(), Type::constructor("Pos", {Type::constant("3"), Type::constant("4")}));
  EXPECT_EQ(t.target(), Type::constructor("Pos", {Type::constant("3"), Type::constant("3")}));
}

TEST(ParseTypeTest, AtomsAndIntersections) {
  EXPECT_EQ(T("a"), Type::constant("a"));
  EXPECT_EQ(T("minimal & double"),
            Type::intersection(Type::constant("minimal"), Type::constant("double")));
  EXPECT_EQ(T("minimal ∩ double"), T("minimal & double"));
  EXPECT_EQ(T("a → b"), T("a -> b"));
}

TEST(ParseTypeTest, PrecedenceAndAssociativity) {
  // & binds tighter than ->, and -> associates to the right.
  EXPECT_EQ(T("a & b -> c"), Type::arrow(T("(a & b)"), T("c")));
  EXPECT_EQ(T("a -> b -> c"), Type::arrow(T("a"), Type::arrow(T("b"), T("c"))));
  EXPECT_EQ(T("a & b & c"), Type::intersection(T("a & b"), T("c")));
}

TEST(ParseTypeTest, Variables) {
  EXPECT_TRUE(T("'a").is(Type::Kind::Variable));
  EXPECT_TRUE(T("α -> α").source().is(Type::Kind::Variable));
  EXPECT_TRUE(parse_type("x -> y", {"x"}).source().is(Type::Kind::Variable));
  EXPECT_TRUE(parse_type("x -> y", {"x"}).target().is(Type::Kind::Constant));
}

TEST(ParseTypeTest, ErrorsCarryPosition) {
  try {
    parse_type("a -> (b & ", {}, 3, 1);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_type("Pos(1,"), ParseError);
  EXPECT_THROW(parse_type("a b"), ParseError);
  EXPECT_THROW(parse_type(""), ParseError);
}

TEST(PrintTypeTest, MinimalParentheses) {
  EXPECT_EQ(to_string(T("(a -> b) -> c")), "(a -> b) -> c");
  EXPECT_EQ(to_string(T("a -> b -> c")), "a -> b -> c");
  EXPECT_EQ(to_string(T("(a -> b) & (c -> d)")), "(a -> b) & (c -> d)");
  EXPECT_EQ(to_string(T("a & (b & c)")), "a & (b & c)");
  EXPECT_EQ(to_string(T("List(a & b)")), "List(a & b)");
}

TEST(PrintTypeTest, ParsePrintRoundTrip) {
  std::mt19937 rng(7);
  testing::TypeGen gen{rng, {"a", "b", "c"}, {"L"}};
  for (int i = 0; i < 500; ++i) {
    Type t = gen(4);
    EXPECT_EQ(parse_type(to_string(t)), t) << to_string(t);
    EXPECT_EQ(canonical(parse_type(canonical_string(t))), canonical(t));
  }
}

TEST(CanonicalTest, FlattensSortsAndDeduplicates) {
  EXPECT_EQ(canonical_string(T("minimal & double")), "double & minimal");
  EXPECT_EQ(canonical_string(T("b & (a & b)")), "a & b");
  EXPECT_EQ(canonical(T("c & b & a")), canonical(T("a & (b & c)")));
  // Nested positions are canonicalized too.
  EXPECT_EQ(canonical_string(T("(b & a) -> L(c & a)")), "a & b -> L(a & c)");
}

TEST(SubstitutionTest, AppliesHomomorphically) {
  Substitution s;
  s.emplace("α", T("double"));
  EXPECT_EQ(apply_substitution(s, T("α -> α")), T("double -> double"));
  EXPECT_EQ(apply_substitution({}, T("a")), T("a"));
  Substitution l;
  l.emplace("α", T("List(double)"));
  EXPECT_EQ(apply_substitution(l, T("(α -> α) -> List(α) -> SortedList(α)")),
            T("(List(double) -> List(double)) -> List(List(double)) -> "
              "SortedList(List(double))"));
}

TEST(SubstitutionTest, UnboundVariableIsNamed) {
  try {
    apply_substitution({}, T("'beta -> a"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'beta"), std::string::npos);
  }
}

TEST(SubstitutionTest, CommutesWithFlattening) {
  std::mt19937 rng(11);
  testing::TypeGen gen{rng, {"a", "b", "'x"}, {"L"}};
  Substitution s;
  s.emplace("'x", T("c & a"));
  for (int i = 0; i < 300; ++i) {
    Type raw = gen(4);
    // TypeGen makes constants; turn 'x into a variable.
    Type t = parse_type(to_string(raw));
    EXPECT_EQ(canonical(apply_substitution(s, t)), canonical(apply_substitution(s, canonical(t))));
  }
}

TEST(PathsTest, UnaryPathsOfIntersection) {
  EXPECT_EQ(path_strings(T("(Pos(0,3) -> Pos(0,2)) & (Pos(2,3) -> Pos(2,2))"), 1),
            (std::set<std::string>{"[Pos(0,3)] => Pos(0,2)", "[Pos(2,3)] => Pos(2,2)"}));
}

TEST(PathsTest, ArityZeroGivesComponents) {
  EXPECT_EQ(path_strings(T("a & (b -> c)"), 0),
            (std::set<std::string>{"[] => a", "[] => b -> c"}));
}

TEST(PathsTest, FullAndPartialDecomposition) {
  EXPECT_EQ(path_strings(T("a -> b -> c"), 2), (std::set<std::string>{"[a, b] => c"}));
  EXPECT_EQ(path_strings(T("a -> b -> c"), 1), (std::set<std::string>{"[a] => b -> c"}));
  EXPECT_TRUE(paths(T("a -> b"), 2).empty());
  // Intersections in targets distribute.
  EXPECT_EQ(path_strings(T("a -> (b -> c) & d"), 1),
            (std::set<std::string>{"[a] => b -> c", "[a] => d"}));
  EXPECT_EQ(path_strings(T("a -> (b -> c) & d"), 2), (std::set<std::string>{"[a, b] => c"}));
  EXPECT_EQ(max_arity(T("a & (b -> c -> d)")), 2u);
}

TEST(SubtypeTest, Examples) {
  EXPECT_TRUE(is_subtype(T("A & B"), T("A")));
  EXPECT_TRUE(is_subtype(T("a -> b & c"), T("a -> b")));
  EXPECT_TRUE(is_subtype(T("(a -> b) & (a -> c)"), T("a -> b & c")));
  EXPECT_FALSE(is_subtype(T("minimal"), T("double")));
  EXPECT_FALSE(is_subtype(T("a -> b"), T("a -> b & c")));
  EXPECT_TRUE(is_subtype(T("a -> b"), T("a & c -> b")));
  EXPECT_FALSE(is_subtype(T("a & c -> b"), T("a -> b")));
}

TEST(SubtypeTest, ConstructorsAreCovariant) {
  EXPECT_TRUE(is_subtype(T("List(a & b)"), T("List(a)")));
  EXPECT_FALSE(is_subtype(T("List(a)"), T("List(a & b)")));
  EXPECT_FALSE(is_subtype(T("List(a)"), T("Set(a)")));
  EXPECT_TRUE(is_subtype(T("Pos(1,2)"), T("Pos(1,2)")));
  EXPECT_FALSE(is_subtype(T("Pos(1,2)"), T("Pos(2,1)")));
  EXPECT_THROW(is_subtype(T("L(a)"), T("L(a,b)")), ValidationError);
}

TEST(SubtypeTest, Taxonomy) {
  Taxonomy tax;
  tax.add("int", "real");
  tax.add("real", "number");
  EXPECT_TRUE(is_subtype(T("int"), T("number"), tax));
  EXPECT_FALSE(is_subtype(T("number"), T("int"), tax));
  EXPECT_TRUE(is_subtype(T("List(int)"), T("List(real)"), tax));
  EXPECT_TRUE(is_subtype(T("real -> int"), T("int -> number"), tax));
  EXPECT_FALSE(is_subtype(T("int"), T("number")));
}

TEST(SubtypeTest, RejectsVariables) {
  EXPECT_THROW(is_subtype(T("'a"), T("b")), ValidationError);
}

// Laws on generated closed types.  Each law is checked on 1000+ instances.
class SubtypeLaws : public ::testing::Test {
 protected:
  std::mt19937 rng{2026};
  testing::TypeGen gen{rng, {"a", "b", "c", "d"}, {"L"}};
  Type any() { return gen(1 + gen.pick(4)); }
};

TEST_F(SubtypeLaws, Reflexive) {
  for (int i = 0; i < 1000; ++i) {
    Type t = any();
    EXPECT_TRUE(is_subtype(t, t)) << to_string(t);
  }
}

TEST_F(SubtypeLaws, IntersectionIsGreatestLowerBound) {
  for (int i = 0; i < 1000; ++i) {
    Type a = any(), b = any(), c = any();
    Type ab = Type::intersection(a, b);
    EXPECT_TRUE(is_subtype(ab, a));
    EXPECT_TRUE(is_subtype(ab, b));
    bool glb = is_subtype(c, a) && is_subtype(c, b);
    EXPECT_EQ(is_subtype(c, ab), glb) << to_string(c) << " <= " << to_string(ab);
  }
}

TEST_F(SubtypeLaws, Transitive) {
  int chains = 0;
  for (int i = 0; i < 50000 && chains < 1000; ++i) {
    // Build a chain by weakening: x <= x' by dropping components or
    // strengthening arrow sources.
    Type x = Type::intersection(any(), any());
    Type y = Type::intersection(x, any());
    Type z = any();
    if (is_subtype(y, x) && is_subtype(x, z)) {
      ++chains;
      EXPECT_TRUE(is_subtype(y, z)) << to_string(y) << " <= " << to_string(z);
    }
    Type u = any(), v = any(), w = any();
    if (is_subtype(u, v) && is_subtype(v, w)) {
      ++chains;
      EXPECT_TRUE(is_subtype(u, w));
    }
  }
  EXPECT_GE(chains, 1000);
}

TEST_F(SubtypeLaws, ArrowVariance) {
  for (int i = 0; i < 1000; ++i) {
    Type a1 = any(), b1 = any();
    // A2 <= A1 and B1 <= B2 by construction.
    Type a2 = Type::intersection(a1, any());
    Type b2 = gen.pick(2) ? b1 : canonical(b1);
    if (b1.is(Type::Kind::Intersection)) b2 = b1.left();
    EXPECT_TRUE(is_subtype(Type::arrow(a1, b1), Type::arrow(a2, b2)))
        << to_string(Type::arrow(a1, b1)) << " <= " << to_string(Type::arrow(a2, b2));
  }
}

TEST_F(SubtypeLaws, DistributivityInstance) {
  for (int i = 0; i < 1000; ++i) {
    Type s = any(), t1 = any(), t2 = any();
    Type lhs = Type::intersection(Type::arrow(s, t1), Type::arrow(s, t2));
    Type rhs = Type::arrow(s, Type::intersection(t1, t2));
    EXPECT_TRUE(is_subtype(lhs, rhs));
    EXPECT_TRUE(is_subtype(rhs, lhs));
  }
}

TEST_F(SubtypeLaws, CanonicalFormIsEquivalent) {
  for (int i = 0; i < 1000; ++i) {
    Type t = any();
    EXPECT_TRUE(is_equivalent(t, canonical(t))) << to_string(t);
  }
}

}  // namespace
}  // namespace clssmt
