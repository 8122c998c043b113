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

#include "clssmt/repository.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace clssmt {
namespace {

using testing::fixture;
using testing::fixture_repo;

TEST(ParseRepositoryTest, Labyrinth) {
  Repository repo = fixture_repo("labyrinth.repo");
  std::vector<std::string> names;
  for (const auto& c : repo.combinators) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"left", "right", "up", "down", "start"}));
  EXPECT_TRUE(repo.variable_kinds.empty());
  EXPECT_EQ(paths(repo.find("up")->type, 1).size(), 5u);
  EXPECT_TRUE(validate(repo).empty());
}

TEST(ParseRepositoryTest, SingleNullaryCombinator) {
  Repository repo = parse_repository("start : Pos(0,2)");
  ASSERT_EQ(repo.combinators.size(), 1u);
  EXPECT_EQ(max_arity(repo.combinators[0].type), 0u);
}

TEST(ParseRepositoryTest, EmptyText) {
  EXPECT_TRUE(parse_repository("").combinators.empty());
  EXPECT_TRUE(parse_repository("# only a comment\n\n").combinators.empty());
}

TEST(ParseRepositoryTest, KindsAndTaxonomy) {
  Repository repo = parse_repository(
      "var x in { a, L(b & c), a -> b }\n"
      "subtype int <: real\n"
      "f : x -> x  # trailing comment\n");
  ASSERT_EQ(repo.variable_kinds.at("x").size(), 3u);
  EXPECT_EQ(repo.variable_kinds.at("x")[1], parse_type("L(b & c)"));
  EXPECT_TRUE(repo.taxonomy.leq("int", "real"));
  EXPECT_TRUE(repo.find("f")->type.source().is(Type::Kind::Variable));
}

TEST(ParseRepositoryTest, SyntaxErrorsHaveLineNumbers) {
  try {
    parse_repository("a : b\nf : (a -> \n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_repository("this is not a declaration"), ParseError);
  EXPECT_THROW(parse_repository("var x { a }"), ParseError);
  EXPECT_THROW(parse_repository("subtype a b"), ParseError);
}

TEST(ValidateTest, SortRepositoryIsValid) {
  EXPECT_TRUE(validate(fixture_repo("sort_with_function_kind.repo")).empty());
  EXPECT_TRUE(validate(fixture_repo("sort.repo")).empty());
}

TEST(ValidateTest, Violations) {
  EXPECT_EQ(validate(parse_repository("f : 'beta -> a")),
            (std::vector<Diagnostic>{{Diagnostic::Code::UnboundVariableKind, "'beta", ""}}));
  EXPECT_EQ(validate(parse_repository("up : a\nup : b")),
            (std::vector<Diagnostic>{{Diagnostic::Code::DuplicateName, "up", ""}}));
  EXPECT_EQ(validate(parse_repository("f : L(a)\ng : L(a, b)")),
            (std::vector<Diagnostic>{{Diagnostic::Code::ConstructorArity, "L", ""}}));
  Repository open;
  open.variable_kinds["x"] = {Type::variable("'y")};
  open.variable_kinds["z"] = {};
  auto diags = validate(open);
  EXPECT_EQ(diags.size(), 2u);
}

TEST(SubstitutionsTest, CartesianProduct) {
  Repository sort = fixture_repo("sort_with_function_kind.repo");
  EXPECT_EQ(substitutions(sort, "id").size(), 4u);
  EXPECT_EQ(substitutions(fixture_repo("labyrinth.repo"), "up"),
            std::vector<Substitution>{Substitution{}});
  Repository two = parse_repository(
      "var x in { a, b }\nvar y in { a, b, c }\nf : x -> y -> x\n");
  EXPECT_EQ(substitutions(two, "f").size(), 6u);
  EXPECT_THROW(substitutions(two, "g"), ValidationError);
}

TEST(InstantiatedTypeTest, IntersectsInstances) {
  Repository sort = fixture_repo("sort.repo");
  EXPECT_TRUE(is_equivalent(
      instantiated_type(sort, "id"),
      parse_type("(double -> double) & (List(double) -> List(double)) & "
                 "(minimal & double -> minimal & double)")));
}

TEST(PrintRepositoryTest, RoundTripIsIdempotent) {
  for (const char* name :
       {"labyrinth.repo", "sort.repo", "sort_with_function_kind.repo", "micro.repo"}) {
    Repository once = fixture_repo(name);
    Repository twice = parse_repository(print_repository(once));
    EXPECT_EQ(print_repository(twice), print_repository(once)) << name;
  }
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    Repository r = testing::random_repository(rng);
    std::string text = print_repository(r);
    EXPECT_EQ(print_repository(parse_repository(text)), text);
  }
}

}  // namespace
}  // namespace clssmt
