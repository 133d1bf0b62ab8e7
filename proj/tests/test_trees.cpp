// Copyright 2026 The cotlag Authors.
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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cotlag/trees.hpp"
#include "oracles.hpp"

using namespace cotlag;

namespace {

RootedTree w(unsigned k) { return RootedTree::leaf(Color::white, k); }
RootedTree b(unsigned k) { return RootedTree::leaf(Color::black, k); }

std::vector<RootedTree> exactly(unsigned weight, std::optional<Color> c = std::nullopt) {
  std::vector<RootedTree> out;
  for (const auto& t : enumerate_rooted(weight, c)) {
    if (t.total_weight() == weight) out.push_back(t);
  }
  return out;
}

std::vector<TopTree> exactly_unrooted(unsigned weight) {
  std::vector<TopTree> out;
  for (const auto& t : enumerate_unrooted(weight)) {
    if (t.total_weight() == weight) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(Leaf, WhiteOne) {
  const auto t = w(1);
  EXPECT_EQ(t.color(), Color::white);
  EXPECT_EQ(t.vertex_count(), 1u);
  EXPECT_EQ(t.total_weight(), 1u);
  EXPECT_TRUE(t.is_leaf());
}

TEST(Leaf, BlackThree) { EXPECT_EQ(b(3).total_weight(), 3u); }

TEST(Leaf, ZeroWeightRejected) { EXPECT_THROW(w(0), invalid_argument); }

TEST(Graft, Edge) {
  const auto t = RootedTree::graft({w(1)}, Color::black, 1);
  EXPECT_EQ(t.vertex_count(), 2u);
  EXPECT_EQ(t.total_weight(), 2u);
}

TEST(Graft, TwoChildren) {
  EXPECT_EQ(RootedTree::graft({w(1), w(1)}, Color::black, 2).total_weight(), 4u);
}

TEST(Graft, ColorClash) { EXPECT_THROW(RootedTree::graft({b(1)}, Color::black, 1), invalid_argument); }

TEST(Graft, ZeroWeight) { EXPECT_THROW(RootedTree::graft({w(1)}, Color::black, 0), invalid_argument); }

TEST(Encoding, Examples) {
  EXPECT_EQ(canonical_encoding(w(1)), "w1");
  EXPECT_EQ(canonical_encoding(RootedTree::graft({w(1), w(1)}, Color::black, 2)), "b2(w1,w1)");
  const auto inner = RootedTree::graft({b(3)}, Color::white, 1);
  EXPECT_EQ(canonical_encoding(RootedTree::graft({inner, w(1)}, Color::black, 2)), "b2(w1,w1(b3))");
}

TEST(Encoding, PermutationInvariant) {
  std::mt19937_64 rng(7);
  for (const auto& t : enumerate_rooted(6)) {
    std::vector<RootedTree> kids(t.children().begin(), t.children().end());
    std::shuffle(kids.begin(), kids.end(), rng);
    EXPECT_EQ(RootedTree::graft(kids, t.color(), t.weight()).encoding(), t.encoding());
  }
}

TEST(Encoding, ParseRoundTrip) {
  for (const auto& t : enumerate_rooted(6)) EXPECT_EQ(parse_tree(t.encoding()), t);
  EXPECT_EQ(parse_tree("b2(w1(b3),w1)").encoding(), "b2(w1,w1(b3))");
  EXPECT_EQ(parse_tree("w12").weight(), 12u);
}

TEST(Encoding, ParseErrors) {
  EXPECT_THROW(parse_tree(""), invalid_argument);
  EXPECT_THROW(parse_tree("x1"), invalid_argument);
  EXPECT_THROW(parse_tree("w"), invalid_argument);
  EXPECT_THROW(parse_tree("w1(b1"), invalid_argument);
  EXPECT_THROW(parse_tree("w1)"), invalid_argument);
  EXPECT_THROW(parse_tree("w1(w1)"), invalid_argument);
  EXPECT_THROW(parse_tree("w0"), invalid_argument);
}

TEST(Symmetry, Examples) {
  EXPECT_EQ(symmetry_coefficient(w(1)), 1u);
  EXPECT_EQ(symmetry_coefficient(RootedTree::graft({w(1), w(1)}, Color::black, 2)), 2u);
  EXPECT_EQ(symmetry_coefficient(RootedTree::graft({w(1), w(2)}, Color::black, 1)), 1u);
}

TEST(Symmetry, NestedRepeatedChildren) {
  const auto branch = RootedTree::graft({b(1), b(1)}, Color::white, 1);
  const auto t = RootedTree::graft({branch, branch, branch}, Color::black, 1);
  EXPECT_EQ(symmetry_coefficient(t), 6u * 8u);
  EXPECT_EQ(automorphism_count(t), 48u);
}

TEST(Automorphisms, Examples) {
  EXPECT_EQ(automorphism_count(w(1)), 1u);
  EXPECT_EQ(automorphism_count(RootedTree::graft({w(1), w(1)}, Color::black, 2)), 2u);
  const auto wb = RootedTree::graft({b(1)}, Color::white, 1);
  EXPECT_EQ(automorphism_count(RootedTree::graft({wb, wb}, Color::black, 1)), 2u);
}

TEST(Automorphisms, SizeLimit) {
  std::vector<RootedTree> kids(10, w(1));
  EXPECT_THROW(automorphism_count(RootedTree::graft(kids, Color::black, 1)), invalid_argument);
}

TEST(Automorphisms, MatchSymmetryUpToSevenVertices) {
  for (const auto& t : enumerate_rooted(7)) {
    const auto labeled = to_labeled(t);
    EXPECT_EQ(symmetry_coefficient(t), oracle::permutation_automorphisms(labeled, true)) << t.encoding();
    EXPECT_EQ(automorphism_count(t), symmetry_coefficient(t)) << t.encoding();
  }
}

TEST(Butcher, Examples) {
  EXPECT_EQ(butcher_product(w(1), b(1)).encoding(), "w1(b1)");
  EXPECT_EQ(butcher_product(b(1), w(1)).encoding(), "b1(w1)");
  EXPECT_EQ(forget_root(butcher_product(w(1), b(1))), forget_root(butcher_product(b(1), w(1))));
  EXPECT_THROW(butcher_product(w(1), w(2)), invalid_argument);
}

TEST(Butcher, RootChangeInvariance) {
  const auto white = enumerate_rooted(4, Color::white);
  const auto black = enumerate_rooted(4, Color::black);
  for (const auto& u : white) {
    for (const auto& v : black) {
      EXPECT_EQ(forget_root(butcher_product(u, v)), forget_root(butcher_product(v, u)));
    }
  }
}

TEST(ForgetRoot, Examples) {
  EXPECT_EQ(forget_root(RootedTree::graft({w(1)}, Color::black, 1)),
            forget_root(RootedTree::graft({b(1)}, Color::white, 1)));
  EXPECT_NE(forget_root(w(2)), forget_root(b(2)));
  const auto t = RootedTree::graft({w(1), w(1)}, Color::black, 1);
  const auto r = rerootings(t);
  ASSERT_EQ(r.size(), 2u);
  std::size_t vertices = 0;
  for (const auto& [rt, count] : r) vertices += count;
  EXPECT_EQ(vertices, 3u);
  EXPECT_EQ(forget_root(t).symmetry(), 2u);
}

TEST(ForgetRoot, CanonicalIsMinimalRerooting) {
  for (const auto& t : enumerate_rooted(6)) {
    const auto top = forget_root(t);
    for (const auto& [r, _] : rerootings(t)) EXPECT_LE(top.encoding(), r.encoding());
  }
}

TEST(EnumerateRooted, Counts) {
  const auto one = enumerate_rooted(1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(exactly(2).size(), 4u);
  std::set<std::string> two;
  for (const auto& t : exactly(2)) two.insert(t.encoding());
  EXPECT_EQ(two, (std::set<std::string>{"w2", "b2", "w1(b1)", "b1(w1)"}));
  EXPECT_EQ(exactly(3).size(), 10u);
}

TEST(EnumerateRooted, MatchesBruteForce) {
  for (unsigned wt = 1; wt <= 6; ++wt) {
    std::set<std::string> mine;
    for (const auto& t : exactly(wt)) mine.insert(t.encoding());
    EXPECT_EQ(mine, oracle::brute_force_rooted(wt)) << "weight " << wt;
  }
}

TEST(EnumerateRooted, RootColorAndDeterminism) {
  for (const auto& t : enumerate_rooted(5, Color::black)) EXPECT_EQ(t.color(), Color::black);
  EXPECT_EQ(enumerate_rooted(5), enumerate_rooted(5));
  const auto all = enumerate_rooted(5);
  EXPECT_EQ(std::set<RootedTree>(all.begin(), all.end()).size(), all.size());
}

TEST(EnumerateRooted, Cap) {
  EXPECT_THROW(enumerate_rooted(11), invalid_argument);
  EXPECT_NO_THROW(enumerate_rooted(4, std::nullopt, 4));
  EXPECT_THROW(enumerate_rooted(5, std::nullopt, 4), invalid_argument);
}

TEST(EnumerateRooted, WeightFilter) {
  WeightFilter only_ones{1, 1};
  for (const auto& t : enumerate_rooted(5, std::nullopt, 10, only_ones)) {
    EXPECT_EQ(t.total_weight(), t.vertex_count());
  }
}

TEST(EnumerateUnrooted, Counts) {
  EXPECT_EQ(exactly_unrooted(1).size(), 2u);
  const auto two = exactly_unrooted(2);
  ASSERT_EQ(two.size(), 3u);
  for (unsigned wt = 1; wt <= 6; ++wt) {
    std::set<std::string> classes;
    for (const auto& t : exactly(wt)) classes.insert(forget_root(t).encoding());
    EXPECT_EQ(exactly_unrooted(wt).size(), classes.size()) << "weight " << wt;
  }
}

TEST(EnumerateUnrooted, Cap) { EXPECT_THROW(enumerate_unrooted(11), invalid_argument); }

TEST(UnrootedSymmetry, BruteForceAndLabeledCount) {
  for (const auto& t : enumerate_unrooted(6)) {
    const auto labeled = to_labeled(t.canonical());
    EXPECT_EQ(t.symmetry(), oracle::permutation_automorphisms(labeled, false)) << t.encoding();
    EXPECT_EQ(t.symmetry(), unrooted_automorphism_count(t.canonical())) << t.encoding();
    EXPECT_EQ(oracle::labeled_count(labeled) * t.symmetry(), factorial(t.vertex_count()))
        << t.encoding();
  }
}

TEST(UnrootedSymmetry, OrbitStabilizer) {
  for (const auto& t : enumerate_unrooted(8)) {
    if (t.vertex_count() > 6) continue;
    const auto labeled = to_labeled(t.canonical());
    for (std::size_t v = 0; v < labeled.size(); ++v) {
      const auto tv = rooted_at(labeled, v);
      std::size_t orbit = 0;
      for (std::size_t u = 0; u < labeled.size(); ++u) orbit += rooted_at(labeled, u) == tv;
      auto rooted_copy = labeled;
      rooted_copy.root = v;
      const auto sym_v = oracle::permutation_automorphisms(rooted_copy, true);
      EXPECT_EQ(t.symmetry() % sym_v, 0u);
      EXPECT_EQ(t.symmetry() / sym_v, orbit) << t.encoding() << " at " << v;
    }
  }
}
