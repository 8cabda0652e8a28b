#include <gtest/gtest.h>

#include "oracles.hpp"
#include "popmatch/constructions.hpp"

using namespace popmatch;

namespace {

std::vector<std::vector<Weight>> profiles_up_to(std::size_t n, Weight top) {
  std::vector<std::vector<Weight>> out;
  std::vector<Weight> w(n, 1);
  while (true) {
    if (std::is_sorted(w.rbegin(), w.rend())) out.push_back(w);
    std::size_t k = 0;
    while (k < n && w[k] == top) w[k++] = 1;
    if (k == n) break;
    ++w[k];
  }
  return out;
}

}  // namespace

TEST(Fixtures, EveryExpectedFactHolds) {
  for (const auto& f : all_fixtures()) {
    for (const auto& claim : f.failing_facts()) ADD_FAILURE() << f.name << ": " << claim;
  }
}

TEST(Fixtures, NamesAreUnique) {
  std::set<std::string> names;
  for (const auto& f : all_fixtures()) EXPECT_TRUE(names.insert(f.name).second) << f.name;
}

TEST(Examples, PopularSetsAgreeWithOracle) {
  const auto ex = section3_examples();
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(oracle::popular_set(oracle::plain(ex[0].problem)),
            (std::vector<oracle::Assignment>{{0, 1, 2}}));
  EXPECT_TRUE(oracle::popular_set(oracle::plain(ex[1].problem)).empty());
}

TEST(Nonexistence, RejectsExactlyTheCumulativeProfiles) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& w : profiles_up_to(n, 6)) {
      if (oracle::cumulatively_ordered(w)) {
        EXPECT_THROW(prop1_nonexistence_instance(w), PreconditionError);
        continue;
      }
      const Fixture f = prop1_nonexistence_instance(w);
      EXPECT_TRUE(oracle::popular_set(oracle::plain(f.problem)).empty());
    }
  }
}

TEST(Nonexistence, EqualWeightsHaveNoPopularMatching) {
  const Fixture f = prop1_nonexistence_instance({1, 1, 1});
  EXPECT_TRUE(w_popular_set(f.problem).empty());
  EXPECT_TRUE(f.failing_facts().empty());
  const Fixture wide = prop1_nonexistence_instance({1, 1, 1}, 5);
  EXPECT_EQ(wide.problem.object_count(), 5u);
  EXPECT_TRUE(oracle::popular_set(oracle::plain(wide.problem)).empty());
  EXPECT_THROW(prop1_nonexistence_instance({4, 3, 2}, 2), PreconditionError);
}

TEST(Manipulation, CaseSelection) {
  EXPECT_EQ(manipulation_case({2, 2, 2}).number, 2);
  EXPECT_EQ(manipulation_case({3, 2, 2}).number, 1);
  EXPECT_EQ(manipulation_case({9, 3, 2, 2}).number, 1);
  const auto c = manipulation_case({9, 4, 4, 3});
  EXPECT_EQ(c.number, 2);
  EXPECT_EQ(c.agents, (std::array<AgentIndex, 3>{1, 2, 3}));
  EXPECT_THROW(manipulation_case({4, 3, 2}), PreconditionError);
  EXPECT_THROW(manipulation_case({5, 2, 2}), PreconditionError);
  EXPECT_THROW(manipulation_case({5, 1, 1}), PreconditionError);
}

TEST(Manipulation, DerivedProblemsAgreeWithOracle) {
  for (const auto& w : std::vector<std::vector<Weight>>{{2, 2, 2}, {3, 2, 2}, {9, 4, 4, 3}}) {
    const Fixture f = thm1_manipulation_instance(w);
    EXPECT_TRUE(oracle::popular_set(oracle::plain(f.problem)).empty());
    ASSERT_EQ(f.derived.size(), 3u);
    std::size_t empty = 0;
    for (const auto& [name, d] : f.derived) {
      const auto set = oracle::popular_set(oracle::plain(d));
      EXPECT_LE(set.size(), 2u) << name;
      if (set.empty()) ++empty;
    }
    EXPECT_EQ(f.failing_facts().size(), empty);
  }
}

TEST(Manipulation, LighterThirdAgentCannotForceItsReport) {
  // With a tie above a strictly lighter i4, i4 reporting only b leaves no
  // w-popular matching: i3 taking b from i4 wins 4 to 3.
  const Fixture f = thm1_manipulation_instance({9, 4, 4, 3});
  EXPECT_EQ(f.failing_facts().size(), 1u);
  const Problem& d = f.derived.back().second;
  EXPECT_EQ(f.derived.back().first, "i4 reports b");
  EXPECT_TRUE(oracle::popular_set(oracle::plain(d)).empty());
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_FALSE(oracle::popular_set(oracle::plain(f.derived[k].second)).empty());
  }
}

TEST(Manipulation, FamilyFreesTheThreeAgents) {
  const Fixture f = thm1_manipulation_instance({2, 2, 2});
  ASSERT_TRUE(f.family.has_value());
  EXPECT_EQ(f.family->size(), 16u * 16u * 16u);
}

TEST(Independence, FourFixturesEachNamingItsViolation) {
  const auto fs = find_fixtures("thm2-independence");
  ASSERT_EQ(fs.size(), 4u);
  const std::vector<std::string> names{"dispute", "wasteful", "nonsp", "da-counterexample"};
  const std::vector<Axiom> axioms{Axiom::dispute_resolutions, Axiom::non_wastefulness,
                                  Axiom::strategy_proofness, Axiom::w_popularity};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(fs[k].name, names[k]);
    EXPECT_EQ(fs[k].violates, std::optional<Axiom>(axioms[k]));
    EXPECT_TRUE(fs[k].family.has_value());
    EXPECT_EQ(fs[k].mechanism, std::optional<std::string>("fixture:" + names[k]));
  }
}

TEST(Lookup, GroupsAndSingles) {
  EXPECT_EQ(find_fixtures("section3").size(), 2u);
  EXPECT_EQ(find_fixtures("all").size(), all_fixtures().size());
  EXPECT_EQ(find_fixtures("dispute-tail").size(), 1u);
  EXPECT_EQ(find_fixtures("manipulation-case2").front().problem.agent_count(), 3u);
  EXPECT_THROW(find_fixtures("nope"), InputError);
}
