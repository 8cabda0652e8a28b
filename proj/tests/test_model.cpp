#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "popmatch/model.hpp"

using namespace popmatch;

namespace {

Problem three_by_three() {
  return make_indexed_problem({4, 3, 2}, 3, std::vector<Preference>(3, Preference{0, 1, 2}));
}

}  // namespace

TEST(Preference, RanksListedOutsideAndUnacceptable) {
  const Preference p{2, 0};
  EXPECT_EQ(p.rank(2), 0);
  EXPECT_EQ(p.rank(0), 1);
  EXPECT_EQ(p.rank(kUnassigned), 2);
  EXPECT_EQ(p.rank(1), 3);
  EXPECT_TRUE(p.prefers(0, kUnassigned));
  EXPECT_TRUE(p.prefers(kUnassigned, 1));
  EXPECT_FALSE(p.prefers(1, 3));
  EXPECT_FALSE(p.prefers(3, 1));
  EXPECT_TRUE(p.acceptable(0));
  EXPECT_FALSE(p.acceptable(1));
  EXPECT_FALSE(p.acceptable(kUnassigned));
}

TEST(Preference, EmptyListPrefersNothingToTheOutsideOption) {
  const Preference p;
  EXPECT_TRUE(p.prefers(kUnassigned, 0));
  EXPECT_FALSE(p.acceptable(0));
}

TEST(Problem, ValidatesIdsWeightsCapacitiesAndPreferences) {
  auto market = std::make_shared<Market>(Market{{"x", "y"}, {1, 2}, {"a"}});
  EXPECT_NO_THROW(Problem(market, {1}, {Preference{0}, Preference{}}));
  EXPECT_THROW(Problem(market, {0}, {Preference{}, Preference{}}), InputError);
  EXPECT_THROW(Problem(market, {1}, {Preference{0, 0}, Preference{}}), InputError);
  EXPECT_THROW(Problem(market, {1}, {Preference{1}, Preference{}}), InputError);
  EXPECT_THROW(Problem(market, {1}, {Preference{}}), InputError);

  auto dup = std::make_shared<Market>(Market{{"x", "x"}, {1, 2}, {"a"}});
  EXPECT_THROW(Problem(dup, {1}, {Preference{}, Preference{}}), InputError);
  auto zero = std::make_shared<Market>(Market{{"x", "y"}, {0, 2}, {"a"}});
  EXPECT_THROW(Problem(zero, {1}, {Preference{}, Preference{}}), InputError);
  auto huge = std::make_shared<Market>(Market{{"x", "y"}, {kMaxWeight + 1, 2}, {"a"}});
  EXPECT_THROW(Problem(huge, {1}, {Preference{}, Preference{}}), InputError);
}

TEST(Problem, InputErrorCarriesPath) {
  auto market = std::make_shared<Market>(Market{{"x"}, {1}, {"a"}});
  try {
    Problem(market, {1}, {Preference{0, 0}});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.path(), "/preferences/x/1");
  }
}

TEST(Problem, StandingAssumptions) {
  EXPECT_TRUE(three_by_three().meets_standing_assumptions());
  EXPECT_FALSE(make_indexed_problem({1, 1}, 2, {Preference{}, Preference{}}).meets_standing_assumptions());
  EXPECT_FALSE(make_indexed_problem({1, 1, 1}, 2, std::vector<Preference>(3)).meets_standing_assumptions());
}

TEST(Problem, CopiesShareTheMarket) {
  const Problem p = three_by_three();
  const Problem q = p.with_preference(0, Preference{1});
  EXPECT_EQ(p.shared_market(), q.shared_market());
  EXPECT_EQ(q.preference(0), Preference{1});
  EXPECT_EQ(p.preference(0), (Preference{0, 1, 2}));
  EXPECT_THROW(p.with_preference(0, Preference{7}), InputError);
  EXPECT_THROW(p.with_capacities({1, 0, 1}), InputError);
}

TEST(Matching, ValidationReportsCapacityAndIndexErrors) {
  const Problem p = three_by_three();
  EXPECT_TRUE(validate_matching(p, Matching{0, 1, 2}).valid);
  EXPECT_TRUE(validate_matching(p, Matching{kUnassigned, kUnassigned, kUnassigned}).valid);
  auto over = validate_matching(p, Matching{0, 0, 2});
  EXPECT_FALSE(over.valid);
  EXPECT_EQ(over.over_capacity, std::optional<ObjectIndex>(0));
  EXPECT_FALSE(validate_matching(p, Matching{0, 1}).valid);
  EXPECT_FALSE(validate_matching(p, Matching{0, 1, 5}).valid);
}

TEST(Matching, OrderIsCanonicalEnumerationOrder) {
  EXPECT_LT((Matching{kUnassigned, 0}), (Matching{0, kUnassigned}));
  EXPECT_LT((Matching{0, 1}), (Matching{1, 0}));
}

TEST(WeightClass, ExamplesFromTheDefinitions) {
  auto wc = [](std::vector<Weight> w) { return classify_weights(w, default_agent_ids(w.size())); };
  auto a = wc({6, 3, 2});
  EXPECT_TRUE(a.distinct);
  EXPECT_FALSE(a.essentially_distinct);
  EXPECT_TRUE(a.cumulatively_ordered);
  auto b = wc({4, 3, 2});
  EXPECT_TRUE(b.distinct);
  EXPECT_FALSE(b.cumulatively_ordered);
  auto c = wc({5, 2, 1, 1});
  EXPECT_FALSE(c.distinct);
  EXPECT_TRUE(c.essentially_distinct);
  EXPECT_TRUE(c.cumulatively_ordered);
  auto d = wc({3, 2, 2});
  EXPECT_FALSE(d.distinct);
  EXPECT_FALSE(d.essentially_distinct);
  auto e = wc({2, 2, 2});
  EXPECT_FALSE(e.distinct || e.essentially_distinct || e.cumulatively_ordered);
  EXPECT_TRUE(wc({1, 1}).essentially_distinct);
  EXPECT_TRUE(wc({7}).distinct);
  EXPECT_THROW(wc({}), PreconditionError);
}

TEST(WeightClass, CanonicalOrderBreaksTiesById) {
  const std::vector<Weight> w{2, 5, 2};
  const std::vector<std::string> ids{"z", "m", "b"};
  EXPECT_EQ(canonical_order(w, ids), (std::vector<AgentIndex>{1, 2, 0}));
}

TEST(WeightClass, AgreesWithOracleOnRandomProfiles) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    std::vector<Weight> w(n);
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 12)(rng);
    const auto wc = classify_weights(w, default_agent_ids(n));
    EXPECT_EQ(wc.distinct, oracle::distinct(w));
    EXPECT_EQ(wc.essentially_distinct, oracle::essentially_distinct(w));
    EXPECT_EQ(wc.cumulatively_ordered, oracle::cumulatively_ordered(w));
    // Cumulatively ordered profiles are distinct or essentially distinct.
    if (wc.cumulatively_ordered) {
      EXPECT_TRUE(wc.distinct || wc.essentially_distinct);
    }
  }
}

TEST(Orderings, OneForDistinctWeights) {
  const auto p = three_by_three();
  EXPECT_EQ(consistent_orderings(p), (std::vector<std::vector<AgentIndex>>{{0, 1, 2}}));
}

TEST(Orderings, TieGroupsPermuteIndependently) {
  const std::vector<Weight> w{3, 3, 1, 1, 1};
  const auto orders = consistent_orderings(w, default_agent_ids(5));
  EXPECT_EQ(orders.size(), 12u);
  for (const auto& o : orders) {
    EXPECT_LT(std::max(o[0], o[1]), 2u);
    for (std::size_t k = 0; k + 1 < o.size(); ++k) EXPECT_GE(w[o[k]], w[o[k + 1]]);
  }
  EXPECT_EQ(orders.front(), (std::vector<AgentIndex>{0, 1, 2, 3, 4}));
  EXPECT_THROW(consistent_orderings(w, default_agent_ids(5), 11), ResourceError);
}

TEST(Enumeration, ThreeByThreeUnitHas34Matchings) {
  const auto p = three_by_three();
  EXPECT_EQ(count_matchings(p), 34u);
  EXPECT_EQ(enumerate_matchings(p).size(), 34u);
  EXPECT_EQ(oracle::unit_count_formula(3, 3), 34u);
}

TEST(Enumeration, MatchesNaiveEnumerationInOrder) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    std::vector<Weight> w(n, 1);
    const auto p = oracle::random_problem(rng, w, m, 3);
    const auto got = enumerate_matchings(p);
    const auto want = oracle::all_matchings(oracle::plain(p));
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_EQ(oracle::to_assignment(got[k]), want[k]);
    EXPECT_EQ(count_matchings(p), oracle::recursive_count(p.capacities(), n));
  }
}

TEST(Enumeration, CapIsEnforcedBeforeWork) {
  const auto p = three_by_three();
  EXPECT_THROW(enumerate_matchings(p, 33), ResourceError);
  EXPECT_NO_THROW(enumerate_matchings(p, 34));
}

TEST(Enumeration, VisitorCanStopEarly) {
  int seen = 0;
  for_each_matching(three_by_three(), [&](const Matching&) { return ++seen < 5; });
  EXPECT_EQ(seen, 5);
}
