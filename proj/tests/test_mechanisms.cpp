#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "popmatch/mechanisms.hpp"

using namespace popmatch;

namespace {

Problem common3(std::vector<Weight> w) {
  return make_indexed_problem(w, 3, std::vector<Preference>(w.size(), Preference{0, 1, 2}));
}

std::vector<std::vector<int>> priority_positions(const Problem& p, const PriorityStructure& pr) {
  std::vector<std::vector<int>> out(p.object_count(), std::vector<int>(p.agent_count()));
  for (std::size_t o = 0; o < p.object_count(); ++o) {
    for (AgentIndex i = 0; i < p.agent_count(); ++i) {
      out[o][i] = static_cast<int>(pr.position(static_cast<ObjectIndex>(o), i));
    }
  }
  return out;
}

}  // namespace

TEST(SerialDictatorship, WeightOrderOnTheExample) {
  EXPECT_EQ(weight_sd(common3({6, 3, 2})), (Matching{0, 1, 2}));
  EXPECT_EQ(sd_by_weights()(common3({6, 3, 2})), (Matching{0, 1, 2}));
}

TEST(SerialDictatorship, RejectsNonPermutations) {
  const Problem p = common3({4, 3, 2});
  EXPECT_THROW(serial_dictatorship(p, {0, 1}), InputError);
  EXPECT_THROW(serial_dictatorship(p, {0, 1, 1}), InputError);
  EXPECT_THROW(sd_by_ordering({"i1", "i2", "i9"})(p), InputError);
}

TEST(SerialDictatorship, MatchesOracleUnderRandomOrders) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 5)(rng), 1);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(1, 4)(rng), 2);
    std::vector<AgentIndex> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_EQ(oracle::to_assignment(serial_dictatorship(p, order)),
              oracle::serial_dictatorship(oracle::plain(p), order));
  }
}

TEST(SerialDictatorship, ConsistentOutcomesCoverTies) {
  const Problem p = common3({2, 2, 1});
  const auto outs = sd_consistent_outcomes(p);
  EXPECT_EQ(outs, (std::vector<Matching>{Matching{0, 1, 2}, Matching{1, 0, 2}}));
  EXPECT_EQ(sd_consistent_outcomes(common3({4, 3, 2})).size(), 1u);
}

TEST(DeferredAcceptance, StableAndIndividuallyRational) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 5)(rng), 1);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(1, 4)(rng), 2);
    std::vector<std::vector<AgentIndex>> orders;
    for (std::size_t o = 0; o < p.object_count(); ++o) {
      std::vector<AgentIndex> order(w.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      orders.push_back(order);
    }
    const PriorityStructure pr(p, orders);
    const Matching mu = deferred_acceptance(p, pr);
    EXPECT_TRUE(validate_matching(p, mu).valid);
    EXPECT_TRUE(oracle::stable(oracle::plain(p), priority_positions(p, pr), oracle::to_assignment(mu)));
  }
}

TEST(DeferredAcceptance, CommonPriorityEqualsSerialDictatorship) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 300; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 5)(rng), 1);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(1, 4)(rng), 2);
    std::vector<AgentIndex> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_EQ(deferred_acceptance(p, PriorityStructure::common(p, order)), serial_dictatorship(p, order));
  }
}

TEST(DeferredAcceptance, PriorityValidation) {
  const Problem p = common3({4, 3, 2});
  EXPECT_THROW(PriorityStructure(p, {{0, 1, 2}}), InputError);
  EXPECT_THROW(PriorityStructure(p, {{0, 1, 2}, {0, 1, 2}, {0, 0, 2}}), InputError);
  EXPECT_THROW(resolve_priorities(p, {{"a1", {"i1", "i2", "i3"}}}), InputError);
  EXPECT_THROW(resolve_priorities(p, {{"a9", {"i1", "i2", "i3"}}}), InputError);
  const auto table = parse_priority_table(R"({"priorities":{"a1":["i3","i2","i1"]}})");
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table[0].second.front(), "i3");
  EXPECT_THROW(parse_priority_table(R"({"priorities":{"a1":[1]}})"), InputError);
}

TEST(Fixtures, DisputeBranchesOnTheOtherReports) {
  std::vector<Preference> prefs(6, Preference{0, 1, 2, 3, 4, 5});
  prefs[0] = prefs[1] = Preference{0, 1};
  const Problem p = make_indexed_problem({20, 10, 5, 4, 3, 2}, 6, prefs);
  const Matching mu = fixtures::dispute()(p);
  EXPECT_EQ(mu[1], 0);
  EXPECT_EQ(mu[0], 1);
  const Problem off = p.with_preference(2, Preference{1});
  EXPECT_EQ(fixtures::dispute()(off), weight_sd(off));
}

TEST(Fixtures, DisputeTailSwapsOnlyTheLastPicks) {
  std::vector<Preference> prefs(5, Preference{0, 1, 2});
  prefs[3] = prefs[4] = Preference{3, 4};
  const Problem p = make_indexed_problem({8, 6, 4, 2, 1}, 5, prefs);
  EXPECT_EQ(fixtures::dispute_tail()(p), (Matching{0, 1, 2, 4, 3}));
  EXPECT_EQ(weight_sd(p), (Matching{0, 1, 2, 3, 4}));
}

TEST(Fixtures, WastefulLeavesTheLightestAgentOut) {
  const Problem p = make_indexed_problem(
      {7, 5, 3, 1}, 4, {Preference{0, 1, 2}, Preference{0, 1, 2}, Preference{0, 1, 2}, Preference{3}});
  EXPECT_EQ(fixtures::wasteful()(p), (Matching{0, 1, 2, kUnassigned}));
  const Problem popular = p.with_preference(0, Preference{0}).with_preference(1, Preference{1});
  EXPECT_EQ(fixtures::wasteful()(popular), weight_sd(popular));
}

TEST(Fixtures, NonSpHardCodedOutcome) {
  const Problem p = common3({4, 3, 2});
  EXPECT_EQ(fixtures::nonsp()(p), (Matching{1, 0, 2}));
  const Problem q = p.with_preference(2, Preference{0});
  EXPECT_EQ(fixtures::nonsp()(q), weight_sd(q));
}

TEST(Fixtures, DaCounterexampleGivesA1ToI3) {
  const Problem p = make_indexed_problem({4, 3, 2}, 3, {Preference{0}, Preference{1}, Preference{0}});
  EXPECT_EQ(fixtures::da_counterexample()(p), (Matching{kUnassigned, 1, 0}));
}

TEST(Fixtures, OutsideTheirMarketsTheyAreWeightSd) {
  const Problem p = common3({6, 3, 2});
  for (const auto& m : fixture_mechanisms()) EXPECT_EQ(m(p), weight_sd(p)) << m.name;
}

TEST(PopularFirst, PicksAPopularMatchingWhenOneExists) {
  const Problem p = common3({6, 3, 2});
  EXPECT_EQ(popular_first()(p), (Matching{0, 1, 2}));
  const Problem q = common3({4, 3, 2});
  EXPECT_EQ(popular_first()(q), weight_sd(q));
}

TEST(Registry, ShippedMechanismsAreNamedAndDistinct) {
  const Problem p = common3({2, 2, 2});
  const auto all = shipped_mechanisms(p);
  std::set<std::string> names;
  for (const auto& m : all) names.insert(m.name);
  EXPECT_EQ(names.size(), all.size());
  EXPECT_TRUE(names.count("sd:weights"));
  EXPECT_TRUE(names.count("sd:i2,i1,i3"));
  EXPECT_TRUE(names.count("da:reversed"));
  EXPECT_TRUE(names.count("fixture:wasteful"));
  for (const auto& m : all) EXPECT_TRUE(validate_matching(p, m(p)).valid) << m.name;
}

TEST(Grammar, ParsesEveryForm) {
  const Problem p = common3({4, 3, 2});
  EXPECT_EQ(parse_mechanism("sd:weights").name, "sd:weights");
  EXPECT_EQ(parse_mechanism("sd:i3,i2,i1")(p), (Matching{2, 1, 0}));
  EXPECT_EQ(parse_mechanism("popular:first").name, "popular:first");
  for (const char* f : {"dispute", "dispute-tail", "wasteful", "nonsp", "da-counterexample"}) {
    EXPECT_EQ(parse_mechanism(std::string("fixture:") + f).name, std::string("fixture:") + f);
  }
  const auto path = std::filesystem::temp_directory_path() / "popmatch_priorities.json";
  std::ofstream(path) << R"({"priorities":{"a1":["i3","i2","i1"],"a2":["i3","i2","i1"],"a3":["i3","i2","i1"]}})";
  const Mechanism da = parse_mechanism("da:" + path.string());
  EXPECT_EQ(da(p), (Matching{2, 1, 0}));
  std::filesystem::remove(path);

  EXPECT_THROW(parse_mechanism("sd"), InputError);
  EXPECT_THROW(parse_mechanism("sd:"), InputError);
  EXPECT_THROW(parse_mechanism("sd:i1,,i2"), InputError);
  EXPECT_THROW(parse_mechanism("fixture:nope"), InputError);
  EXPECT_THROW(parse_mechanism("da:/no/such/file"), InputError);
  EXPECT_THROW(parse_mechanism("da:weights"), InputError);
  EXPECT_THROW(parse_mechanism("rsd:x"), InputError);
}
