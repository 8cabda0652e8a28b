#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "popmatch/popularity.hpp"

using namespace popmatch;

namespace {

Problem common(std::vector<Weight> w) {
  const std::size_t n = w.size();
  std::vector<ObjectIndex> all(n);
  std::iota(all.begin(), all.end(), 0);
  return make_indexed_problem(w, n, std::vector<Preference>(n, Preference(all)));
}

std::vector<oracle::Assignment> as_assignments(const std::vector<Matching>& ms) {
  std::vector<oracle::Assignment> out;
  for (const auto& m : ms) out.push_back(oracle::to_assignment(m));
  return out;
}

}  // namespace

TEST(Margin, ExampleChallengerWinsByOne) {
  const Problem p = common({4, 3, 2});
  const Matching mu{0, 1, 2};
  const Matching nu{2, 0, 1};
  EXPECT_EQ(popularity_margin(p, nu, mu), 1);
  EXPECT_EQ(popularity_margin(p, mu, nu), -1);
  EXPECT_EQ(popularity_margin(p, nu, mu, Weighting::unit), 1);
}

TEST(Margin, AntisymmetricAndMatchesOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 4)(rng));
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 9)(rng);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(1, 4)(rng));
    const auto all = enumerate_matchings(p);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const auto& a = all[pick(rng)];
    const auto& b = all[pick(rng)];
    EXPECT_EQ(popularity_margin(p, a, b), -popularity_margin(p, b, a));
    EXPECT_EQ(popularity_margin(p, a, b),
              oracle::margin(oracle::plain(p), oracle::to_assignment(a), oracle::to_assignment(b)));
  }
}

TEST(Margin, RejectsInvalidMatchings) {
  const Problem p = common({4, 3, 2});
  EXPECT_THROW(popularity_margin(p, Matching{0, 0, 1}, Matching{0, 1, 2}), InputError);
}

TEST(IsWPopular, ExampleVerdicts) {
  const Problem cumulative = common({6, 3, 2});
  EXPECT_TRUE(is_w_popular(cumulative, Matching{0, 1, 2}).popular);

  const Problem p = common({4, 3, 2});
  for (const auto& mu : enumerate_matchings(p)) {
    if (std::count(mu.assignment().begin(), mu.assignment().end(), kUnassigned) > 0) continue;
    auto v = is_w_popular(p, mu);
    EXPECT_FALSE(v.popular);
    ASSERT_TRUE(v.challenger.has_value());
    EXPECT_GT(popularity_margin(p, *v.challenger, mu), 0);
    EXPECT_EQ(popularity_margin(p, *v.challenger, mu), v.challenger_margin);
  }
}

TEST(IsWPopular, ChallengerHasMaximalMarginAndIsCanonicallyFirst) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(2, 4)(rng));
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 6)(rng);
    const Problem p = oracle::random_problem(rng, w, w.size());
    const auto all = enumerate_matchings(p);
    const Matching& mu = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    Margin best = 0;
    std::optional<Matching> first;
    for (const auto& nu : all) {
      const Margin m = popularity_margin(p, nu, mu);
      if (m > best) {
        best = m;
        first = nu;
      }
    }
    auto v = is_w_popular(p, mu);
    EXPECT_EQ(v.popular, !first.has_value());
    EXPECT_EQ(v.challenger, first);
    EXPECT_EQ(v.challenger_margin, best);
    EXPECT_EQ(has_challenger(p, mu), first.has_value());
  }
}

TEST(WPopularSet, ExampleSets) {
  EXPECT_EQ(w_popular_set(common({6, 3, 2})), (std::vector<Matching>{Matching{0, 1, 2}}));
  EXPECT_TRUE(w_popular_set(common({4, 3, 2})).empty());
  EXPECT_FALSE(w_popular_exists(common({4, 3, 2})));
  EXPECT_TRUE(w_popular_set(common({1, 1, 1})).empty());
}

TEST(WPopularSet, MatchesQuadraticOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 250; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 4)(rng));
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 8)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const Problem p = oracle::random_problem(rng, w, m, t % 3 == 0 ? 2 : 1);
    const auto pl = oracle::plain(p);
    EXPECT_EQ(as_assignments(w_popular_set(p)), oracle::popular_set(pl));
    EXPECT_EQ(as_assignments(w_popular_set(p, Weighting::unit)), oracle::popular_set(pl, true));
  }
}

TEST(WPopularSet, CapIsEnforced) {
  EXPECT_THROW(w_popular_set(common({4, 3, 2}), Weighting::weighted, 10), ResourceError);
}

TEST(Pareto, MatchesOracle) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 4)(rng), 1);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(1, 3)(rng), 2);
    const auto all = enumerate_matchings(p);
    for (int k = 0; k < 5; ++k) {
      const auto& mu = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
      auto v = is_pareto_efficient(p, mu);
      EXPECT_EQ(v.efficient, oracle::pareto_efficient(oracle::plain(p), oracle::to_assignment(mu)));
      if (!v.efficient) {
        for (AgentIndex i = 0; i < p.agent_count(); ++i) {
          EXPECT_FALSE(p.preference(i).prefers(mu[i], (*v.improvement)[i]));
        }
        EXPECT_NE(*v.improvement, mu);
      }
    }
  }
}

TEST(Pareto, AllUnassignedIsImprovable) {
  const Problem p = common({2, 1});
  EXPECT_FALSE(is_pareto_efficient(p, Matching(2)).efficient);
}

TEST(NonWasteful, WitnessAndOracle) {
  const Problem p = make_indexed_problem({7, 5, 3, 1}, 4,
                                         {Preference{0, 1, 2}, Preference{0, 1, 2},
                                          Preference{0, 1, 2}, Preference{3}});
  auto v = is_non_wasteful(p, Matching{0, 1, 2, kUnassigned});
  EXPECT_FALSE(v.non_wasteful);
  EXPECT_EQ(v.witness, std::make_optional(std::make_pair(AgentIndex{3}, ObjectIndex{3})));
  EXPECT_TRUE(is_non_wasteful(p, Matching{0, 1, 2, 3}).non_wasteful);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 4)(rng), 1);
    const Problem q = oracle::random_problem(rng, w, 3, 2);
    for (const auto& mu : enumerate_matchings(q)) {
      EXPECT_EQ(is_non_wasteful(q, mu).non_wasteful,
                oracle::non_wasteful(oracle::plain(q), oracle::to_assignment(mu)));
    }
  }
}

TEST(PopularMembers, AreParetoEfficient) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 4)(rng));
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 8)(rng);
    const Problem p = oracle::random_problem(rng, w, w.size());
    for (const auto& mu : w_popular_set(p)) EXPECT_TRUE(is_pareto_efficient(p, mu).efficient);
  }
}

TEST(Digraph, CycleWithoutCumulativeWeights) {
  const Problem p = common({4, 3, 2});
  const auto g = popularity_digraph(p);
  EXPECT_EQ(g.nodes.size(), 34u);
  const auto cycle = g.find_cycle();
  ASSERT_GE(cycle.size(), 3u);
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const auto from = cycle[k], to = cycle[(k + 1) % cycle.size()];
    EXPECT_TRUE(std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(from, to)));
    EXPECT_GT(popularity_margin(p, g.nodes[from], g.nodes[to]), 0);
  }
  for (auto d : g.in_degree()) EXPECT_GT(d, 0u);
}

TEST(Digraph, SdOutcomeUnbeatenWithCumulativeWeights) {
  const Problem p = common({6, 3, 2});
  const auto g = popularity_digraph(p);
  const auto it = std::find(g.nodes.begin(), g.nodes.end(), Matching{0, 1, 2});
  ASSERT_NE(it, g.nodes.end());
  EXPECT_EQ(g.in_degree()[static_cast<std::size_t>(it - g.nodes.begin())], 0u);
  const std::string dot = to_dot(p, g);
  EXPECT_EQ(dot.rfind("digraph popularity {", 0), 0u);
  EXPECT_NE(dot.find("label=\"i1:a1 i2:a2 i3:a3\""), std::string::npos);
}

TEST(Digraph, EdgesAgreeWithMargins) {
  const Problem p = common({2, 2, 1});
  const auto g = popularity_digraph(p);
  std::size_t expected = 0;
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
      if (popularity_margin(p, g.nodes[u], g.nodes[v]) > 0) ++expected;
    }
  }
  EXPECT_EQ(g.edges.size(), expected);
}
