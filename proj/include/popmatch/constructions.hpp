#pragma once

// Generators for the named example and manipulation instances, each with
// machine-checkable expected facts.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "popmatch/axioms.hpp"
#include "popmatch/mechanisms.hpp"
#include "popmatch/popularity.hpp"

namespace popmatch {

struct ExpectedFact {
  std::string claim;
  std::function<bool()> holds;
};

struct Fixture {
  Fixture(std::string n, Problem p) : name(std::move(n)), problem(std::move(p)) {}

  std::string name;
  Problem problem;
  std::optional<ProblemFamily> family;
  /// Mechanism spec the fixture is built for, and the one axiom it is meant
  /// to violate on its family.
  std::optional<std::string> mechanism;
  std::optional<Axiom> violates;
  std::vector<std::pair<std::string, Problem>> derived;
  std::vector<ExpectedFact> facts;

  /// Claims whose check fails.
  std::vector<std::string> failing_facts() const {
    std::vector<std::string> out;
    for (const auto& f : facts) {
      if (!f.holds()) out.push_back(f.claim);
    }
    return out;
  }
};

namespace detail {

inline std::vector<ObjectSpec> unit_objects(const std::string& prefix, std::size_t m) {
  std::vector<ObjectSpec> out;
  for (std::size_t o = 0; o < m; ++o) out.push_back({prefix + std::to_string(o + 1), 1});
  return out;
}

inline Problem common_preference_problem(const std::vector<Weight>& weights, std::size_t m,
                                         const std::string& prefix) {
  std::vector<AgentSpec> agents;
  const auto ids = default_agent_ids(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) agents.push_back({ids[i], weights[i]});
  const auto objects = unit_objects(prefix, m);
  std::vector<std::string> list;
  for (const auto& o : objects) list.push_back(o.id);
  std::vector<std::vector<std::string>> prefs(ids.size(), list);
  return make_problem(agents, objects, prefs);
}

inline ExpectedFact popular_set_empty(const Problem& p) {
  return {"w_popular_set is empty", [p] { return w_popular_set(p).empty(); }};
}

inline ExpectedFact popular_set_is(const Problem& p, std::vector<Matching> expected,
                                   std::string claim) {
  std::sort(expected.begin(), expected.end());
  return {std::move(claim), [p, expected] {
            auto got = w_popular_set(p);
            std::sort(got.begin(), got.end());
            return got == expected;
          }};
}

inline ExpectedFact audit_fails(const Mechanism& mech, const ProblemFamily& fam, Axiom axiom,
                                bool expect_violation) {
  std::string claim = mech.name + (expect_violation ? " violates " : " satisfies ") +
                      std::string(axiom_name(axiom)) + " on its family";
  return {std::move(claim), [mech, fam, axiom, expect_violation] {
            return audit(axiom, mech, fam).holds != expect_violation;
          }};
}

inline ProblemFamily restricted_family(const Problem& base, std::vector<AgentIndex> free,
                                       std::size_t universe_objects) {
  std::vector<ObjectIndex> objects(universe_objects);
  std::iota(objects.begin(), objects.end(), ObjectIndex{0});
  return ProblemFamily(base, std::move(free), preference_universe(objects));
}

}  // namespace detail

/// Weights (6,3,2) and (4,3,2), objects o1..o3, everyone ranking o1,o2,o3.
inline std::vector<Fixture> section3_examples() {
  std::vector<Fixture> out;
  {
    Problem p = detail::common_preference_problem({6, 3, 2}, 3, "o");
    Fixture f{"ex3-cumulative", p};
    f.facts.push_back(detail::popular_set_is(p, {weight_sd(p)},
                                             "w_popular_set is exactly the weight-SD outcome"));
    f.facts.push_back({"weights are cumulatively ordered",
                       [p] { return classify_weights(p).cumulatively_ordered; }});
    out.push_back(std::move(f));
  }
  {
    Problem p = detail::common_preference_problem({4, 3, 2}, 3, "o");
    Fixture f{"ex3-noncumulative", p};
    f.facts.push_back(detail::popular_set_empty(p));
    f.facts.push_back({"weights are not cumulatively ordered",
                       [p] { return !classify_weights(p).cumulatively_ordered; }});
    f.facts.push_back({"the popularity digraph has a cycle",
                       [p] { return !popularity_digraph(p).find_cycle().empty(); }});
    out.push_back(std::move(f));
  }
  return out;
}

/// Common preferences a1,...,a_m over unit-capacity objects for a profile
/// that is not cumulatively ordered. `m` defaults to n.
inline Fixture prop1_nonexistence_instance(const std::vector<Weight>& weights, std::size_t m = 0) {
  if (weights.empty()) throw PreconditionError("weight profile is empty");
  if (m == 0) m = weights.size();
  if (classify_weights(weights, default_agent_ids(weights.size())).cumulatively_ordered) {
    throw PreconditionError("weights are cumulatively ordered; a w-popular matching exists");
  }
  if (m < weights.size()) throw PreconditionError("needs at least as many objects as agents");
  Problem p = detail::common_preference_problem(weights, m, "a");
  Fixture f{"nonexistence", p};
  f.facts.push_back(detail::popular_set_empty(p));
  return f;
}

/// Which construction case thm1_manipulation_instance used, and the three agents
/// that find a, b, c acceptable (in canonical order).
struct ManipulationCase {
  int number = 0;
  std::array<AgentIndex, 3> agents{};
};

inline ManipulationCase manipulation_case(const std::vector<Weight>& weights) {
  const auto ids = default_agent_ids(weights.size());
  const WeightClass wc = classify_weights(weights, ids);
  if (wc.distinct || wc.essentially_distinct) {
    throw PreconditionError("weights are distinct or essentially distinct");
  }
  const auto& order = wc.canonical_order;
  const std::size_t n = order.size();
  // Case 2: the first tie that is not the bottom pair.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    if (weights[order[k]] == weights[order[k + 1]]) {
      return {2, {order[k], order[k + 1], order[k + 2]}};
    }
  }
  // Otherwise the only tie is at the bottom and the third-from-last weight
  // falls short of the bottom pair.
  return {1, {order[n - 3], order[n - 2], order[n - 1]}};
}

/// Three agents rank a, b, c (a1, a2, a3); everyone else finds every object
/// unacceptable. Derived problems give each of the three the report [b].
inline Fixture thm1_manipulation_instance(const std::vector<Weight>& weights) {
  const ManipulationCase c = manipulation_case(weights);
  const std::size_t n = weights.size();
  const std::size_t m = std::max<std::size_t>(n, 3);
  std::vector<Preference> prefs(n);
  for (AgentIndex i : c.agents) prefs[i] = Preference{0, 1, 2};
  Problem p = make_indexed_problem(weights, m, prefs);

  Fixture f{"manipulation-case" + std::to_string(c.number), p};
  std::vector<AgentIndex> relevant(c.agents.begin(), c.agents.end());
  f.family = ProblemFamily(p, relevant, preference_universe(std::vector<ObjectIndex>{0, 1, 2}));
  f.facts.push_back(detail::popular_set_empty(p));
  for (AgentIndex j : c.agents) {
    Problem d = p.with_preference(j, Preference{1});
    const std::string name = p.agent_id(j) + " reports b";
    std::vector<AgentIndex> rest;
    for (AgentIndex k : c.agents) {
      if (k != j) rest.push_back(k);
    }
    f.facts.push_back({"when " + name + ", every w-popular matching gives it b and splits a, c "
                       "between the other two",
                       [d, j, rest] {
                         const auto set = w_popular_set(d);
                         if (set.empty()) return false;
                         for (const auto& mu : set) {
                           if (mu[j] != 1) return false;
                           const bool split = (mu[rest[0]] == 0 && mu[rest[1]] == 2) ||
                                              (mu[rest[0]] == 2 && mu[rest[1]] == 0);
                           if (!split) return false;
                         }
                         return set.size() <= 2;
                       }});
    f.derived.emplace_back(name, std::move(d));
  }
  return f;
}

/// Base problems and families of the independence mechanisms.
inline std::vector<Fixture> appendix_fixture_problems() {
  using fixtures::detail::first_objects;
  std::vector<Fixture> out;
  {
    std::vector<Preference> prefs(6, first_objects(6));
    prefs[0] = prefs[1] = Preference{0, 1};
    Problem p = make_indexed_problem({20, 10, 5, 4, 3, 2}, 6, prefs);
    Fixture f{"dispute", p};
    f.family = detail::restricted_family(p, {0, 1}, 3);
    f.mechanism = fixtures::kDispute;
    f.violates = Axiom::dispute_resolutions;
    const Mechanism mech = fixtures::dispute();
    f.facts.push_back({"base preferences of i1 and i2 are a1, a2", [p] {
                         return p.preference(0) == Preference{0, 1} &&
                                p.preference(1) == Preference{0, 1};
                       }});
    f.facts.push_back({"at the base problem i2 receives a1 and i1 receives a2", [p, mech] {
                         const Matching mu = mech(p);
                         return mu[1] == 0 && mu[0] == 1;
                       }});
    f.facts.push_back(detail::audit_fails(mech, *f.family, Axiom::dispute_resolutions, true));
    f.facts.push_back({"i3 can manipulate by leaving the branch", [mech, fam = *f.family] {
                         auto r = check_strategy_proofness(mech, fam);
                         return !r.holds && r.witness->agent == AgentIndex{2};
                       }});
    out.push_back(std::move(f));
  }
  {
    std::vector<Preference> prefs(5, first_objects(3));
    prefs[3] = prefs[4] = Preference{3, 4};
    Problem p = make_indexed_problem({8, 6, 4, 2, 1}, 5, prefs);
    Fixture f{"dispute-tail", p};
    f.family = ProblemFamily(p, {3, 4}, preference_universe(std::vector<ObjectIndex>{2, 3, 4}));
    f.mechanism = fixtures::kDisputeTail;
    f.violates = Axiom::dispute_resolutions;
    const Mechanism mech = fixtures::dispute_tail();
    f.facts.push_back({"at the base problem i5 receives a4", [p, mech] { return mech(p)[4] == 3; }});
    f.facts.push_back(detail::popular_set_empty(p));
    for (Axiom a : {Axiom::strategy_proofness, Axiom::w_popularity, Axiom::non_wastefulness,
                    Axiom::dispute_resolutions}) {
      f.facts.push_back(detail::audit_fails(mech, *f.family, a, a == Axiom::dispute_resolutions));
    }
    out.push_back(std::move(f));
  }
  {
    std::vector<Preference> prefs(4, first_objects(3));
    prefs[3] = Preference{3};
    Problem p = make_indexed_problem({7, 5, 3, 1}, 4, prefs);
    Fixture f{"wasteful", p};
    f.family = ProblemFamily(p, {3}, preference_universe(p));
    f.mechanism = fixtures::kWasteful;
    f.violates = Axiom::non_wastefulness;
    const Mechanism mech = fixtures::wasteful();
    f.facts.push_back(detail::popular_set_empty(p));
    f.facts.push_back({"i4 is left unassigned although a4 is free", [p, mech] {
                         return mech(p)[3] == kUnassigned;
                       }});
    f.facts.push_back(detail::audit_fails(mech, *f.family, Axiom::non_wastefulness, true));
    out.push_back(std::move(f));
  }
  {
    Problem p = make_indexed_problem({4, 3, 2}, 3, std::vector<Preference>(3, first_objects(3)));
    Fixture f{"nonsp", p};
    f.family = detail::restricted_family(p, {2}, 3);
    f.mechanism = fixtures::kNonSp;
    f.violates = Axiom::strategy_proofness;
    const Mechanism mech = fixtures::nonsp();
    f.facts.push_back({"at the base problem the outcome is i1->a2, i2->a1, i3->a3",
                       [p, mech] { return mech(p) == Matching{1, 0, 2}; }});
    f.facts.push_back(detail::audit_fails(mech, *f.family, Axiom::strategy_proofness, true));
    out.push_back(std::move(f));
  }
  {
    Problem p = make_indexed_problem({4, 3, 2}, 3, {Preference{0}, Preference{1}, Preference{0}});
    Fixture f{"da-counterexample", p};
    f.family = detail::restricted_family(p, {2}, 3);
    f.mechanism = fixtures::kDaCounterexample;
    f.violates = Axiom::w_popularity;
    const Mechanism mech = fixtures::da_counterexample();
    f.facts.push_back(detail::popular_set_is(p, {Matching{0, 1, kUnassigned}},
                                             "the unique w-popular matching gives a1 to i1"));
    f.facts.push_back({"deferred acceptance gives a1 to i3", [p, mech] { return mech(p)[2] == 0; }});
    f.facts.push_back(detail::audit_fails(mech, *f.family, Axiom::w_popularity, true));
    out.push_back(std::move(f));
  }
  return out;
}

/// The four designated independence fixtures, in the order dispute,
/// wasteful, nonsp, da-counterexample.
inline std::vector<Fixture> independence_fixtures() {
  std::vector<Fixture> out;
  for (auto& f : appendix_fixture_problems()) {
    if (f.name != "dispute-tail") out.push_back(std::move(f));
  }
  return out;
}

inline std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out = section3_examples();
  out.push_back(prop1_nonexistence_instance({4, 3, 2}));
  out.push_back(thm1_manipulation_instance({2, 2, 2}));
  out.push_back(thm1_manipulation_instance({3, 2, 2}));
  for (auto& f : appendix_fixture_problems()) out.push_back(std::move(f));
  return out;
}

/// A single fixture by name, or a named group ("thm2-independence",
/// "section3", "all").
inline std::vector<Fixture> find_fixtures(std::string_view name) {
  if (name == "thm2-independence") return independence_fixtures();
  if (name == "section3") return section3_examples();
  std::vector<Fixture> all = all_fixtures();
  if (name == "all") return all;
  std::vector<Fixture> out;
  for (auto& f : all) {
    if (f.name == name) out.push_back(std::move(f));
  }
  if (out.empty()) throw InputError("unknown fixture '" + std::string(name) + "'");
  return out;
}

}  // namespace popmatch
