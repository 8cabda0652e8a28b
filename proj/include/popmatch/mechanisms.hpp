#pragma once

// Deterministic mechanisms: serial dictatorships, agent-proposing deferred
// acceptance, a brute-force popular mechanism, and the piecewise fixture
// mechanisms used to separate the characterization axioms.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popmatch/json_io.hpp"
#include "popmatch/model.hpp"
#include "popmatch/popularity.hpp"

namespace popmatch {

struct Mechanism {
  std::string name;
  std::function<Matching(const Problem&)> evaluate;

  Matching operator()(const Problem& p) const { return evaluate(p); }
};

// ---------------------------------------------------------------------------
// Serial dictatorship

inline bool is_permutation_of_agents(const Problem& p, const std::vector<AgentIndex>& ordering) {
  if (ordering.size() != p.agent_count()) return false;
  std::vector<bool> seen(p.agent_count(), false);
  for (AgentIndex i : ordering) {
    if (i >= p.agent_count() || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

/// Each agent in turn takes its most preferred acceptable object that still
/// has a free copy, or stays unassigned.
inline Matching serial_dictatorship(const Problem& p, const std::vector<AgentIndex>& ordering) {
  if (!is_permutation_of_agents(p, ordering)) {
    throw InputError("serial dictatorship ordering is not a permutation of the agents");
  }
  Matching mu(p.agent_count());
  std::vector<int> left = p.capacities();
  for (AgentIndex i : ordering) {
    for (ObjectIndex o : p.preference(i).objects()) {
      auto& slot = left[static_cast<std::size_t>(o)];
      if (slot > 0) {
        --slot;
        mu.assign(i, o);
        break;
      }
    }
  }
  return mu;
}

inline std::vector<AgentIndex> resolve_ordering(const Problem& p,
                                                const std::vector<std::string>& ids) {
  std::vector<AgentIndex> ordering;
  for (const auto& id : ids) {
    auto i = p.find_agent(id);
    if (!i) throw InputError("ordering names unknown agent '" + id + "'");
    ordering.push_back(*i);
  }
  if (!is_permutation_of_agents(p, ordering)) {
    throw InputError("ordering is not a permutation of the agents");
  }
  return ordering;
}

/// SD under the canonical weight ordering.
inline Matching weight_sd(const Problem& p) { return serial_dictatorship(p, canonical_order(p)); }

/// Distinct outcomes of all weight-consistent serial dictatorships, sorted.
inline std::vector<Matching> sd_consistent_outcomes(const Problem& p,
                                                    std::uint64_t cap = Limits{}.orderings) {
  std::vector<Matching> out;
  for (const auto& ordering : consistent_orderings(p, cap)) {
    out.push_back(serial_dictatorship(p, ordering));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Deferred acceptance

/// A strict priority order over all agents at every object.
class PriorityStructure {
 public:
  PriorityStructure(const Problem& p, std::vector<std::vector<AgentIndex>> orders)
      : orders_(std::move(orders)) {
    if (orders_.size() != p.object_count()) {
      throw InputError("one priority order per object required", "/priorities");
    }
    position_.assign(orders_.size(), std::vector<std::size_t>(p.agent_count(), 0));
    for (std::size_t o = 0; o < orders_.size(); ++o) {
      if (!is_permutation_of_agents(p, orders_[o])) {
        throw InputError("priority order is not a permutation of the agents",
                         "/priorities/" + p.object_id(static_cast<ObjectIndex>(o)));
      }
      for (std::size_t k = 0; k < orders_[o].size(); ++k) position_[o][orders_[o][k]] = k;
    }
  }

  /// The same order at every object.
  static PriorityStructure common(const Problem& p, const std::vector<AgentIndex>& order) {
    return PriorityStructure(p, std::vector<std::vector<AgentIndex>>(p.object_count(), order));
  }

  /// Lower is higher priority.
  std::size_t position(ObjectIndex o, AgentIndex i) const {
    return position_[static_cast<std::size_t>(o)][i];
  }
  const std::vector<AgentIndex>& order(ObjectIndex o) const {
    return orders_[static_cast<std::size_t>(o)];
  }

 private:
  std::vector<std::vector<AgentIndex>> orders_;
  std::vector<std::vector<std::size_t>> position_;
};

/// Priorities keyed by ids, resolved against a concrete problem.
using PriorityTable = std::vector<std::pair<std::string, std::vector<std::string>>>;

inline PriorityStructure resolve_priorities(const Problem& p, const PriorityTable& table) {
  std::vector<std::vector<AgentIndex>> orders(p.object_count());
  std::vector<bool> seen(p.object_count(), false);
  for (const auto& [object, agents] : table) {
    auto o = p.find_object(object);
    if (!o) throw InputError("unknown object '" + object + "'", "/priorities/" + object);
    auto& order = orders[static_cast<std::size_t>(*o)];
    for (const auto& id : agents) {
      auto i = p.find_agent(id);
      if (!i) throw InputError("unknown agent '" + id + "'", "/priorities/" + object);
      order.push_back(*i);
    }
    seen[static_cast<std::size_t>(*o)] = true;
  }
  for (std::size_t o = 0; o < seen.size(); ++o) {
    if (!seen[o]) {
      throw InputError("missing priority order",
                       "/priorities/" + p.object_id(static_cast<ObjectIndex>(o)));
    }
  }
  return PriorityStructure(p, std::move(orders));
}

/// {"priorities": {objectId: [agentId, ...]}}, highest priority first.
inline PriorityTable parse_priority_table(std::string_view text) {
  const Json j = detail::parse_json_text(text);
  if (!j.is_object()) throw InputError("priority file must be a JSON object", "");
  const Json& pr = detail::require(j, "priorities", "");
  if (!pr.is_object()) throw InputError("expected an object", "/priorities");
  PriorityTable table;
  for (auto it = pr.begin(); it != pr.end(); ++it) {
    if (!it.value().is_array()) throw InputError("expected an array", "/priorities/" + it.key());
    std::vector<std::string> agents;
    for (const auto& v : it.value()) {
      if (!v.is_string()) throw InputError("expected a string", "/priorities/" + it.key());
      agents.push_back(v.get<std::string>());
    }
    table.emplace_back(it.key(), std::move(agents));
  }
  return table;
}

/// Agent-proposing deferred acceptance. Each object tentatively holds its
/// q highest-priority proposers; rejected agents propose further down their
/// lists until nobody is rejected.
inline Matching deferred_acceptance(const Problem& p, const PriorityStructure& pr) {
  const std::size_t n = p.agent_count();
  std::vector<std::size_t> next(n, 0);
  std::vector<std::vector<AgentIndex>> held(p.object_count());
  std::deque<AgentIndex> free_agents;
  for (AgentIndex i = 0; i < n; ++i) free_agents.push_back(i);

  while (!free_agents.empty()) {
    const AgentIndex i = free_agents.front();
    free_agents.pop_front();
    const auto& list = p.preference(i).objects();
    if (next[i] >= list.size()) continue;
    const ObjectIndex o = list[next[i]++];
    auto& h = held[static_cast<std::size_t>(o)];
    h.push_back(i);
    if (static_cast<int>(h.size()) > p.capacity(o)) {
      auto worst = std::max_element(h.begin(), h.end(), [&](AgentIndex a, AgentIndex b) {
        return pr.position(o, a) < pr.position(o, b);
      });
      free_agents.push_back(*worst);
      h.erase(worst);
    }
  }
  Matching mu(n);
  for (std::size_t o = 0; o < held.size(); ++o) {
    for (AgentIndex i : held[o]) mu.assign(i, static_cast<ObjectIndex>(o));
  }
  return mu;
}

// ---------------------------------------------------------------------------
// Named mechanisms

inline Mechanism sd_by_weights() { return {"sd:weights", weight_sd}; }

inline Mechanism sd_by_ordering(std::vector<std::string> ids) {
  std::string name = "sd:";
  for (std::size_t k = 0; k < ids.size(); ++k) name += (k ? "," : "") + ids[k];
  return {name, [ids = std::move(ids)](const Problem& p) {
            return serial_dictatorship(p, resolve_ordering(p, ids));
          }};
}

inline Mechanism da_mechanism(std::string name, PriorityTable table) {
  return {std::move(name), [table = std::move(table)](const Problem& p) {
            return deferred_acceptance(p, resolve_priorities(p, table));
          }};
}

/// The canonically first w-popular matching when one exists, weight SD
/// otherwise. Popular by construction; not strategy-proof in general.
inline Mechanism popular_first() {
  return {"popular:first", [](const Problem& p) {
            auto found = detail::popular_matchings(p, Weighting::weighted, Limits{}.matchings,
                                                   /*stop_at_first=*/true);
            return found.empty() ? weight_sd(p) : found.front();
          }};
}

namespace fixtures {

namespace detail {

inline bool same_market(const Problem& p, std::initializer_list<Weight> weights,
                        std::size_t objects) {
  if (p.agent_count() != weights.size() || p.object_count() != objects) return false;
  std::size_t k = 0;
  for (Weight w : weights) {
    if (p.agent_id(k) != "i" + std::to_string(k + 1) || p.weight(k) != w) return false;
    ++k;
  }
  for (std::size_t o = 0; o < objects; ++o) {
    if (p.object_id(static_cast<ObjectIndex>(o)) != "a" + std::to_string(o + 1)) return false;
  }
  return p.unit_capacities();
}

/// a1, a2, ..., a_count as object indices.
inline Preference first_objects(std::size_t count) {
  std::vector<ObjectIndex> list;
  for (std::size_t o = 0; o < count; ++o) list.push_back(static_cast<ObjectIndex>(o));
  return Preference(std::move(list));
}

}  // namespace detail

/// Six agents (20,10,5,4,3,2) and a1..a6. When i3..i6 all report a1..a6 the
/// mechanism runs SD with i2 ahead of i1, whatever i1 and i2 report. Note
/// that i3 can escape the branch by misreporting, which makes this
/// construction manipulable; see dispute_tail for a variant that is not.
inline constexpr const char* kDispute = "fixture:dispute";

inline bool in_dispute_branch(const Problem& p) {
  if (!detail::same_market(p, {20, 10, 5, 4, 3, 2}, 6)) return false;
  const Preference all = detail::first_objects(6);
  for (AgentIndex i = 2; i < 6; ++i) {
    if (p.preference(i) != all) return false;
  }
  return true;
}

inline Mechanism dispute() {
  return {kDispute, [](const Problem& p) {
            if (in_dispute_branch(p)) return serial_dictatorship(p, {1, 0, 2, 3, 4, 5});
            return weight_sd(p);
          }};
}

/// Five agents (8,6,4,2,1) and a1..a5. When i1..i3 report a1,a2,a3 no
/// w-popular matching exists for any reports of i4 and i5, and the mechanism
/// lets i5 pick before i4. Only the last two picks move, so no agent can gain
/// by leaving the branch.
inline constexpr const char* kDisputeTail = "fixture:dispute-tail";

inline bool in_dispute_tail_branch(const Problem& p) {
  if (!detail::same_market(p, {8, 6, 4, 2, 1}, 5)) return false;
  const Preference top3 = detail::first_objects(3);
  return p.preference(0) == top3 && p.preference(1) == top3 && p.preference(2) == top3;
}

inline Mechanism dispute_tail() {
  return {kDisputeTail, [](const Problem& p) {
            if (in_dispute_tail_branch(p)) return serial_dictatorship(p, {0, 1, 2, 4, 3});
            return weight_sd(p);
          }};
}

/// Four agents (7,5,3,1) and a1..a4. Whenever no w-popular matching exists,
/// weight SD with i4 left unassigned.
inline constexpr const char* kWasteful = "fixture:wasteful";

inline Mechanism wasteful() {
  return {kWasteful, [](const Problem& p) {
            Matching mu = weight_sd(p);
            if (detail::same_market(p, {7, 5, 3, 1}, 4) && !w_popular_exists(p)) {
              mu.assign(3, kUnassigned);
            }
            return mu;
          }};
}

/// Three agents (4,3,2) and a1..a3. At the all-common a1,a2,a3 problem it
/// returns i1->a2, i2->a1, i3->a3; weight SD everywhere else.
inline constexpr const char* kNonSp = "fixture:nonsp";

inline Mechanism nonsp() {
  return {kNonSp, [](const Problem& p) {
            if (detail::same_market(p, {4, 3, 2}, 3)) {
              const Preference all = detail::first_objects(3);
              if (p.preference(0) == all && p.preference(1) == all && p.preference(2) == all) {
                return Matching{1, 0, 2};
              }
            }
            return weight_sd(p);
          }};
}

/// Three agents (4,3,2) and a1..a3 with priority i3 > i2 > i1 at every
/// object. Constructed: at i1:[a1], i2:[a2], i3:[a1] the unique w-popular
/// matching gives a1 to i1, while deferred acceptance gives it to i3.
inline constexpr const char* kDaCounterexample = "fixture:da-counterexample";

inline PriorityTable da_counterexample_priorities() {
  const std::vector<std::string> order{"i3", "i2", "i1"};
  return {{"a1", order}, {"a2", order}, {"a3", order}};
}

inline Mechanism da_counterexample() {
  return {kDaCounterexample, [](const Problem& p) {
            if (!detail::same_market(p, {4, 3, 2}, 3)) return weight_sd(p);
            return deferred_acceptance(p, resolve_priorities(p, da_counterexample_priorities()));
          }};
}

}  // namespace fixtures

/// The fixture mechanisms, in a fixed order.
inline std::vector<Mechanism> fixture_mechanisms() {
  return {fixtures::dispute(), fixtures::dispute_tail(), fixtures::wasteful(), fixtures::nonsp(),
          fixtures::da_counterexample()};
}

inline std::optional<Mechanism> find_fixture_mechanism(std::string_view name) {
  for (auto& m : fixture_mechanisms()) {
    if (m.name == name) return m;
  }
  return std::nullopt;
}

/// Every mechanism this library ships that is applicable to `p`: weight SD,
/// SD under each fixed ordering, DA with common weight-order and reversed
/// priorities, the brute-force popular mechanism, and the fixtures.
inline std::vector<Mechanism> shipped_mechanisms(const Problem& p) {
  std::vector<Mechanism> out{sd_by_weights()};
  std::vector<std::string> ids = p.market().agents;
  std::sort(ids.begin(), ids.end());
  do {
    out.push_back(sd_by_ordering(ids));
  } while (std::next_permutation(ids.begin(), ids.end()));

  std::vector<std::string> by_weight;
  for (AgentIndex i : canonical_order(p)) by_weight.push_back(p.agent_id(i));
  std::vector<std::string> reversed(by_weight.rbegin(), by_weight.rend());
  PriorityTable forward, backward;
  for (const auto& o : p.market().objects) {
    forward.emplace_back(o, by_weight);
    backward.emplace_back(o, reversed);
  }
  out.push_back(da_mechanism("da:weights", std::move(forward)));
  out.push_back(da_mechanism("da:reversed", std::move(backward)));
  out.push_back(popular_first());
  for (auto& m : fixture_mechanisms()) out.push_back(std::move(m));
  return out;
}

/// Parses a mechanism spec:
///   sd:weights | sd:<id1,id2,...> | da:<priority-file> | popular:first |
///   fixture:dispute|dispute-tail|wasteful|nonsp|da-counterexample
inline Mechanism parse_mechanism(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("mechanism spec '" + std::string(spec) + "' has no ':'");
  }
  const std::string kind(spec.substr(0, colon));
  const std::string arg(spec.substr(colon + 1));
  if (kind == "sd") {
    if (arg == "weights") return sd_by_weights();
    std::vector<std::string> ids;
    std::size_t start = 0;
    while (start <= arg.size()) {
      const auto comma = arg.find(',', start);
      const auto end = comma == std::string::npos ? arg.size() : comma;
      if (end == start) throw InputError("empty agent id in '" + std::string(spec) + "'");
      ids.push_back(arg.substr(start, end - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return sd_by_ordering(std::move(ids));
  }
  if (kind == "da") {
    if (arg == "weights" || arg == "reversed") {
      throw InputError("'" + std::string(spec) + "' is problem-specific; pass a priority file");
    }
    return da_mechanism(std::string(spec), parse_priority_table(read_file(arg)));
  }
  if (kind == "popular" && arg == "first") return popular_first();
  if (kind == "fixture") {
    if (auto m = find_fixture_mechanism(spec)) return *m;
  }
  throw InputError("unknown mechanism '" + std::string(spec) + "'");
}

}  // namespace popmatch
