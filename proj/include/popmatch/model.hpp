#pragma once

// Core domain types for allocating indivisible objects to weighted agents.
//
// Agents and objects are addressed by dense indices inside a Problem; string
// ids only matter at the I/O boundary. The outside option (being unassigned)
// is never an object: it is kUnassigned in a Matching and is ranked directly
// after the last acceptable object of every preference list.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "popmatch/error.hpp"

namespace popmatch {

using Weight = std::int64_t;
using AgentIndex = std::size_t;
using ObjectIndex = std::int32_t;

inline constexpr ObjectIndex kUnassigned = -1;

/// Upper bound accepted for a single weight, keeps every margin sum exact.
inline constexpr Weight kMaxWeight = Weight{1} << 40;

/// Default caps for the exhaustive searches. The CLI can override them.
struct Limits {
  std::uint64_t matchings = 10'000'000;
  std::uint64_t orderings = 1'000'000;
  std::uint64_t profiles = 1'000'000;
  std::uint64_t instances = 1'000'000;
  std::size_t universe_objects = 4;
};

// ---------------------------------------------------------------------------
// Preference

/// Strict ranking of acceptable objects, best first. Unlisted objects are
/// unacceptable: worse than being unassigned and mutually indifferent.
class Preference {
 public:
  Preference() = default;
  explicit Preference(std::vector<ObjectIndex> ranked) : ranked_(std::move(ranked)) {}
  Preference(std::initializer_list<ObjectIndex> ranked) : ranked_(ranked) {}

  const std::vector<ObjectIndex>& objects() const noexcept { return ranked_; }
  std::size_t size() const noexcept { return ranked_.size(); }
  bool empty() const noexcept { return ranked_.empty(); }

  /// 0 for the top choice, size() for the outside option, size()+1 for any
  /// unacceptable object. Lower is better.
  int rank(ObjectIndex o) const noexcept {
    if (o == kUnassigned) return static_cast<int>(ranked_.size());
    for (std::size_t k = 0; k < ranked_.size(); ++k) {
      if (ranked_[k] == o) return static_cast<int>(k);
    }
    return static_cast<int>(ranked_.size()) + 1;
  }

  bool acceptable(ObjectIndex o) const noexcept {
    return o != kUnassigned && rank(o) < static_cast<int>(ranked_.size());
  }

  /// Strict preference: x P y.
  bool prefers(ObjectIndex x, ObjectIndex y) const noexcept { return rank(x) < rank(y); }

  friend bool operator==(const Preference&, const Preference&) = default;
  friend auto operator<=>(const Preference&, const Preference&) = default;

 private:
  std::vector<ObjectIndex> ranked_;
};

// ---------------------------------------------------------------------------
// Market and Problem

/// The fixed part of a problem: who the agents are, what they weigh, and
/// which objects exist.
struct Market {
  std::vector<std::string> agents;
  std::vector<Weight> weights;
  std::vector<std::string> objects;

  friend bool operator==(const Market&, const Market&) = default;
};

struct AgentSpec {
  std::string id;
  Weight weight = 1;
};

struct ObjectSpec {
  std::string id;
  int capacity = 1;
};

/// A validated allocation problem (P, q) over a shared Market.
class Problem {
 public:
  Problem(std::shared_ptr<const Market> market, std::vector<int> capacities,
          std::vector<Preference> preferences)
      : market_(std::move(market)),
        capacities_(std::move(capacities)),
        preferences_(std::move(preferences)) {
    validate();
  }

  const Market& market() const noexcept { return *market_; }
  const std::shared_ptr<const Market>& shared_market() const noexcept { return market_; }

  std::size_t agent_count() const noexcept { return market_->agents.size(); }
  std::size_t object_count() const noexcept { return market_->objects.size(); }

  const std::string& agent_id(AgentIndex i) const { return market_->agents.at(i); }
  const std::string& object_id(ObjectIndex o) const {
    return market_->objects.at(static_cast<std::size_t>(o));
  }
  Weight weight(AgentIndex i) const { return market_->weights.at(i); }
  std::span<const Weight> weights() const noexcept { return market_->weights; }

  int capacity(ObjectIndex o) const { return capacities_.at(static_cast<std::size_t>(o)); }
  const std::vector<int>& capacities() const noexcept { return capacities_; }

  const Preference& preference(AgentIndex i) const { return preferences_.at(i); }
  const std::vector<Preference>& preferences() const noexcept { return preferences_; }

  std::optional<AgentIndex> find_agent(std::string_view id) const {
    const auto& a = market_->agents;
    auto it = std::find(a.begin(), a.end(), id);
    if (it == a.end()) return std::nullopt;
    return static_cast<AgentIndex>(it - a.begin());
  }

  std::optional<ObjectIndex> find_object(std::string_view id) const {
    const auto& o = market_->objects;
    auto it = std::find(o.begin(), o.end(), id);
    if (it == o.end()) return std::nullopt;
    return static_cast<ObjectIndex>(it - o.begin());
  }

  /// n >= 3 and m >= n: the regime in which the characterization results are
  /// stated. Smaller problems are accepted but flagged.
  bool meets_standing_assumptions() const noexcept {
    return agent_count() >= 3 && object_count() >= agent_count();
  }

  bool unit_capacities() const noexcept {
    return std::all_of(capacities_.begin(), capacities_.end(), [](int q) { return q == 1; });
  }

  Problem with_preference(AgentIndex i, Preference p) const {
    Problem copy = *this;
    copy.preferences_.at(i) = std::move(p);
    copy.validate_preference(i);
    return copy;
  }

  Problem with_preferences(std::vector<Preference> prefs) const {
    return Problem(trusted_market{}, market_, capacities_, std::move(prefs));
  }

  Problem with_capacities(std::vector<int> caps) const {
    return Problem(trusted_market{}, market_, std::move(caps), preferences_);
  }

  /// Ids non-empty and unique; weights positive and bounded.
  static void check_market(const Market& mk) {
    if (mk.weights.size() != mk.agents.size()) {
      throw InputError("one weight per agent required", "/agents");
    }
    check_ids(mk.agents, "/agents");
    check_ids(mk.objects, "/objects");
    for (std::size_t i = 0; i < mk.weights.size(); ++i) {
      if (mk.weights[i] <= 0) {
        throw InputError("weight must be a positive integer",
                         "/agents/" + std::to_string(i) + "/weight");
      }
      if (mk.weights[i] > kMaxWeight) {
        throw InputError("weight exceeds 2^40", "/agents/" + std::to_string(i) + "/weight");
      }
    }
  }

  friend bool operator==(const Problem& a, const Problem& b) {
    return (a.market_ == b.market_ || *a.market_ == *b.market_) &&
           a.capacities_ == b.capacities_ && a.preferences_ == b.preferences_;
  }

 private:
  struct trusted_market {};

  // The market was validated when the source problem was built.
  Problem(trusted_market, std::shared_ptr<const Market> market, std::vector<int> capacities,
          std::vector<Preference> preferences)
      : market_(std::move(market)),
        capacities_(std::move(capacities)),
        preferences_(std::move(preferences)) {
    validate_problem();
  }

  void validate() const {
    if (!market_) throw InputError("problem has no market");
    check_market(*market_);
    validate_problem();
  }

  void validate_problem() const {
    const Market& mk = *market_;
    if (capacities_.size() != mk.objects.size()) {
      throw InputError("one capacity per object required", "/objects");
    }
    for (std::size_t o = 0; o < capacities_.size(); ++o) {
      if (capacities_[o] < 1) {
        throw InputError("capacity must be a positive integer",
                         "/objects/" + std::to_string(o) + "/capacity");
      }
    }
    if (preferences_.size() != mk.agents.size()) {
      throw InputError("one preference list per agent required", "/preferences");
    }
    for (AgentIndex i = 0; i < preferences_.size(); ++i) validate_preference(i);
  }

  void validate_preference(AgentIndex i) const {
    const auto m = static_cast<ObjectIndex>(market_->objects.size());
    const auto& list = preferences_[i].objects();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string path = "/preferences/" + market_->agents[i] + "/" + std::to_string(k);
      if (list[k] < 0 || list[k] >= m) throw InputError("unknown object", path);
      if (std::find(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(k), list[k]) !=
          list.begin() + static_cast<std::ptrdiff_t>(k)) {
        throw InputError("duplicate object '" + market_->objects[list[k]] + "'", path);
      }
    }
  }

  static void check_ids(const std::vector<std::string>& ids, const std::string& where) {
    std::unordered_set<std::string> seen;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::string path = where + "/" + std::to_string(k) + "/id";
      if (ids[k].empty()) throw InputError("id must be non-empty", path);
      if (!seen.insert(ids[k]).second) throw InputError("duplicate id '" + ids[k] + "'", path);
    }
  }

  std::shared_ptr<const Market> market_;
  std::vector<int> capacities_;
  std::vector<Preference> preferences_;
};

/// Builds a problem from ids; `preferences[k]` belongs to `agents[k]`.
inline Problem make_problem(const std::vector<AgentSpec>& agents,
                            const std::vector<ObjectSpec>& objects,
                            const std::vector<std::vector<std::string>>& preferences) {
  auto market = std::make_shared<Market>();
  std::vector<int> caps;
  for (const auto& a : agents) {
    market->agents.push_back(a.id);
    market->weights.push_back(a.weight);
  }
  for (const auto& o : objects) {
    market->objects.push_back(o.id);
    caps.push_back(o.capacity);
  }
  if (preferences.size() != agents.size()) {
    throw InputError("one preference list per agent required", "/preferences");
  }
  std::vector<Preference> prefs;
  for (std::size_t i = 0; i < preferences.size(); ++i) {
    std::vector<ObjectIndex> ranked;
    for (std::size_t k = 0; k < preferences[i].size(); ++k) {
      const auto& id = preferences[i][k];
      auto it = std::find(market->objects.begin(), market->objects.end(), id);
      if (it == market->objects.end()) {
        throw InputError("unknown object '" + id + "'",
                         "/preferences/" + agents[i].id + "/" + std::to_string(k));
      }
      ranked.push_back(static_cast<ObjectIndex>(it - market->objects.begin()));
    }
    prefs.emplace_back(std::move(ranked));
  }
  return Problem(std::move(market), std::move(caps), std::move(prefs));
}

/// Agents i1..in with the given weights and objects a1..am with unit
/// capacity.
inline Problem make_indexed_problem(const std::vector<Weight>& weights, std::size_t objects,
                                    const std::vector<Preference>& prefs) {
  auto market = std::make_shared<Market>();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    market->agents.push_back("i" + std::to_string(i + 1));
    market->weights.push_back(weights[i]);
  }
  for (std::size_t o = 0; o < objects; ++o) market->objects.push_back("a" + std::to_string(o + 1));
  return Problem(std::move(market), std::vector<int>(objects, 1), prefs);
}

// ---------------------------------------------------------------------------
// Matching

/// Total map agent -> object or kUnassigned. Ordering is the canonical
/// enumeration order (lexicographic by agent index, kUnassigned first).
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t agents) : assignment_(agents, kUnassigned) {}
  explicit Matching(std::vector<ObjectIndex> assignment) : assignment_(std::move(assignment)) {}
  Matching(std::initializer_list<ObjectIndex> assignment) : assignment_(assignment) {}

  std::size_t size() const noexcept { return assignment_.size(); }
  ObjectIndex operator[](AgentIndex i) const { return assignment_.at(i); }
  void assign(AgentIndex i, ObjectIndex o) { assignment_.at(i) = o; }
  const std::vector<ObjectIndex>& assignment() const noexcept { return assignment_; }

  std::size_t holders(ObjectIndex o) const {
    return static_cast<std::size_t>(std::count(assignment_.begin(), assignment_.end(), o));
  }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<ObjectIndex> assignment_;
};

struct MatchingCheck {
  bool valid = true;
  std::string reason;
  std::optional<ObjectIndex> over_capacity;

  explicit operator bool() const noexcept { return valid; }
};

inline MatchingCheck validate_matching(const Problem& p, const Matching& mu) {
  if (mu.size() != p.agent_count()) {
    return {false, "matching covers " + std::to_string(mu.size()) + " agents, problem has " +
                       std::to_string(p.agent_count()),
            std::nullopt};
  }
  const auto m = static_cast<ObjectIndex>(p.object_count());
  std::vector<int> load(p.object_count(), 0);
  for (AgentIndex i = 0; i < mu.size(); ++i) {
    const ObjectIndex o = mu[i];
    if (o == kUnassigned) continue;
    if (o < 0 || o >= m) {
      return {false, "agent '" + p.agent_id(i) + "' holds an unknown object", std::nullopt};
    }
    ++load[static_cast<std::size_t>(o)];
  }
  for (ObjectIndex o = 0; o < m; ++o) {
    if (load[static_cast<std::size_t>(o)] > p.capacity(o)) {
      return {false, "object '" + p.object_id(o) + "' exceeds its capacity", o};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Weight classification

struct WeightClass {
  bool distinct = false;
  bool essentially_distinct = false;
  bool cumulatively_ordered = false;
  std::vector<AgentIndex> canonical_order;
};

/// Agents by non-increasing weight, ties by id ascending.
inline std::vector<AgentIndex> canonical_order(std::span<const Weight> weights,
                                               const std::vector<std::string>& ids) {
  std::vector<AgentIndex> order(weights.size());
  std::iota(order.begin(), order.end(), AgentIndex{0});
  std::sort(order.begin(), order.end(), [&](AgentIndex a, AgentIndex b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return ids[a] < ids[b];
  });
  return order;
}

inline std::vector<AgentIndex> canonical_order(const Problem& p) {
  return canonical_order(p.weights(), p.market().agents);
}

inline WeightClass classify_weights(std::span<const Weight> weights,
                                    const std::vector<std::string>& ids) {
  if (weights.empty()) throw PreconditionError("weight profile is empty");
  WeightClass wc;
  wc.canonical_order = canonical_order(weights, ids);
  const std::size_t n = weights.size();
  std::vector<Weight> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = weights[wc.canonical_order[k]];

  // Sorted, so pairwise distinctness reduces to neighbours.
  auto strictly_decreasing = [&](std::size_t upto) {
    for (std::size_t k = 1; k < upto; ++k) {
      if (w[k - 1] == w[k]) return false;
    }
    return true;
  };
  wc.distinct = strictly_decreasing(n);
  if (n >= 2) {
    wc.essentially_distinct = strictly_decreasing(n - 1) && w[n - 2] == w[n - 1] &&
                              (n < 3 || w[n - 3] >= w[n - 2] + w[n - 1]);
  }
  Weight tail = 0;
  wc.cumulatively_ordered = true;
  for (std::size_t k = n; k-- > 0;) {
    if (w[k] < tail) wc.cumulatively_ordered = false;
    tail += w[k];
  }
  return wc;
}

inline WeightClass classify_weights(const Problem& p) {
  return classify_weights(p.weights(), p.market().agents);
}

/// Ids "i1".."in" for a bare weight list.
inline std::vector<std::string> default_agent_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < n; ++k) ids.push_back("i" + std::to_string(k + 1));
  return ids;
}

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

}  // namespace detail

/// Every ordering in which strictly heavier agents precede strictly lighter
/// ones, in lexicographic order of agent ids.
inline std::vector<std::vector<AgentIndex>> consistent_orderings(
    std::span<const Weight> weights, const std::vector<std::string>& ids,
    std::uint64_t cap = Limits{}.orderings) {
  const std::vector<AgentIndex> base = canonical_order(weights, ids);
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) in base
  std::uint64_t count = 1;
  for (std::size_t b = 0; b < base.size();) {
    std::size_t e = b + 1;
    while (e < base.size() && weights[base[e]] == weights[base[b]]) ++e;
    groups.emplace_back(b, e);
    for (std::size_t f = 2; f <= e - b; ++f) count = detail::saturating_mul(count, f);
    b = e;
  }
  if (count > cap) {
    throw ResourceError("consistent orderings: " + std::to_string(count) +
                        " exceed the cap of " + std::to_string(cap));
  }

  auto by_id = [&](AgentIndex a, AgentIndex b) { return ids[a] < ids[b]; };
  std::vector<std::vector<AgentIndex>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<AgentIndex> current = base;
  for (;;) {
    out.push_back(current);
    // Odometer: the last tie group varies fastest.
    std::size_t g = groups.size();
    bool advanced = false;
    while (g-- > 0) {
      auto first = current.begin() + static_cast<std::ptrdiff_t>(groups[g].first);
      auto last = current.begin() + static_cast<std::ptrdiff_t>(groups[g].second);
      if (std::next_permutation(first, last, by_id)) {
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

inline std::vector<std::vector<AgentIndex>> consistent_orderings(
    const Problem& p, std::uint64_t cap = Limits{}.orderings) {
  return consistent_orderings(p.weights(), p.market().agents, cap);
}

// ---------------------------------------------------------------------------
// Matching enumeration

/// Exact number of capacity-feasible matchings, saturating at 2^64-1.
/// Counts over objects: an object of capacity q takes a subset of size <= q
/// of the agents still free.
inline std::uint64_t count_matchings(const Problem& p) {
  const std::size_t n = p.agent_count();
  std::vector<std::vector<std::uint64_t>> binom(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t r = 0; r <= n; ++r) {
    binom[r][0] = 1;
    for (std::size_t s = 1; s <= r; ++s) {
      binom[r][s] = detail::saturating_add(binom[r - 1][s - 1], binom[r - 1][s]);
    }
  }
  // ways[r]: matchings of r free agents to the objects processed so far.
  std::vector<std::uint64_t> ways(n + 1, 1);
  for (std::size_t o = 0; o < p.object_count(); ++o) {
    const auto q = static_cast<std::size_t>(p.capacity(static_cast<ObjectIndex>(o)));
    std::vector<std::uint64_t> next(n + 1, 0);
    for (std::size_t r = 0; r <= n; ++r) {
      for (std::size_t s = 0; s <= std::min(q, r); ++s) {
        next[r] = detail::saturating_add(next[r], detail::saturating_mul(binom[r][s], ways[r - s]));
      }
    }
    ways = std::move(next);
  }
  return ways[n];
}

inline void require_matching_cap(const Problem& p, std::uint64_t cap) {
  const std::uint64_t count = count_matchings(p);
  if (count > cap) {
    throw ResourceError("matching enumeration: " + std::to_string(count) +
                        " matchings exceed the cap of " + std::to_string(cap));
  }
}

namespace detail {

template <typename F>
bool enumerate_rec(const Problem& p, AgentIndex i, Matching& mu, std::vector<int>& left, F& fn) {
  if (i == p.agent_count()) {
    if constexpr (std::is_same_v<std::invoke_result_t<F&, const Matching&>, bool>) {
      return fn(static_cast<const Matching&>(mu));
    } else {
      fn(static_cast<const Matching&>(mu));
      return true;
    }
  }
  mu.assign(i, kUnassigned);
  if (!enumerate_rec(p, i + 1, mu, left, fn)) return false;
  for (std::size_t o = 0; o < left.size(); ++o) {
    if (left[o] == 0) continue;
    --left[o];
    mu.assign(i, static_cast<ObjectIndex>(o));
    const bool go_on = enumerate_rec(p, i + 1, mu, left, fn);
    ++left[o];
    if (!go_on) {
      mu.assign(i, kUnassigned);
      return false;
    }
  }
  mu.assign(i, kUnassigned);
  return true;
}

}  // namespace detail

/// Visits every capacity-feasible matching exactly once, in canonical order.
/// `fn` may return bool; false stops the walk. Throws ResourceError when the
/// exact count exceeds `cap`.
template <typename F>
void for_each_matching(const Problem& p, F&& fn, std::uint64_t cap = Limits{}.matchings) {
  require_matching_cap(p, cap);
  Matching mu(p.agent_count());
  std::vector<int> left = p.capacities();
  detail::enumerate_rec(p, 0, mu, left, fn);
}

inline std::vector<Matching> enumerate_matchings(const Problem& p,
                                                 std::uint64_t cap = Limits{}.matchings) {
  std::vector<Matching> out;
  for_each_matching(p, [&](const Matching& mu) { out.push_back(mu); }, cap);
  return out;
}

}  // namespace popmatch
