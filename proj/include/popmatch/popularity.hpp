#pragma once

// Weighted popularity: pairwise margins, exact (w-)popularity decisions,
// Pareto efficiency and non-wastefulness, and the "more popular than"
// digraph.
//
// Every decision is an exact search over the capacity-feasible matchings.
// The challenger search walks matchings in canonical order with a
// branch-and-bound on the remaining weight that could still switch sides;
// it returns the same answer as scanning every matching, only faster.

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "popmatch/json_io.hpp"
#include "popmatch/model.hpp"

namespace popmatch {

enum class Weighting { weighted, unit };

using Margin = std::int64_t;

namespace detail {

/// ranks[i][o + 1] for o in {kUnassigned, 0..m-1}.
class RankTable {
 public:
  explicit RankTable(const Problem& p) : width_(p.object_count() + 1) {
    ranks_.resize(p.agent_count() * width_);
    for (AgentIndex i = 0; i < p.agent_count(); ++i) {
      const Preference& pref = p.preference(i);
      ranks_[i * width_] = pref.rank(kUnassigned);
      for (std::size_t o = 0; o < p.object_count(); ++o) {
        ranks_[i * width_ + o + 1] = pref.rank(static_cast<ObjectIndex>(o));
      }
    }
  }

  int operator()(AgentIndex i, ObjectIndex o) const {
    return ranks_[i * width_ + static_cast<std::size_t>(o + 1)];
  }

 private:
  std::size_t width_;
  std::vector<int> ranks_;
};

inline std::vector<Weight> effective_weights(const Problem& p, Weighting mode) {
  if (mode == Weighting::unit) return std::vector<Weight>(p.agent_count(), 1);
  return {p.weights().begin(), p.weights().end()};
}

inline void require_valid(const Problem& p, const Matching& mu, const char* what) {
  if (auto check = validate_matching(p, mu); !check) {
    throw InputError(std::string(what) + ": " + check.reason);
  }
}

/// Finds challengers nu with margin(nu, target) > 0. In `first` mode stops at
/// the canonically first one; otherwise returns the canonically first among
/// those of maximal margin.
class ChallengerSearch {
 public:
  ChallengerSearch(const Problem& p, const RankTable& ranks, const std::vector<Weight>& w,
                   const Matching& target)
      : p_(p), ranks_(ranks), w_(w), target_(target), current_(p.agent_count()),
        left_(p.capacities()) {
    const std::size_t n = p.agent_count();
    suffix_.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
      // Agent i can only add weight if something beats its current object.
      const bool can_gain = ranks_(i, target_[i]) > 0;
      suffix_[i] = suffix_[i + 1] + (can_gain ? w_[i] : 0);
    }
  }

  std::optional<std::pair<Matching, Margin>> run(bool first_only) {
    first_only_ = first_only;
    best_ = 0;
    found_.reset();
    dfs(0, 0);
    if (!found_) return std::nullopt;
    return std::make_pair(*found_, best_);
  }

 private:
  bool dfs(AgentIndex i, Margin acc) {
    if (acc + suffix_[i] <= best_) return true;
    if (i == p_.agent_count()) {
      best_ = acc;
      found_ = current_;
      return !first_only_;
    }
    const int held = ranks_(i, target_[i]);
    auto step = [&](ObjectIndex o) {
      const int r = ranks_(i, o);
      const Margin delta = r < held ? w_[i] : (r > held ? -w_[i] : 0);
      current_.assign(i, o);
      return dfs(i + 1, acc + delta);
    };
    if (!step(kUnassigned)) return false;
    for (std::size_t o = 0; o < left_.size(); ++o) {
      if (left_[o] == 0) continue;
      --left_[o];
      const bool go_on = step(static_cast<ObjectIndex>(o));
      ++left_[o];
      if (!go_on) return false;
    }
    current_.assign(i, kUnassigned);
    return true;
  }

  const Problem& p_;
  const RankTable& ranks_;
  const std::vector<Weight>& w_;
  const Matching& target_;
  Matching current_;
  std::vector<int> left_;
  std::vector<Margin> suffix_;
  bool first_only_ = false;
  Margin best_ = 0;
  std::optional<Matching> found_;
};

inline bool non_wasteful_with(const Problem& p, const RankTable& ranks, const Matching& mu) {
  std::vector<int> load(p.object_count(), 0);
  for (AgentIndex i = 0; i < mu.size(); ++i) {
    if (mu[i] != kUnassigned) ++load[static_cast<std::size_t>(mu[i])];
  }
  for (AgentIndex i = 0; i < mu.size(); ++i) {
    const int held = ranks(i, mu[i]);
    for (ObjectIndex o : p.preference(i).objects()) {
      if (ranks(i, o) >= held) break;
      if (load[static_cast<std::size_t>(o)] < p.capacity(o)) return false;
    }
  }
  return true;
}

inline bool acceptable_only(const Problem& p, const Matching& mu) {
  for (AgentIndex i = 0; i < mu.size(); ++i) {
    if (mu[i] != kUnassigned && !p.preference(i).acceptable(mu[i])) return false;
  }
  return true;
}

}  // namespace detail

/// Weight of agents preferring mu to nu minus weight of agents preferring nu
/// to mu.
inline Margin popularity_margin(const Problem& p, const Matching& mu, const Matching& nu,
                                Weighting mode = Weighting::weighted) {
  detail::require_valid(p, mu, "popularity_margin");
  detail::require_valid(p, nu, "popularity_margin");
  Margin margin = 0;
  for (AgentIndex i = 0; i < p.agent_count(); ++i) {
    const Weight w = mode == Weighting::unit ? 1 : p.weight(i);
    const Preference& pref = p.preference(i);
    if (pref.prefers(mu[i], nu[i])) {
      margin += w;
    } else if (pref.prefers(nu[i], mu[i])) {
      margin -= w;
    }
  }
  return margin;
}

struct PopularityVerdict {
  bool popular = true;
  std::optional<Matching> challenger;  // maximal-margin, canonically first
  Margin challenger_margin = 0;

  explicit operator bool() const noexcept { return popular; }
};

/// Decides whether no matching is more (w-)popular than mu. On failure the
/// witness is the canonically first challenger of maximal margin.
inline PopularityVerdict is_w_popular(const Problem& p, const Matching& mu,
                                      Weighting mode = Weighting::weighted,
                                      std::uint64_t cap = Limits{}.matchings) {
  detail::require_valid(p, mu, "is_w_popular");
  require_matching_cap(p, cap);
  const detail::RankTable ranks(p);
  const auto w = detail::effective_weights(p, mode);
  detail::ChallengerSearch search(p, ranks, w, mu);
  auto best = search.run(/*first_only=*/false);
  if (!best) return {};
  return {false, std::move(best->first), best->second};
}

/// Pure decision without the maximal-margin witness; stops at the first
/// challenger found.
inline bool has_challenger(const Problem& p, const Matching& mu,
                           Weighting mode = Weighting::weighted,
                           std::uint64_t cap = Limits{}.matchings) {
  detail::require_valid(p, mu, "has_challenger");
  require_matching_cap(p, cap);
  const detail::RankTable ranks(p);
  const auto w = detail::effective_weights(p, mode);
  detail::ChallengerSearch search(p, ranks, w, mu);
  return search.run(/*first_only=*/true).has_value();
}

namespace detail {

/// Visits the matchings that can at all be popular (acceptable objects only,
/// nothing wasted) and keeps those without a challenger. `stop_at_first`
/// turns this into an existence test.
inline std::vector<Matching> popular_matchings(const Problem& p, Weighting mode,
                                               std::uint64_t cap, bool stop_at_first) {
  require_matching_cap(p, cap);
  const RankTable ranks(p);
  const auto w = effective_weights(p, mode);
  std::vector<Matching> out;

  Matching mu(p.agent_count());
  std::vector<int> left = p.capacities();
  auto rec = [&](auto& self, AgentIndex i) -> bool {
    if (i == p.agent_count()) {
      if (!non_wasteful_with(p, ranks, mu)) return true;
      ChallengerSearch search(p, ranks, w, mu);
      if (!search.run(/*first_only=*/true)) {
        out.push_back(mu);
        return !stop_at_first;
      }
      return true;
    }
    mu.assign(i, kUnassigned);
    if (!self(self, i + 1)) return false;
    // Canonical order is by object index, so walk acceptable objects sorted.
    std::vector<ObjectIndex> options = p.preference(i).objects();
    std::sort(options.begin(), options.end());
    for (ObjectIndex o : options) {
      auto& slot = left[static_cast<std::size_t>(o)];
      if (slot == 0) continue;
      --slot;
      mu.assign(i, o);
      const bool go_on = self(self, i + 1);
      ++slot;
      if (!go_on) return false;
    }
    mu.assign(i, kUnassigned);
    return true;
  };
  rec(rec, 0);
  return out;
}

}  // namespace detail

/// All (w-)popular matchings in canonical order; empty means none exists.
inline std::vector<Matching> w_popular_set(const Problem& p, Weighting mode = Weighting::weighted,
                                           std::uint64_t cap = Limits{}.matchings) {
  return detail::popular_matchings(p, mode, cap, /*stop_at_first=*/false);
}

inline bool w_popular_exists(const Problem& p, Weighting mode = Weighting::weighted,
                             std::uint64_t cap = Limits{}.matchings) {
  return !detail::popular_matchings(p, mode, cap, /*stop_at_first=*/true).empty();
}

struct ParetoVerdict {
  bool efficient = true;
  std::optional<Matching> improvement;  // canonically first Pareto improvement

  explicit operator bool() const noexcept { return efficient; }
};

inline ParetoVerdict is_pareto_efficient(const Problem& p, const Matching& mu,
                                         std::uint64_t cap = Limits{}.matchings) {
  detail::require_valid(p, mu, "is_pareto_efficient");
  require_matching_cap(p, cap);
  const detail::RankTable ranks(p);
  const std::size_t n = p.agent_count();

  // Agents may only move to objects at least as good as what they hold.
  std::vector<bool> can_improve_from(n + 1, false);
  for (std::size_t i = n; i-- > 0;) {
    can_improve_from[i] = can_improve_from[i + 1] || ranks(i, mu[i]) > 0;
  }
  Matching nu(n);
  std::vector<int> left = p.capacities();
  std::optional<Matching> found;
  auto rec = [&](auto& self, AgentIndex i, bool strict) -> bool {
    if (!strict && !can_improve_from[i]) return true;
    if (i == n) {
      found = nu;
      return false;
    }
    const int held = ranks(i, mu[i]);
    if (ranks(i, kUnassigned) <= held) {
      nu.assign(i, kUnassigned);
      if (!self(self, i + 1, strict || ranks(i, kUnassigned) < held)) return false;
    }
    for (std::size_t o = 0; o < left.size(); ++o) {
      const auto oi = static_cast<ObjectIndex>(o);
      if (left[o] == 0 || ranks(i, oi) > held) continue;
      --left[o];
      nu.assign(i, oi);
      const bool go_on = self(self, i + 1, strict || ranks(i, oi) < held);
      ++left[o];
      if (!go_on) return false;
    }
    nu.assign(i, kUnassigned);
    return true;
  };
  rec(rec, 0, false);
  if (!found) return {};
  return {false, std::move(found)};
}

struct WastefulnessVerdict {
  bool non_wasteful = true;
  std::optional<std::pair<AgentIndex, ObjectIndex>> witness;

  explicit operator bool() const noexcept { return non_wasteful; }
};

/// No agent prefers an object that still has spare capacity. The witness is
/// the first such agent with its most preferred spare object.
inline WastefulnessVerdict is_non_wasteful(const Problem& p, const Matching& mu) {
  detail::require_valid(p, mu, "is_non_wasteful");
  std::vector<int> load(p.object_count(), 0);
  for (AgentIndex i = 0; i < mu.size(); ++i) {
    if (mu[i] != kUnassigned) ++load[static_cast<std::size_t>(mu[i])];
  }
  for (AgentIndex i = 0; i < mu.size(); ++i) {
    const Preference& pref = p.preference(i);
    for (ObjectIndex o : pref.objects()) {
      if (!pref.prefers(o, mu[i])) break;
      if (load[static_cast<std::size_t>(o)] < p.capacity(o)) {
        return {false, std::make_pair(i, o)};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Popularity digraph

/// Nodes are all matchings in canonical order; an edge u -> v means node u is
/// strictly more popular than node v. Zero-margin pairs carry no edge.
struct PopularityDigraph {
  std::vector<Matching> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::size_t> in_degree() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& e : edges) ++deg[e.second];
    return deg;
  }

  /// Some directed cycle as a node list, or empty when the digraph is acyclic.
  std::vector<std::size_t> find_cycle() const {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const auto& e : edges) adj[e.first].push_back(e.second);
    enum : char { white, grey, black };
    std::vector<char> colour(nodes.size(), white);
    std::vector<std::size_t> parent(nodes.size(), 0);
    for (std::size_t root = 0; root < nodes.size(); ++root) {
      if (colour[root] != white) continue;
      // Iterative DFS with explicit edge cursors.
      std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
      colour[root] = grey;
      while (!stack.empty()) {
        auto& [u, next] = stack.back();
        if (next == adj[u].size()) {
          colour[u] = black;
          stack.pop_back();
          continue;
        }
        const std::size_t v = adj[u][next++];
        if (colour[v] == grey) {
          std::vector<std::size_t> cycle{v};
          for (std::size_t x = u; x != v; x = parent[x]) cycle.push_back(x);
          std::reverse(cycle.begin() + 1, cycle.end());
          return cycle;
        }
        if (colour[v] == white) {
          colour[v] = grey;
          parent[v] = u;
          stack.emplace_back(v, 0);
        }
      }
    }
    return {};
  }
};

inline PopularityDigraph popularity_digraph(const Problem& p, Weighting mode = Weighting::weighted,
                                            std::uint64_t cap = Limits{}.matchings) {
  PopularityDigraph g;
  g.nodes = enumerate_matchings(p, cap);
  const detail::RankTable ranks(p);
  const auto w = detail::effective_weights(p, mode);
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (std::size_t v = u + 1; v < g.nodes.size(); ++v) {
      Margin margin = 0;
      for (AgentIndex i = 0; i < p.agent_count(); ++i) {
        const int ru = ranks(i, g.nodes[u][i]);
        const int rv = ranks(i, g.nodes[v][i]);
        margin += ru < rv ? w[i] : (ru > rv ? -w[i] : 0);
      }
      if (margin > 0) g.edges.emplace_back(u, v);
      if (margin < 0) g.edges.emplace_back(v, u);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

inline std::string to_dot(const Problem& p, const PopularityDigraph& g) {
  std::ostringstream os;
  os << "digraph popularity {\n";
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    os << "  n" << u << " [label=\"" << compact(p, g.nodes[u]) << "\"];\n";
  }
  for (const auto& [u, v] : g.edges) os << "  n" << u << " -> n" << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace popmatch
