#pragma once

// Preference-reporting games. Every agent's strategy set is the full
// preference universe over the problem's objects; payoffs are ordinal and
// evaluated with the true preferences. The mechanism never sees the true
// preferences, so the table of outcomes over report profiles depends only on
// the market and capacities and can be shared by every true problem on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "popmatch/axioms.hpp"

namespace popmatch {

/// Index of a report profile: strategy indices in base |S|, agent 0 most
/// significant.
using ProfileIndex = std::uint64_t;

/// Mechanism outcomes for every report profile, packed one code per profile.
class OutcomeTable {
 public:
  OutcomeTable(const Mechanism& mech, const Problem& shape, std::vector<Preference> strategies,
               std::uint64_t cap = Limits{}.profiles)
      : shape_(shape), strategies_(std::move(strategies)) {
    const std::size_t n = shape_.agent_count();
    bits_ = 1;
    while ((std::size_t{1} << bits_) < shape_.object_count() + 1) ++bits_;
    if (n * bits_ > 64) throw ResourceError("too many agents to tabulate outcomes");
    profiles_ = 1;
    for (std::size_t k = 0; k < n; ++k) profiles_ = detail::saturating_mul(profiles_, strategies_.size());
    if (profiles_ > cap) {
      throw ResourceError("reporting game has " + std::to_string(profiles_) +
                          " profiles, over the cap of " + std::to_string(cap));
    }
    codes_.resize(profiles_);
    std::vector<std::size_t> digit(n, 0);
    std::vector<Preference> reports(n, strategies_.empty() ? Preference{} : strategies_.front());
    for (ProfileIndex x = 0; x < profiles_; ++x) {
      for (std::size_t i = 0; i < n; ++i) reports[i] = strategies_[digit[i]];
      codes_[x] = encode(mech(shape_.with_preferences(reports)));
      for (std::size_t k = n; k-- > 0;) {
        if (++digit[k] < strategies_.size()) break;
        digit[k] = 0;
      }
    }
  }

  const Problem& shape() const noexcept { return shape_; }
  const std::vector<Preference>& strategies() const noexcept { return strategies_; }
  std::uint64_t size() const noexcept { return profiles_; }
  std::size_t agent_count() const noexcept { return shape_.agent_count(); }

  /// Object of agent i in the outcome at profile x, kUnassigned for none.
  ObjectIndex object(ProfileIndex x, AgentIndex i) const noexcept {
    const auto mask = (std::uint64_t{1} << bits_) - 1;
    return static_cast<ObjectIndex>((codes_[x] >> (bits_ * i)) & mask) - 1;
  }

  std::uint64_t code(ProfileIndex x) const noexcept { return codes_[x]; }

  Matching outcome(ProfileIndex x) const {
    Matching mu(agent_count());
    for (AgentIndex i = 0; i < agent_count(); ++i) mu.assign(i, object(x, i));
    return mu;
  }

  std::vector<std::size_t> digits(ProfileIndex x) const {
    std::vector<std::size_t> d(agent_count());
    for (std::size_t k = agent_count(); k-- > 0;) {
      d[k] = static_cast<std::size_t>(x % strategies_.size());
      x /= strategies_.size();
    }
    return d;
  }

  std::vector<Preference> reports(ProfileIndex x) const {
    std::vector<Preference> out;
    for (std::size_t d : digits(x)) out.push_back(strategies_[d]);
    return out;
  }

  std::optional<ProfileIndex> index_of(const std::vector<Preference>& reports) const {
    if (reports.size() != agent_count()) return std::nullopt;
    ProfileIndex x = 0;
    for (const auto& r : reports) {
      auto it = std::find(strategies_.begin(), strategies_.end(), r);
      if (it == strategies_.end()) return std::nullopt;
      x = x * strategies_.size() + static_cast<ProfileIndex>(it - strategies_.begin());
    }
    return x;
  }

  /// Whether `truth` has the market and capacities the table was built on.
  bool fits(const Problem& truth) const {
    return *truth.shared_market() == *shape_.shared_market() &&
           truth.capacities() == shape_.capacities();
  }

  /// The packed code `code(x)` returns for profiles with outcome `mu`.
  std::uint64_t encode(const Matching& mu) const {
    std::uint64_t c = 0;
    for (AgentIndex i = 0; i < agent_count(); ++i) {
      c |= static_cast<std::uint64_t>(mu[i] + 1) << (bits_ * i);
    }
    return c;
  }

 private:
  Problem shape_;
  std::vector<Preference> strategies_;
  std::size_t bits_ = 1;
  std::uint64_t profiles_ = 0;
  std::vector<std::uint64_t> codes_;
};

struct GameOptions {
  Limits limits;
  std::size_t strategy_objects = 6;
};

class ReportingGame {
 public:
  ReportingGame(Mechanism mech, Problem truth, const GameOptions& opts = {})
      : mech_(std::move(mech)),
        truth_(std::move(truth)),
        table_(std::make_shared<const OutcomeTable>(
            mech_, truth_, preference_universe(truth_, opts.strategy_objects),
            opts.limits.profiles)) {}

  /// Shares an existing table; `truth` must sit on the table's market.
  ReportingGame(Mechanism mech, Problem truth, std::shared_ptr<const OutcomeTable> table)
      : mech_(std::move(mech)), truth_(std::move(truth)), table_(std::move(table)) {
    if (!table_->fits(truth_)) throw InputError("outcome table built for a different market");
  }

  const Mechanism& mechanism() const noexcept { return mech_; }
  const Problem& truth() const noexcept { return truth_; }
  const OutcomeTable& table() const noexcept { return *table_; }
  std::shared_ptr<const OutcomeTable> shared_table() const noexcept { return table_; }

  /// Visits every pure Nash equilibrium in profile order. `fn(x)` returns
  /// false to stop.
  template <typename F>
  void for_each_equilibrium(F&& fn) const {
    for (ProfileIndex x : equilibria()) {
      if (!fn(x)) return;
    }
  }

  /// Every pure Nash equilibrium in profile order, computed once.
  const std::vector<ProfileIndex>& equilibria() const {
    if (!equilibria_) equilibria_ = scan();
    return *equilibria_;
  }

 private:
  std::vector<ProfileIndex> scan() const {
    const OutcomeTable& t = *table_;
    const std::size_t n = t.agent_count();
    const std::uint64_t total = t.size();
    const std::uint64_t s = t.strategies().size();
    // rank_of[i][o + 1] under the true preferences.
    std::vector<std::vector<std::uint32_t>> rank_of(n);
    for (AgentIndex i = 0; i < n; ++i) {
      const Preference& pref = truth_.preference(i);
      rank_of[i].resize(truth_.object_count() + 1);
      rank_of[i][0] = static_cast<std::uint32_t>(pref.rank(kUnassigned));
      for (std::size_t o = 0; o < truth_.object_count(); ++o) {
        rank_of[i][o + 1] = static_cast<std::uint32_t>(pref.rank(static_cast<ObjectIndex>(o)));
      }
    }
    std::vector<std::uint8_t> stable(total, 1);
    std::vector<std::uint32_t> rank(s);
    std::uint64_t stride = 1;
    for (std::size_t k = n; k-- > 0;) {
      const AgentIndex i = k;
      const auto& ranks = rank_of[i];
      const std::uint64_t block = stride * s;
      for (std::uint64_t hi = 0; hi < total; hi += block) {
        for (std::uint64_t lo = 0; lo < stride; ++lo) {
          const std::uint64_t first = hi + lo;
          std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
          for (std::uint64_t d = 0; d < s; ++d) {
            rank[d] = ranks[static_cast<std::size_t>(t.object(first + d * stride, i) + 1)];
            best = std::min(best, rank[d]);
          }
          for (std::uint64_t d = 0; d < s; ++d) {
            if (rank[d] != best) stable[first + d * stride] = 0;
          }
        }
      }
      stride = block;
    }
    std::vector<ProfileIndex> out;
    for (ProfileIndex x = 0; x < total; ++x) {
      if (stable[x]) out.push_back(x);
    }
    return out;
  }

  Mechanism mech_;
  Problem truth_;
  std::shared_ptr<const OutcomeTable> table_;
  mutable std::optional<std::vector<ProfileIndex>> equilibria_;
};

/// All pure Nash equilibria as report profiles, in profile order.
inline std::vector<std::vector<Preference>> pure_nash_equilibria(const ReportingGame& g) {
  std::vector<std::vector<Preference>> out;
  for (ProfileIndex x : g.equilibria()) out.push_back(g.table().reports(x));
  return out;
}

/// Single-deviation re-check of one profile, straight through the mechanism.
inline bool is_nash_equilibrium(const Mechanism& mech, const Problem& truth,
                                const std::vector<Preference>& reports,
                                const std::vector<Preference>& strategies) {
  const Problem reported = truth.with_preferences(reports);
  const Matching mu = mech(reported);
  for (AgentIndex i = 0; i < truth.agent_count(); ++i) {
    for (const Preference& s : strategies) {
      const Matching nu = mech(reported.with_preference(i, s));
      if (truth.preference(i).prefers(nu[i], mu[i])) return false;
    }
  }
  return true;
}

enum class UniquenessVerdict { unique, multiple, no_equilibrium };

inline std::string_view verdict_name(UniquenessVerdict v) {
  switch (v) {
    case UniquenessVerdict::unique: return "unique-outcome";
    case UniquenessVerdict::multiple: return "multiple-outcomes";
    case UniquenessVerdict::no_equilibrium: return "no-equilibrium";
  }
  return "?";
}

struct UniquenessReport {
  UniquenessVerdict verdict = UniquenessVerdict::no_equilibrium;
  std::uint64_t equilibria = 0;
  /// First equilibrium profile and, for `multiple`, the first one whose
  /// outcome differs.
  std::vector<std::vector<Preference>> profiles;
  std::vector<Matching> outcomes;

  explicit operator bool() const noexcept { return verdict == UniquenessVerdict::unique; }
};

inline UniquenessReport check_equilibrium_outcome_uniqueness(const ReportingGame& g) {
  UniquenessReport r;
  std::optional<std::uint64_t> first_code;
  g.for_each_equilibrium([&](ProfileIndex x) {
    ++r.equilibria;
    const auto code = g.table().code(x);
    if (!first_code) {
      first_code = code;
      r.profiles.push_back(g.table().reports(x));
      r.outcomes.push_back(g.table().outcome(x));
    } else if (code != *first_code && r.profiles.size() == 1) {
      r.profiles.push_back(g.table().reports(x));
      r.outcomes.push_back(g.table().outcome(x));
    }
    return true;
  });
  if (r.equilibria == 0) {
    r.verdict = UniquenessVerdict::no_equilibrium;
  } else {
    r.verdict = r.profiles.size() == 1 ? UniquenessVerdict::unique : UniquenessVerdict::multiple;
  }
  return r;
}

inline UniquenessReport check_equilibrium_outcome_uniqueness(const Mechanism& mech, const Problem& p,
                                                             const GameOptions& opts = {}) {
  return check_equilibrium_outcome_uniqueness(ReportingGame(mech, p, opts));
}

struct EquilibriumReport {
  EquilibriumReport(std::string mech, Problem p) : mechanism(std::move(mech)), truth(std::move(p)) {}

  std::string mechanism;
  Problem truth;
  bool holds = true;
  /// Holds because the true problem has no w-popular matching.
  bool vacuous = false;
  std::uint64_t equilibria_checked = 0;
  std::optional<std::vector<Preference>> profile;
  std::optional<Matching> outcome;
  /// A w-popular matching at the true problem, set on counterexamples.
  std::optional<Matching> reference;
  std::size_t strategy_objects = 6;

  explicit operator bool() const noexcept { return holds; }
};

/// Every pure equilibrium outcome lies in w_popular_set(truth), unless that
/// set is empty.
inline EquilibriumReport check_w_popular_in_equilibrium(const ReportingGame& g,
                                                        const Limits& limits = {}) {
  const Problem& p = g.truth();
  EquilibriumReport r{g.mechanism().name, p};
  r.strategy_objects = p.object_count();
  const auto popular = w_popular_set(p, Weighting::weighted, limits.matchings);
  if (popular.empty()) {
    r.vacuous = true;
    return r;
  }
  std::vector<std::uint64_t> codes;
  for (const auto& mu : popular) codes.push_back(g.table().encode(mu));
  std::sort(codes.begin(), codes.end());
  g.for_each_equilibrium([&](ProfileIndex x) {
    ++r.equilibria_checked;
    if (std::binary_search(codes.begin(), codes.end(), g.table().code(x))) return true;
    r.holds = false;
    r.profile = g.table().reports(x);
    r.outcome = g.table().outcome(x);
    r.reference = popular.front();
    return false;
  });
  return r;
}

inline EquilibriumReport check_w_popular_in_equilibrium(const Mechanism& mech, const Problem& p,
                                                        const GameOptions& opts = {}) {
  auto r = check_w_popular_in_equilibrium(ReportingGame(mech, p, opts), opts.limits);
  r.strategy_objects = std::min(opts.strategy_objects, p.object_count());
  return r;
}

/// Independent re-check of an equilibrium counterexample: the profile is a
/// Nash equilibrium by single deviations, its outcome is not w-popular at the
/// true problem, and the reference matching is.
inline bool replay_equilibrium_witness(const Mechanism& mech, const EquilibriumReport& r,
                                       const Limits& limits = {}) {
  if (r.holds || !r.profile || !r.outcome || !r.reference) return false;
  const Problem& p = r.truth;
  const auto strategies = preference_universe(p, std::max(r.strategy_objects, p.object_count()));
  if (mech(p.with_preferences(*r.profile)) != *r.outcome) return false;
  if (!is_nash_equilibrium(mech, p, *r.profile, strategies)) return false;
  return has_challenger(p, *r.outcome, Weighting::weighted, limits.matchings) &&
         !has_challenger(p, *r.reference, Weighting::weighted, limits.matchings);
}

// ---------------------------------------------------------------------------
// JSON

inline Json profile_to_json(const Problem& p, const std::vector<Preference>& reports) {
  Json j = Json::object();
  for (AgentIndex i = 0; i < p.agent_count(); ++i) j[p.agent_id(i)] = preference_to_json(p, reports[i]);
  return j;
}

inline std::vector<Preference> profile_from_json(const Problem& p, const Json& j,
                                                 const std::string& path) {
  if (!j.is_object()) throw InputError("expected an object", path);
  std::vector<Preference> out(p.agent_count());
  std::vector<bool> seen(p.agent_count(), false);
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto i = p.find_agent(it.key());
    if (!i) throw InputError("unknown agent '" + it.key() + "'", path + "/" + it.key());
    out[*i] = preference_from_json(p, it.value(), path + "/" + it.key());
    seen[*i] = true;
  }
  for (AgentIndex i = 0; i < p.agent_count(); ++i) {
    if (!seen[i]) throw InputError("agent missing from profile", path + "/" + p.agent_id(i));
  }
  return out;
}

inline Json equilibria_to_json(const ReportingGame& g) {
  Json list = Json::array();
  const Problem& p = g.truth();
  for (ProfileIndex x : g.equilibria()) {
    list.push_back(Json{{"reports", profile_to_json(p, g.table().reports(x))},
                        {"outcome", matching_to_json(p, g.table().outcome(x))}});
  }
  return list;
}

inline Json uniqueness_to_json(const Problem& p, const UniquenessReport& r) {
  Json j;
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["equilibria"] = r.equilibria;
  Json witnesses = Json::array();
  for (std::size_t k = 0; k < r.profiles.size(); ++k) {
    witnesses.push_back(Json{{"reports", profile_to_json(p, r.profiles[k])},
                             {"outcome", matching_to_json(p, r.outcomes[k])}});
  }
  j["witnesses"] = witnesses;
  return j;
}

inline Json equilibrium_report_to_json(const EquilibriumReport& r) {
  Json j;
  j["axiom"] = "w-popular-in-equilibrium";
  j["mechanism"] = r.mechanism;
  j["verdict"] = r.holds ? "holds-on-family" : "counterexample";
  j["vacuous"] = r.vacuous;
  j["equilibria_checked"] = r.equilibria_checked;
  j["strategy_objects"] = r.strategy_objects;
  j["problem"] = problem_to_json(r.truth);
  if (!r.holds) {
    j["witness"] = Json{{"reports", profile_to_json(r.truth, *r.profile)},
                        {"outcome", matching_to_json(r.truth, *r.outcome)},
                        {"reference", matching_to_json(r.truth, *r.reference)}};
  }
  return j;
}

inline EquilibriumReport equilibrium_report_from_json(const Json& j) {
  using detail::require;
  Problem p = problem_from_json(require(j, "problem", ""));
  const Json& verdict = require(j, "verdict", "");
  if (!verdict.is_string() || (verdict != "holds-on-family" && verdict != "counterexample")) {
    throw InputError("verdict must be holds-on-family or counterexample", "/verdict");
  }
  EquilibriumReport r{require(j, "mechanism", "").get<std::string>(), p};
  r.holds = verdict == "holds-on-family";
  r.vacuous = j.value("vacuous", false);
  r.equilibria_checked = j.value("equilibria_checked", std::uint64_t{0});
  r.strategy_objects = j.value("strategy_objects", p.object_count());
  if (!r.holds) {
    const Json& w = require(j, "witness", "");
    r.profile = profile_from_json(p, require(w, "reports", "/witness"), "/witness/reports");
    r.outcome = matching_from_json(p, require(w, "outcome", "/witness"));
    r.reference = matching_from_json(p, require(w, "reference", "/witness"));
  }
  return r;
}

}  // namespace popmatch
