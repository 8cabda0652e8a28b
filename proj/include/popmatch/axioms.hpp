#pragma once

// Exhaustive audits of a mechanism against the allocation axioms over a
// finite family of problems. Each audit returns the first counterexample in
// canonical instance order, or "holds on family" with the number of
// instances checked. Witnesses carry enough data to be replayed through the
// underlying predicates without re-running the search.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "popmatch/json_io.hpp"
#include "popmatch/mechanisms.hpp"
#include "popmatch/model.hpp"
#include "popmatch/popularity.hpp"

namespace popmatch {

// ---------------------------------------------------------------------------
// Preference universes

/// Every strict ranking of every subset of `objects`: the empty list first,
/// then by length, lexicographic within a length. Size is
/// sum_k m!/(m-k)!.
inline std::vector<Preference> preference_universe(const std::vector<ObjectIndex>& objects,
                                                   std::size_t cap = Limits{}.universe_objects) {
  if (objects.size() > cap) {
    throw ResourceError("preference universe over " + std::to_string(objects.size()) +
                        " objects exceeds the cap of " + std::to_string(cap));
  }
  std::vector<Preference> out;
  std::vector<ObjectIndex> prefix;
  std::vector<bool> used(objects.size(), false);
  for (std::size_t length = 0; length <= objects.size(); ++length) {
    auto rec = [&](auto& self) -> void {
      if (prefix.size() == length) {
        out.emplace_back(prefix);
        return;
      }
      for (std::size_t k = 0; k < objects.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        prefix.push_back(objects[k]);
        self(self);
        prefix.pop_back();
        used[k] = false;
      }
    };
    rec(rec);
  }
  return out;
}

inline std::vector<ObjectIndex> all_objects(const Problem& p) {
  std::vector<ObjectIndex> out(p.object_count());
  std::iota(out.begin(), out.end(), ObjectIndex{0});
  return out;
}

inline std::vector<Preference> preference_universe(const Problem& p,
                                                   std::size_t cap = Limits{}.universe_objects) {
  return preference_universe(all_objects(p), cap);
}

// ---------------------------------------------------------------------------
// Families

/// A base problem whose `free` agents range independently over `universe`;
/// everyone else keeps the base preference.
class ProblemFamily {
 public:
  ProblemFamily(Problem base, std::vector<AgentIndex> free, std::vector<Preference> universe)
      : base_(std::move(base)), free_(std::move(free)), universe_(std::move(universe)) {
    for (AgentIndex i : free_) {
      if (i >= base_.agent_count()) throw InputError("free agent out of range");
    }
    if (!free_.empty() && universe_.empty()) throw InputError("empty preference universe");
  }

  static ProblemFamily single(Problem base) { return {std::move(base), {}, {}}; }

  /// All agents free over the full universe of the base problem's objects.
  static ProblemFamily all_free(Problem base, std::size_t cap = Limits{}.universe_objects) {
    std::vector<AgentIndex> free(base.agent_count());
    std::iota(free.begin(), free.end(), AgentIndex{0});
    auto universe = preference_universe(base, cap);
    return {std::move(base), std::move(free), std::move(universe)};
  }

  const Problem& base() const noexcept { return base_; }
  const std::vector<AgentIndex>& free_agents() const noexcept { return free_; }
  const std::vector<Preference>& universe() const noexcept { return universe_; }

  std::uint64_t size() const {
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < free_.size(); ++k) {
      count = detail::saturating_mul(count, universe_.size());
    }
    return count;
  }

  /// Visits instances in canonical order (first free agent varies slowest).
  /// `fn` returns false to stop.
  template <typename F>
  void for_each(F&& fn, std::uint64_t cap = Limits{}.instances) const {
    if (size() > cap) {
      throw ResourceError("family of " + std::to_string(size()) + " instances exceeds the cap of " +
                          std::to_string(cap));
    }
    std::vector<std::size_t> digit(free_.size(), 0);
    std::vector<Preference> prefs = base_.preferences();
    for (;;) {
      for (std::size_t k = 0; k < free_.size(); ++k) prefs[free_[k]] = universe_[digit[k]];
      if (!fn(base_.with_preferences(prefs))) return;
      std::size_t k = free_.size();
      while (k-- > 0) {
        if (++digit[k] < universe_.size()) break;
        digit[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) return;
    }
  }

 private:
  Problem base_;
  std::vector<AgentIndex> free_;
  std::vector<Preference> universe_;
};

// ---------------------------------------------------------------------------
// Reports

enum class Axiom {
  strategy_proofness,
  w_popularity,
  non_wastefulness,
  pareto_efficiency,
  dispute_resolutions,
  two_agent_cccr,
};

inline constexpr Axiom kAllAxioms[] = {Axiom::strategy_proofness, Axiom::w_popularity,
                                       Axiom::non_wastefulness,   Axiom::pareto_efficiency,
                                       Axiom::dispute_resolutions, Axiom::two_agent_cccr};

inline std::string_view axiom_name(Axiom a) {
  switch (a) {
    case Axiom::strategy_proofness: return "strategy-proofness";
    case Axiom::w_popularity: return "w-popularity";
    case Axiom::non_wastefulness: return "non-wastefulness";
    case Axiom::pareto_efficiency: return "pareto-efficiency";
    case Axiom::dispute_resolutions: return "dispute-resolutions";
    case Axiom::two_agent_cccr: return "two-agent-cccr";
  }
  return "?";
}

inline std::optional<Axiom> parse_axiom(std::string_view name) {
  for (Axiom a : kAllAxioms) {
    if (axiom_name(a) == name) return a;
  }
  return std::nullopt;
}

struct AuditOptions {
  Limits limits;
  /// Misreports range over the full universe of the problem's objects, which
  /// is allowed to be larger than the default universe cap.
  std::size_t misreport_objects = 6;
  /// Capacity vectors tried by the two-agent conflict audit: {1..max}^m.
  int cccr_max_capacity = 2;
};

/// Replayable evidence of one violation. Which optional fields are set
/// depends on the axiom.
struct Witness {
  Witness(Problem p, Matching mu) : problem(std::move(p)), outcome(std::move(mu)) {}

  Problem problem;
  Matching outcome;
  std::optional<AgentIndex> agent;
  std::optional<AgentIndex> other;
  std::optional<ObjectIndex> object;
  std::optional<Preference> misreport;
  std::optional<Matching> deviation_outcome;
  std::optional<Problem> alt_problem;
  std::optional<Matching> alt_outcome;
  std::optional<Matching> reference;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct AuditReport {
  Axiom axiom;
  std::string mechanism;
  bool holds = true;
  std::uint64_t instances_checked = 0;
  std::optional<Witness> witness;
  ProblemFamily family;
  AuditOptions options;
  std::string note;

  explicit operator bool() const noexcept { return holds; }
};

namespace detail {

inline AuditReport start_report(Axiom axiom, const Mechanism& mech, const ProblemFamily& fam,
                                const AuditOptions& opts) {
  return AuditReport{axiom, mech.name, true, 0, std::nullopt, fam, opts, {}};
}

inline Problem reduced_dispute_problem(const Problem& p, AgentIndex i, AgentIndex j, ObjectIndex a,
                                       std::vector<int> caps) {
  caps[static_cast<std::size_t>(a)] = 1;
  std::vector<Preference> prefs(p.agent_count());
  prefs[i] = Preference{a};
  prefs[j] = Preference{a};
  return Problem(p.shared_market(), std::move(caps), std::move(prefs));
}

/// q' samples for the reduced problems: all-ones and the original vector,
/// each with q'_a = 1 (deduplicated).
inline std::vector<std::vector<int>> dispute_capacity_sample(const Problem& p) {
  std::vector<std::vector<int>> out{std::vector<int>(p.object_count(), 1)};
  if (p.capacities() != out.front()) out.push_back(p.capacities());
  return out;
}

inline std::vector<std::vector<int>> capacity_grid(std::size_t objects, int max_capacity) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(objects, 1);
  for (;;) {
    out.push_back(v);
    std::size_t k = objects;
    while (k-- > 0) {
      if (++v[k] <= max_capacity) break;
      v[k] = 1;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace detail

inline constexpr const char* kDisputeSampleNote =
    "q' tested over {all-ones, original}, each with q'_a = 1";

inline AuditReport check_strategy_proofness(const Mechanism& mech, const ProblemFamily& fam,
                                            const AuditOptions& opts = {}) {
  auto report = detail::start_report(Axiom::strategy_proofness, mech, fam, opts);
  const auto misreports = preference_universe(fam.base(), opts.misreport_objects);
  fam.for_each(
      [&](const Problem& p) {
        ++report.instances_checked;
        const Matching mu = mech(p);
        for (AgentIndex i = 0; i < p.agent_count(); ++i) {
          const Preference& truth = p.preference(i);
          if (truth.rank(mu[i]) == 0) continue;
          for (const Preference& lie : misreports) {
            if (lie == truth) continue;
            const Problem deviated = p.with_preference(i, lie);
            const Matching nu = mech(deviated);
            if (truth.prefers(nu[i], mu[i])) {
              Witness w{p, mu};
              w.agent = i;
              w.misreport = lie;
              w.deviation_outcome = nu;
              report.holds = false;
              report.witness = std::move(w);
              return false;
            }
          }
        }
        return true;
      },
      opts.limits.instances);
  return report;
}

/// Wherever a w-popular matching exists the outcome must be one.
inline AuditReport check_w_popularity(const Mechanism& mech, const ProblemFamily& fam,
                                      const AuditOptions& opts = {}) {
  auto report = detail::start_report(Axiom::w_popularity, mech, fam, opts);
  fam.for_each(
      [&](const Problem& p) {
        ++report.instances_checked;
        const Matching mu = mech(p);
        if (!has_challenger(p, mu, Weighting::weighted, opts.limits.matchings)) return true;
        auto popular = detail::popular_matchings(p, Weighting::weighted, opts.limits.matchings,
                                                 /*stop_at_first=*/true);
        if (popular.empty()) return true;
        Witness w{p, mu};
        w.reference = popular.front();
        report.holds = false;
        report.witness = std::move(w);
        return false;
      },
      opts.limits.instances);
  return report;
}

inline AuditReport check_non_wastefulness(const Mechanism& mech, const ProblemFamily& fam,
                                          const AuditOptions& opts = {}) {
  auto report = detail::start_report(Axiom::non_wastefulness, mech, fam, opts);
  fam.for_each(
      [&](const Problem& p) {
        ++report.instances_checked;
        const Matching mu = mech(p);
        auto verdict = is_non_wasteful(p, mu);
        if (verdict) return true;
        Witness w{p, mu};
        w.agent = verdict.witness->first;
        w.object = verdict.witness->second;
        report.holds = false;
        report.witness = std::move(w);
        return false;
      },
      opts.limits.instances);
  return report;
}

inline AuditReport check_pareto(const Mechanism& mech, const ProblemFamily& fam,
                                const AuditOptions& opts = {}) {
  auto report = detail::start_report(Axiom::pareto_efficiency, mech, fam, opts);
  fam.for_each(
      [&](const Problem& p) {
        ++report.instances_checked;
        const Matching mu = mech(p);
        auto verdict = is_pareto_efficient(p, mu, opts.limits.matchings);
        if (verdict) return true;
        Witness w{p, mu};
        w.reference = verdict.improvement;
        report.holds = false;
        report.witness = std::move(w);
        return false;
      },
      opts.limits.instances);
  return report;
}

/// If i envies j's object a and still gets nothing when reporting only a,
/// then in every reduced problem where only i and j want a single copy of a,
/// j must get it and i nothing.
inline AuditReport check_preserves_dispute_resolutions(const Mechanism& mech,
                                                       const ProblemFamily& fam,
                                                       const AuditOptions& opts = {}) {
  auto report = detail::start_report(Axiom::dispute_resolutions, mech, fam, opts);
  report.note = kDisputeSampleNote;
  fam.for_each(
      [&](const Problem& p) {
        ++report.instances_checked;
        const Matching mu = mech(p);
        for (AgentIndex i = 0; i < p.agent_count(); ++i) {
          for (AgentIndex j = 0; j < p.agent_count(); ++j) {
            const ObjectIndex a = mu[j];
            if (i == j || a == kUnassigned || !p.preference(i).prefers(a, mu[i])) continue;
            const Problem only_a = p.with_preference(i, Preference{a});
            const Matching dev = mech(only_a);
            if (dev[i] != kUnassigned) continue;
            for (auto caps : detail::dispute_capacity_sample(p)) {
              Problem reduced = detail::reduced_dispute_problem(p, i, j, a, std::move(caps));
              const Matching nu = mech(reduced);
              if (nu[i] == kUnassigned && nu[j] == a) continue;
              Witness w{p, mu};
              w.agent = i;
              w.other = j;
              w.object = a;
              w.misreport = Preference{a};
              w.deviation_outcome = dev;
              w.alt_problem = std::move(reduced);
              w.alt_outcome = nu;
              report.holds = false;
              report.witness = std::move(w);
              return false;
            }
          }
        }
        return true;
      },
      opts.limits.instances);
  return report;
}

/// When i and j both find only a acceptable and split {a, empty} under two
/// capacity vectors, each gets the same thing under both.
inline AuditReport check_two_agent_cccr(const Mechanism& mech, const ProblemFamily& fam,
                                        const AuditOptions& opts = {}) {
  auto report = detail::start_report(Axiom::two_agent_cccr, mech, fam, opts);
  report.note = "capacity vectors tested over {1.." + std::to_string(opts.cccr_max_capacity) +
                "}^m plus the instance's own";
  fam.for_each(
      [&](const Problem& p) {
        ++report.instances_checked;
        std::vector<std::vector<int>> grid =
            detail::capacity_grid(p.object_count(), opts.cccr_max_capacity);
        if (std::find(grid.begin(), grid.end(), p.capacities()) == grid.end()) {
          grid.insert(grid.begin(), p.capacities());
        }
        std::vector<std::optional<std::pair<Problem, Matching>>> outcomes(grid.size());
        auto outcome = [&](std::size_t k) -> const std::pair<Problem, Matching>& {
          if (!outcomes[k]) {
            Problem q = p.with_capacities(grid[k]);
            Matching mu = mech(q);
            outcomes[k].emplace(std::move(q), std::move(mu));
          }
          return *outcomes[k];
        };
        for (AgentIndex i = 0; i < p.agent_count(); ++i) {
          const auto& pi = p.preference(i).objects();
          if (pi.size() != 1) continue;
          const ObjectIndex a = pi.front();
          for (AgentIndex j = i + 1; j < p.agent_count(); ++j) {
            if (p.preference(j) != p.preference(i)) continue;
            std::optional<std::size_t> first_split;
            for (std::size_t k = 0; k < grid.size(); ++k) {
              const Matching& mu = outcome(k).second;
              const bool split = (mu[i] == a && mu[j] == kUnassigned) ||
                                 (mu[i] == kUnassigned && mu[j] == a);
              if (!split) continue;
              if (!first_split) {
                first_split = k;
                continue;
              }
              const Matching& base = outcome(*first_split).second;
              if (base[i] == mu[i] && base[j] == mu[j]) continue;
              Witness w{outcome(*first_split).first, base};
              w.agent = i;
              w.other = j;
              w.object = a;
              w.alt_problem = outcome(k).first;
              w.alt_outcome = mu;
              report.holds = false;
              report.witness = std::move(w);
              return false;
            }
          }
        }
        return true;
      },
      opts.limits.instances);
  return report;
}

inline AuditReport audit(Axiom axiom, const Mechanism& mech, const ProblemFamily& fam,
                         const AuditOptions& opts = {}) {
  switch (axiom) {
    case Axiom::strategy_proofness: return check_strategy_proofness(mech, fam, opts);
    case Axiom::w_popularity: return check_w_popularity(mech, fam, opts);
    case Axiom::non_wastefulness: return check_non_wastefulness(mech, fam, opts);
    case Axiom::pareto_efficiency: return check_pareto(mech, fam, opts);
    case Axiom::dispute_resolutions: return check_preserves_dispute_resolutions(mech, fam, opts);
    case Axiom::two_agent_cccr: return check_two_agent_cccr(mech, fam, opts);
  }
  throw InputError("unknown axiom");
}

// ---------------------------------------------------------------------------
// Replay

/// Re-derives the violation recorded in `w` from the predicates alone:
/// recomputes every mechanism outcome the witness mentions and checks the
/// axiom's failure condition. True iff the witness stands.
inline bool replay_witness(Axiom axiom, const Mechanism& mech, const Witness& w,
                           const Limits& limits = {}) {
  const Problem& p = w.problem;
  if (!validate_matching(p, w.outcome) || mech(p) != w.outcome) {
    if (axiom != Axiom::two_agent_cccr) return false;
  }
  switch (axiom) {
    case Axiom::strategy_proofness: {
      if (!w.agent || !w.misreport || !w.deviation_outcome) return false;
      const Matching nu = mech(p.with_preference(*w.agent, *w.misreport));
      return nu == *w.deviation_outcome &&
             p.preference(*w.agent).prefers(nu[*w.agent], w.outcome[*w.agent]);
    }
    case Axiom::w_popularity: {
      if (!w.reference) return false;
      return !is_w_popular(p, w.outcome, Weighting::weighted, limits.matchings) &&
             is_w_popular(p, *w.reference, Weighting::weighted, limits.matchings);
    }
    case Axiom::non_wastefulness: {
      if (!w.agent || !w.object) return false;
      const ObjectIndex a = *w.object;
      return static_cast<int>(w.outcome.holders(a)) < p.capacity(a) &&
             p.preference(*w.agent).prefers(a, w.outcome[*w.agent]);
    }
    case Axiom::pareto_efficiency: {
      if (!w.reference || !validate_matching(p, *w.reference)) return false;
      bool strict = false;
      for (AgentIndex i = 0; i < p.agent_count(); ++i) {
        const Preference& pref = p.preference(i);
        if (pref.prefers(w.outcome[i], (*w.reference)[i])) return false;
        strict = strict || pref.prefers((*w.reference)[i], w.outcome[i]);
      }
      return strict;
    }
    case Axiom::dispute_resolutions: {
      if (!w.agent || !w.other || !w.object || !w.alt_problem || !w.alt_outcome) return false;
      const AgentIndex i = *w.agent, j = *w.other;
      const ObjectIndex a = *w.object;
      if (w.outcome[j] != a || !p.preference(i).prefers(a, w.outcome[i])) return false;
      if (mech(p.with_preference(i, Preference{a}))[i] != kUnassigned) return false;
      const Problem& r = *w.alt_problem;
      if (!(*r.shared_market() == *p.shared_market()) || r.capacity(a) != 1) return false;
      for (AgentIndex k = 0; k < r.agent_count(); ++k) {
        const bool pair = k == i || k == j;
        if (pair ? r.preference(k) != Preference{a} : !r.preference(k).empty()) return false;
      }
      const Matching nu = mech(r);
      return nu == *w.alt_outcome && !(nu[i] == kUnassigned && nu[j] == a);
    }
    case Axiom::two_agent_cccr: {
      if (!w.agent || !w.other || !w.object || !w.alt_problem || !w.alt_outcome) return false;
      const AgentIndex i = *w.agent, j = *w.other;
      const ObjectIndex a = *w.object;
      const Problem& q = *w.alt_problem;
      if (!(*q.shared_market() == *p.shared_market()) || q.preferences() != p.preferences()) {
        return false;
      }
      if (p.preference(i) != Preference{a} || p.preference(j) != Preference{a}) return false;
      const Matching mu = mech(p), nu = mech(q);
      if (mu != w.outcome || nu != *w.alt_outcome) return false;
      auto split = [&](const Matching& m) {
        return (m[i] == a && m[j] == kUnassigned) || (m[i] == kUnassigned && m[j] == a);
      };
      return split(mu) && split(nu) && (mu[i] != nu[i] || mu[j] != nu[j]);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// JSON

inline Json family_to_json(const ProblemFamily& fam) {
  const Problem& b = fam.base();
  Json free = Json::array();
  for (AgentIndex i : fam.free_agents()) free.push_back(b.agent_id(i));
  Json universe = Json::array();
  for (const auto& pref : fam.universe()) universe.push_back(preference_to_json(b, pref));
  return Json{{"base", problem_to_json(b)}, {"free_agents", free}, {"universe", universe}};
}

inline ProblemFamily family_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("family must be an object", "/family");
  Problem base = problem_from_json(detail::require(j, "base", "/family"));
  std::vector<AgentIndex> free;
  for (const auto& id : detail::require(j, "free_agents", "/family")) {
    auto i = id.is_string() ? base.find_agent(id.get<std::string>()) : std::nullopt;
    if (!i) throw InputError("unknown free agent", "/family/free_agents");
    free.push_back(*i);
  }
  std::vector<Preference> universe;
  const Json& u = detail::require(j, "universe", "/family");
  for (std::size_t k = 0; k < u.size(); ++k) {
    universe.push_back(preference_from_json(base, u[k], "/family/universe/" + std::to_string(k)));
  }
  return ProblemFamily(std::move(base), std::move(free), std::move(universe));
}

inline Json witness_to_json(const Witness& w) {
  const Problem& p = w.problem;
  Json j;
  j["problem"] = problem_to_json(p);
  j["outcome"] = matching_to_json(p, w.outcome);
  if (w.agent) j["agent"] = p.agent_id(*w.agent);
  if (w.other) j["other_agent"] = p.agent_id(*w.other);
  if (w.object) j["object"] = p.object_id(*w.object);
  if (w.misreport) j["misreport"] = preference_to_json(p, *w.misreport);
  if (w.deviation_outcome) j["deviation_outcome"] = matching_to_json(p, *w.deviation_outcome);
  if (w.alt_problem) j["alt_problem"] = problem_to_json(*w.alt_problem);
  if (w.alt_outcome) j["alt_outcome"] = matching_to_json(*w.alt_problem, *w.alt_outcome);
  if (w.reference) j["reference"] = matching_to_json(p, *w.reference);
  return j;
}

inline Witness witness_from_json(const Json& j) {
  using detail::require;
  Problem p = problem_from_json(require(j, "problem", "/witness"));
  Witness w{p, matching_from_json(p, require(j, "outcome", "/witness"))};
  auto agent = [&](const char* key) -> std::optional<AgentIndex> {
    if (!j.contains(key)) return std::nullopt;
    auto i = j[key].is_string() ? p.find_agent(j[key].get<std::string>()) : std::nullopt;
    if (!i) throw InputError("unknown agent", std::string("/witness/") + key);
    return i;
  };
  w.agent = agent("agent");
  w.other = agent("other_agent");
  if (j.contains("object")) {
    auto o = j["object"].is_string() ? p.find_object(j["object"].get<std::string>()) : std::nullopt;
    if (!o) throw InputError("unknown object", "/witness/object");
    w.object = o;
  }
  if (j.contains("misreport")) w.misreport = preference_from_json(p, j["misreport"], "/witness/misreport");
  if (j.contains("deviation_outcome")) w.deviation_outcome = matching_from_json(p, j["deviation_outcome"]);
  if (j.contains("alt_problem")) {
    w.alt_problem = problem_from_json(j["alt_problem"]);
    if (j.contains("alt_outcome")) w.alt_outcome = matching_from_json(*w.alt_problem, j["alt_outcome"]);
  }
  if (j.contains("reference")) w.reference = matching_from_json(p, j["reference"]);
  return w;
}

inline Json report_to_json(const AuditReport& r) {
  Json j;
  j["axiom"] = std::string(axiom_name(r.axiom));
  j["mechanism"] = r.mechanism;
  j["verdict"] = r.holds ? "holds-on-family" : "counterexample";
  j["instances_checked"] = r.instances_checked;
  if (!r.note.empty()) j["note"] = r.note;
  j["options"] = Json{{"misreport_objects", r.options.misreport_objects},
                      {"cccr_max_capacity", r.options.cccr_max_capacity},
                      {"matching_cap", r.options.limits.matchings},
                      {"instance_cap", r.options.limits.instances}};
  j["family"] = family_to_json(r.family);
  if (r.witness) j["witness"] = witness_to_json(*r.witness);
  return j;
}

inline AuditReport report_from_json(const Json& j) {
  using detail::require;
  if (!j.is_object()) throw InputError("report must be a JSON object", "");
  const Json& ax = require(j, "axiom", "");
  auto axiom = ax.is_string() ? parse_axiom(ax.get<std::string>()) : std::nullopt;
  if (!axiom) throw InputError("unknown axiom", "/axiom");
  const Json& verdict = require(j, "verdict", "");
  if (!verdict.is_string() ||
      (verdict != "holds-on-family" && verdict != "counterexample")) {
    throw InputError("verdict must be holds-on-family or counterexample", "/verdict");
  }
  AuditOptions opts;
  if (j.contains("options")) {
    const Json& o = j["options"];
    opts.misreport_objects = o.value("misreport_objects", opts.misreport_objects);
    opts.cccr_max_capacity = o.value("cccr_max_capacity", opts.cccr_max_capacity);
    opts.limits.matchings = o.value("matching_cap", opts.limits.matchings);
    opts.limits.instances = o.value("instance_cap", opts.limits.instances);
  }
  AuditReport r{*axiom,
                require(j, "mechanism", "").get<std::string>(),
                verdict == "holds-on-family",
                j.value("instances_checked", std::uint64_t{0}),
                std::nullopt,
                family_from_json(require(j, "family", "")),
                opts,
                j.value("note", std::string{})};
  if (j.contains("witness")) r.witness = witness_from_json(j["witness"]);
  if (!r.holds && !r.witness) throw InputError("counterexample without witness", "/witness");
  return r;
}

}  // namespace popmatch
