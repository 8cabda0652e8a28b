#pragma once

// The popmatch command line. run() is the whole program minus main(), so
// tests can drive it with argument vectors and captured streams.
//
// Exit codes: 0 success / property holds, 1 counterexample, 2 input error,
// 3 resource cap exceeded.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popmatch/axioms.hpp"
#include "popmatch/constructions.hpp"
#include "popmatch/equilibrium.hpp"
#include "popmatch/json_io.hpp"
#include "popmatch/mechanisms.hpp"
#include "popmatch/popularity.hpp"

namespace popmatch::cli {

enum Exit : int { ok = 0, counterexample = 1, input_error = 2, resource_error = 3 };

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string matching;
  std::string mechanism;
  std::string ordering;
  std::string axiom = "all";
  std::string weights;
  std::string free_agents;
  std::string universe;
  std::string fixture;
  std::string name = "all";
  std::string emit_dir;
  std::string output;
  std::string report;
  std::string format;
  bool unit = false;
  bool list = false;
  bool check_facts = false;
  Limits limits;
  std::size_t misreport_objects = 6;
  int cccr_max_capacity = 2;
};

namespace detail {

inline std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != std::string(v).size() || x == 0) throw std::invalid_argument(name);
    return x;
  } catch (const std::exception&) {
    throw InputError(std::string("environment variable ") + name + " must be a positive integer");
  }
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InputError("empty item in list '" + s + "'");
    out.push_back(item);
  }
  return out;
}

inline Problem load_problem(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  try {
    return parse_problem(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

inline std::string indent(const std::string& text, const std::string& pad = "  ") {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out += pad + line + "\n";
  return out;
}

inline std::string render_preference(const Problem& p, const Preference& pref) {
  if (pref.empty()) return "(none)";
  std::string out;
  for (ObjectIndex o : pref.objects()) {
    if (!out.empty()) out += ",";
    out += p.object_id(o);
  }
  return out;
}

inline std::string render_profile(const Problem& p, const std::vector<Preference>& prefs) {
  std::string out;
  for (AgentIndex i : canonical_order(p)) {
    out += p.agent_id(i) + ": " + render_preference(p, prefs[i]) + "\n";
  }
  return out;
}

inline std::string render_witness(const Witness& w) {
  const Problem& p = w.problem;
  std::ostringstream os;
  if (w.agent) os << "agent: " << p.agent_id(*w.agent) << "\n";
  if (w.other) os << "other agent: " << p.agent_id(*w.other) << "\n";
  if (w.object) os << "object: " << p.object_id(*w.object) << "\n";
  os << "preferences:\n" << indent(render_profile(p, p.preferences()));
  os << "capacities:";
  for (std::size_t o = 0; o < p.object_count(); ++o) {
    os << " " << p.object_id(static_cast<ObjectIndex>(o)) << "=" << p.capacity(static_cast<ObjectIndex>(o));
  }
  os << "\noutcome:\n" << indent(render_matching(p, w.outcome));
  if (w.misreport) os << "misreport: " << render_preference(p, *w.misreport) << "\n";
  if (w.deviation_outcome) os << "outcome after misreport:\n" << indent(render_matching(p, *w.deviation_outcome));
  if (w.alt_problem) {
    const Problem& q = *w.alt_problem;
    os << "second problem:\n" << indent(render_profile(q, q.preferences()));
    os << "  capacities:";
    for (std::size_t o = 0; o < q.object_count(); ++o) {
      os << " " << q.object_id(static_cast<ObjectIndex>(o)) << "=" << q.capacity(static_cast<ObjectIndex>(o));
    }
    os << "\n";
  }
  if (w.alt_outcome) os << "second outcome:\n" << indent(render_matching(*w.alt_problem, *w.alt_outcome));
  if (w.reference) os << "reference matching:\n" << indent(render_matching(p, *w.reference));
  return os.str();
}

inline std::string render_report(const AuditReport& r) {
  std::ostringstream os;
  os << "axiom: " << axiom_name(r.axiom) << "\n"
     << "mechanism: " << r.mechanism << "\n"
     << "verdict: " << (r.holds ? "holds on family" : "counterexample") << "\n"
     << "instances checked: " << r.instances_checked << " of " << r.family.size() << "\n";
  if (!r.note.empty()) os << "note: " << r.note << "\n";
  if (r.witness) os << "witness:\n" << indent(render_witness(*r.witness));
  return os.str();
}

inline std::string render_equilibrium_report(const EquilibriumReport& r) {
  std::ostringstream os;
  os << "w-popular in equilibrium: ";
  if (r.vacuous) {
    os << "holds (no w-popular matching exists)\n";
  } else if (r.holds) {
    os << "holds (" << r.equilibria_checked << " equilibria checked)\n";
  } else {
    os << "counterexample\n"
       << "equilibrium reports:\n" << indent(render_profile(r.truth, *r.profile))
       << "equilibrium outcome:\n" << indent(render_matching(r.truth, *r.outcome))
       << "a w-popular matching:\n" << indent(render_matching(r.truth, *r.reference));
  }
  return os.str();
}

inline std::string weight_class_text(const WeightClass& wc) {
  std::vector<std::string> parts;
  if (wc.distinct) parts.emplace_back("distinct");
  if (wc.essentially_distinct) parts.emplace_back("essentially-distinct");
  if (parts.empty()) parts.emplace_back("neither distinct nor essentially-distinct");
  if (wc.cumulatively_ordered) parts.emplace_back("cumulatively-ordered");
  std::string out;
  for (const auto& s : parts) out += (out.empty() ? "" : ", ") + s;
  return out;
}

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;

  std::string format(const std::string& fallback) const {
    return cfg.format.empty() ? fallback : cfg.format;
  }
  Weighting weighting() const { return cfg.unit ? Weighting::unit : Weighting::weighted; }
  AuditOptions audit_options() const {
    AuditOptions o;
    o.limits = cfg.limits;
    o.misreport_objects = cfg.misreport_objects;
    o.cccr_max_capacity = cfg.cccr_max_capacity;
    return o;
  }
  GameOptions game_options() const {
    GameOptions o;
    o.limits = cfg.limits;
    o.strategy_objects = cfg.misreport_objects;
    return o;
  }
};

inline int cmd_solve(const Context& c) {
  const Problem p = load_problem(c.cfg.input);
  Mechanism mech = sd_by_weights();
  if (!c.cfg.mechanism.empty()) {
    if (!c.cfg.ordering.empty()) throw InputError("--ordering and --mechanism are exclusive");
    mech = parse_mechanism(c.cfg.mechanism);
  } else if (!c.cfg.ordering.empty() && c.cfg.ordering != "weights") {
    mech = sd_by_ordering(split_list(c.cfg.ordering));
  }
  const Matching mu = mech(p);
  if (!c.cfg.output.empty()) write_file(c.cfg.output, serialize_matching(p, mu));
  if (c.format("json") == "json") {
    c.out << serialize_matching(p, mu);
  } else {
    c.out << render_matching(p, mu);
  }
  return ok;
}

inline int cmd_popular(const Context& c) {
  const Problem p = load_problem(c.cfg.input);
  const bool json = c.format("text") == "json";
  if (!c.cfg.matching.empty()) {
    Matching mu = [&] {
      try {
        return parse_matching(p, read_file(c.cfg.matching));
      } catch (const InputError& e) {
        throw InputError(c.cfg.matching + ": " + e.what());
      }
    }();
    auto check = validate_matching(p, mu);
    if (!check.valid) throw InputError(c.cfg.matching + ": " + check.reason);
    auto v = is_w_popular(p, mu, c.weighting(), c.cfg.limits.matchings);
    if (json) {
      Json j{{"popular", v.popular}};
      if (v.challenger) {
        j["challenger"] = matching_to_json(p, *v.challenger);
        j["margin"] = v.challenger_margin;
      }
      c.out << j.dump(2) << "\n";
    } else if (v.popular) {
      c.out << "w-popular: yes\n";
    } else {
      c.out << "w-popular: no\nchallenger (margin +" << v.challenger_margin << "):\n"
            << indent(render_matching(p, *v.challenger));
    }
    return v.popular ? ok : counterexample;
  }
  const auto set = w_popular_set(p, c.weighting(), c.cfg.limits.matchings);
  if (json) {
    Json list = Json::array();
    for (const auto& mu : set) list.push_back(matching_to_json(p, mu));
    c.out << Json{{"w_popular_set", list}}.dump(2) << "\n";
  } else if (set.empty()) {
    c.out << "w-popular set: empty\n";
  } else {
    c.out << "w-popular set: " << set.size() << (set.size() == 1 ? " matching\n" : " matchings\n");
    for (std::size_t k = 0; k < set.size(); ++k) {
      c.out << "#" << k + 1 << "\n" << indent(render_matching(p, set[k]));
    }
  }
  return ok;
}

inline int cmd_classify(const Context& c) {
  std::vector<Weight> weights;
  std::vector<std::string> ids;
  if (!c.cfg.weights.empty()) {
    if (!c.cfg.input.empty()) throw InputError("--weights and --input are exclusive");
    for (const auto& s : split_list(c.cfg.weights)) {
      std::size_t used = 0;
      long long w = 0;
      try {
        w = std::stoll(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || w <= 0 || w > kMaxWeight) {
        throw InputError("weight '" + s + "' is not a positive integer");
      }
      weights.push_back(w);
    }
    ids = default_agent_ids(weights.size());
  } else {
    const Problem p = load_problem(c.cfg.input);
    weights.assign(p.weights().begin(), p.weights().end());
    ids = p.market().agents;
  }
  const WeightClass wc = classify_weights(weights, ids);
  if (c.format("text") == "json") {
    Json order = Json::array();
    for (AgentIndex i : wc.canonical_order) order.push_back(ids[i]);
    c.out << Json{{"distinct", wc.distinct},
                  {"essentially_distinct", wc.essentially_distinct},
                  {"cumulatively_ordered", wc.cumulatively_ordered},
                  {"canonical_order", order}}
                 .dump(2)
          << "\n";
  } else {
    c.out << weight_class_text(wc) << "\n";
  }
  return ok;
}

inline ProblemFamily build_family(const Context& c) {
  if (!c.cfg.fixture.empty() && !c.cfg.input.empty()) {
    throw InputError("--fixture and --input are exclusive");
  }
  std::string fixture = c.cfg.fixture;
  if (fixture.empty() && c.cfg.input.empty()) {
    const std::string prefix = "fixture:";
    if (c.cfg.mechanism.rfind(prefix, 0) == 0) fixture = c.cfg.mechanism.substr(prefix.size());
  }
  if (!fixture.empty()) {
    auto found = find_fixtures(fixture);
    if (found.size() != 1 || !found.front().family) {
      throw InputError("fixture '" + fixture + "' has no problem family");
    }
    return *found.front().family;
  }
  if (c.cfg.input.empty()) throw InputError("--input or --fixture is required");
  const Problem base = load_problem(c.cfg.input);
  std::vector<AgentIndex> free;
  if (c.cfg.free_agents.empty()) {
    for (AgentIndex i = 0; i < base.agent_count(); ++i) free.push_back(i);
  } else if (c.cfg.free_agents != "none") {
    for (const auto& id : split_list(c.cfg.free_agents)) {
      auto i = base.find_agent(id);
      if (!i) throw InputError("unknown agent '" + id + "' in --free");
      free.push_back(*i);
    }
  }
  std::vector<ObjectIndex> objects;
  if (c.cfg.universe.empty()) {
    objects = all_objects(base);
  } else {
    for (const auto& id : split_list(c.cfg.universe)) {
      auto o = base.find_object(id);
      if (!o) throw InputError("unknown object '" + id + "' in --universe");
      objects.push_back(*o);
    }
  }
  return ProblemFamily(base, std::move(free), preference_universe(objects));
}

inline int cmd_check(const Context& c) {
  if (c.cfg.mechanism.empty()) throw InputError("--mechanism is required");
  const Mechanism mech = parse_mechanism(c.cfg.mechanism);
  std::vector<Axiom> axioms;
  if (c.cfg.axiom == "all") {
    axioms.assign(std::begin(kAllAxioms), std::end(kAllAxioms));
  } else {
    for (const auto& name : split_list(c.cfg.axiom)) {
      auto a = parse_axiom(name);
      if (!a) throw InputError("unknown axiom '" + name + "'");
      axioms.push_back(*a);
    }
  }
  const ProblemFamily fam = build_family(c);
  std::vector<AuditReport> reports;
  for (Axiom a : axioms) reports.push_back(audit(a, mech, fam, c.audit_options()));
  const bool all_hold =
      std::all_of(reports.begin(), reports.end(), [](const AuditReport& r) { return r.holds; });

  Json j;
  if (reports.size() == 1) {
    j = report_to_json(reports.front());
  } else {
    j = Json{{"reports", Json::array()}};
    for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
  }
  if (!c.cfg.output.empty()) write_file(c.cfg.output, j.dump(2) + "\n");
  if (c.format("text") == "json") {
    c.out << j.dump(2) << "\n";
  } else {
    for (std::size_t k = 0; k < reports.size(); ++k) {
      if (k) c.out << "\n";
      c.out << render_report(reports[k]);
    }
  }
  return all_hold ? ok : counterexample;
}

inline int cmd_equilibria(const Context& c) {
  const Problem p = load_problem(c.cfg.input);
  const Mechanism mech = parse_mechanism(c.cfg.mechanism.empty() ? "sd:weights" : c.cfg.mechanism);
  const ReportingGame game(mech, p, c.game_options());
  const auto uniq = check_equilibrium_outcome_uniqueness(game);
  const auto report = check_w_popular_in_equilibrium(game, c.cfg.limits);
  const Json report_json = equilibrium_report_to_json(report);
  if (!c.cfg.output.empty()) write_file(c.cfg.output, report_json.dump(2) + "\n");

  if (c.format("text") == "json") {
    Json j;
    j["mechanism"] = mech.name;
    j["profiles"] = game.table().size();
    j["uniqueness"] = uniqueness_to_json(p, uniq);
    j["w_popular_in_equilibrium"] = report_json;
    if (c.cfg.list) j["equilibria"] = equilibria_to_json(game);
    c.out << j.dump(2) << "\n";
  } else {
    c.out << "mechanism: " << mech.name << "\n"
          << "report profiles: " << game.table().size() << "\n"
          << "pure equilibria: " << uniq.equilibria << "\n"
          << "equilibrium outcomes: " << verdict_name(uniq.verdict) << "\n";
    for (std::size_t k = 0; k < uniq.outcomes.size(); ++k) {
      c.out << "outcome #" << k + 1 << ":\n" << indent(render_matching(p, uniq.outcomes[k]));
    }
    c.out << render_equilibrium_report(report);
    if (c.cfg.list) {
      std::size_t k = 0;
      game.for_each_equilibrium([&](ProfileIndex x) {
        c.out << "equilibrium #" << ++k << ":\n"
              << indent(render_profile(p, game.table().reports(x)));
        return true;
      });
    }
  }
  return report.holds ? ok : counterexample;
}

inline int cmd_digraph(const Context& c) {
  const Problem p = load_problem(c.cfg.input);
  const auto g = popularity_digraph(p, c.weighting(), c.cfg.limits.matchings);
  const std::string fmt = c.format("dot");
  if (fmt == "dot") {
    c.out << to_dot(p, g);
  } else if (fmt == "json") {
    Json nodes = Json::array();
    for (const auto& mu : g.nodes) nodes.push_back(matching_to_json(p, mu));
    Json edges = Json::array();
    for (const auto& [u, v] : g.edges) edges.push_back(Json::array({u, v}));
    c.out << Json{{"nodes", nodes}, {"edges", edges}}.dump(2) << "\n";
  } else {
    const auto cycle = g.find_cycle();
    const auto indeg = g.in_degree();
    c.out << "matchings: " << g.nodes.size() << "\nedges: " << g.edges.size() << "\n";
    c.out << "unbeaten: " << std::count(indeg.begin(), indeg.end(), std::size_t{0}) << "\n";
    if (cycle.empty()) {
      c.out << "cycle: none\n";
    } else {
      c.out << "cycle:\n";
      for (std::size_t v : cycle) c.out << "  " << compact(p, g.nodes[v]) << "\n";
    }
  }
  return ok;
}

inline int cmd_fixtures(const Context& c) {
  const auto found = find_fixtures(c.cfg.name);
  bool all_ok = true;
  if (!c.cfg.emit_dir.empty()) {
    std::filesystem::create_directories(c.cfg.emit_dir);
  }
  Json listing = Json::array();
  for (const auto& f : found) {
    Json entry{{"name", f.name}};
    if (f.mechanism) entry["mechanism"] = *f.mechanism;
    if (f.violates) entry["violates"] = std::string(axiom_name(*f.violates));
    if (!c.cfg.emit_dir.empty()) {
      const auto path = std::filesystem::path(c.cfg.emit_dir) / (f.name + ".json");
      write_file(path.string(), serialize_problem(f.problem));
      entry["file"] = path.string();
    }
    Json facts = Json::array();
    for (const auto& fact : f.facts) {
      Json fj{{"claim", fact.claim}};
      if (c.cfg.check_facts) {
        const bool holds = fact.holds();
        all_ok = all_ok && holds;
        fj["holds"] = holds;
      }
      facts.push_back(fj);
    }
    entry["facts"] = facts;
    listing.push_back(entry);
  }
  if (c.format("text") == "json") {
    c.out << listing.dump(2) << "\n";
  } else {
    for (const auto& e : listing) {
      c.out << e["name"].get<std::string>();
      if (e.contains("file")) c.out << " -> " << e["file"].get<std::string>();
      c.out << "\n";
      for (const auto& fj : e["facts"]) {
        c.out << "  ";
        if (fj.contains("holds")) c.out << (fj["holds"].get<bool>() ? "[ok] " : "[FAILED] ");
        c.out << fj["claim"].get<std::string>() << "\n";
      }
    }
  }
  return all_ok ? ok : counterexample;
}

/// Returns the exit code for one report and writes what it found.
inline int verify_one(const Context& c, const Json& j, Json& echoed) {
  if (j.value("axiom", std::string{}) == "w-popular-in-equilibrium") {
    const EquilibriumReport r = equilibrium_report_from_json(j);
    const Mechanism mech = parse_mechanism(r.mechanism);
    if (!r.holds) {
      if (!replay_equilibrium_witness(mech, r, c.cfg.limits)) {
        throw InputError("equilibrium witness does not replay");
      }
      echoed = equilibrium_report_to_json(r);
      return counterexample;
    }
    GameOptions opts = c.game_options();
    opts.strategy_objects = std::max(opts.strategy_objects, r.truth.object_count());
    auto again = check_w_popular_in_equilibrium(mech, r.truth, opts);
    echoed = equilibrium_report_to_json(again);
    return again.holds ? ok : counterexample;
  }
  const AuditReport r = report_from_json(j);
  const Mechanism mech = parse_mechanism(r.mechanism);
  if (!r.holds) {
    if (!replay_witness(r.axiom, mech, *r.witness, r.options.limits)) {
      throw InputError(std::string(axiom_name(r.axiom)) + " witness does not replay");
    }
    echoed = report_to_json(r);
    return counterexample;
  }
  auto again = audit(r.axiom, mech, r.family, r.options);
  echoed = report_to_json(again);
  return again.holds ? ok : counterexample;
}

inline int cmd_verify(const Context& c) {
  const std::string path = c.cfg.report.empty() ? c.cfg.input : c.cfg.report;
  if (path.empty()) throw InputError("a report file is required");
  const Json j = popmatch::detail::parse_json_text(read_file(path));
  int code = ok;
  Json echoed;
  if (j.contains("reports")) {
    echoed = Json{{"reports", Json::array()}};
    for (const auto& r : j["reports"]) {
      Json one;
      code = std::max(code, verify_one(c, r, one));
      echoed["reports"].push_back(one);
    }
  } else {
    code = verify_one(c, j, echoed);
  }
  if (c.format("text") == "json") {
    c.out << echoed.dump(2) << "\n";
  } else {
    auto text = [&](const Json& r) {
      if (r.value("axiom", std::string{}) == "w-popular-in-equilibrium") {
        c.out << render_equilibrium_report(equilibrium_report_from_json(r));
      } else {
        c.out << render_report(report_from_json(r));
      }
    };
    if (echoed.contains("reports")) {
      for (const auto& r : echoed["reports"]) text(r);
    } else {
      text(echoed);
    }
    c.out << (code == counterexample ? "replayed: counterexample reproduced\n"
                                     : "replayed: holds on family\n");
  }
  return code;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Popular matchings, serial dictatorship and axiom audits"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  try {
    cfg.limits.matchings = detail::env_cap("POPMATCH_MATCHING_CAP", cfg.limits.matchings);
    cfg.limits.profiles = detail::env_cap("POPMATCH_PROFILE_CAP", cfg.limits.profiles);
    cfg.limits.instances = detail::env_cap("POPMATCH_INSTANCE_CAP", cfg.limits.instances);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "text", "dot"}));
    sub->add_option("--matching-cap", cfg.limits.matchings, "Maximum matchings enumerated")
        ->check(CLI::PositiveNumber);
    sub->add_option("--profile-cap", cfg.limits.profiles, "Maximum report profiles")
        ->check(CLI::PositiveNumber);
    sub->add_option("--instance-cap", cfg.limits.instances, "Maximum family instances")
        ->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Run SD or DA on one problem");
  solve->add_option("--input", cfg.input, "Problem file")->required();
  solve->add_option("--ordering", cfg.ordering, "'weights' or a comma-separated agent order");
  solve->add_option("--mechanism", cfg.mechanism, "Mechanism spec");
  solve->add_option("--output", cfg.output, "Write the matching file here");
  add_common(solve);

  auto* popular = app.add_subcommand("popular", "w-popular set, or verdict for one matching");
  popular->add_option("--input", cfg.input, "Problem file")->required();
  popular->add_option("--matching", cfg.matching, "Matching file to test");
  popular->add_flag("--unit", cfg.unit, "Unit weights");
  add_common(popular);

  auto* classify = app.add_subcommand("classify", "Classify a weight profile");
  classify->add_option("--weights", cfg.weights, "Comma-separated weights");
  classify->add_option("--input", cfg.input, "Problem file");
  add_common(classify);

  auto* check = app.add_subcommand("check", "Audit a mechanism over a problem family");
  check->add_option("--mechanism", cfg.mechanism, "Mechanism spec")->required();
  check->add_option("--axiom", cfg.axiom, "Axiom name, comma list, or 'all'");
  check->add_option("--input", cfg.input, "Base problem file");
  check->add_option("--fixture", cfg.fixture, "Use a fixture's family");
  check->add_option("--free", cfg.free_agents, "Free agents (default all, or 'none')");
  check->add_option("--universe", cfg.universe, "Objects the free agents rank");
  check->add_option("--misreport-objects", cfg.misreport_objects, "Cap on misreport universe size");
  check->add_option("--cccr-max-capacity", cfg.cccr_max_capacity, "Largest capacity tried")
      ->check(CLI::PositiveNumber);
  check->add_option("--output", cfg.output, "Write the JSON report here");
  add_common(check);

  auto* equilibria = app.add_subcommand("equilibria", "Pure Nash equilibria of the reporting game");
  equilibria->add_option("--input", cfg.input, "True problem file")->required();
  equilibria->add_option("--mechanism", cfg.mechanism, "Mechanism spec (default sd:weights)");
  equilibria->add_flag("--list", cfg.list, "List every equilibrium");
  equilibria->add_option("--output", cfg.output, "Write the JSON report here");
  add_common(equilibria);

  auto* digraph = app.add_subcommand("digraph", "Popularity digraph");
  digraph->add_option("--input", cfg.input, "Problem file")->required();
  digraph->add_flag("--unit", cfg.unit, "Unit weights");
  add_common(digraph);

  auto* fixtures = app.add_subcommand("fixtures", "List or emit the built-in fixtures");
  fixtures->add_option("--name", cfg.name, "Fixture or group name");
  fixtures->add_option("--emit-dir", cfg.emit_dir, "Write problem files here");
  fixtures->add_flag("--check", cfg.check_facts, "Evaluate the expected facts");
  add_common(fixtures);

  auto* verify = app.add_subcommand("verify", "Replay a JSON report");
  verify->add_option("report", cfg.report, "Report file");
  verify->add_option("--input", cfg.input, "Report file");
  add_common(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : input_error;
  }

  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  std::ostringstream buffer;
  const detail::Context ctx{cfg, buffer, err};
  int code = ok;
  try {
    if (cfg.subcommand == "solve") code = detail::cmd_solve(ctx);
    else if (cfg.subcommand == "popular") code = detail::cmd_popular(ctx);
    else if (cfg.subcommand == "classify") code = detail::cmd_classify(ctx);
    else if (cfg.subcommand == "check") code = detail::cmd_check(ctx);
    else if (cfg.subcommand == "equilibria") code = detail::cmd_equilibria(ctx);
    else if (cfg.subcommand == "digraph") code = detail::cmd_digraph(ctx);
    else if (cfg.subcommand == "fixtures") code = detail::cmd_fixtures(ctx);
    else if (cfg.subcommand == "verify") code = detail::cmd_verify(ctx);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return resource_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const Json::exception& e) {
    err << "error: malformed report: " << e.what() << "\n";
    return input_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
  out << buffer.str();
  return code;
}

inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace popmatch::cli
