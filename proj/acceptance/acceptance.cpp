// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "popmatch/cli.hpp"

using namespace popmatch;
namespace fs = std::filesystem;

namespace {

// Wall-clock limits in seconds.
constexpr double kLimitExamples = 1;
constexpr double kLimitNonexistence = 60;
constexpr double kLimitFacts = 60;
constexpr double kLimitCharacterization = 300;
constexpr double kLimitManipulation = 120;
constexpr double kLimitIndependence = 300;
constexpr double kLimitEquilibrium = 120;
constexpr double kLimitOracles = 300;

constexpr int kRandomProfiles = 200;
constexpr int kAntisymmetryPairs = 10'000;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

struct Criterion {
  std::string name;
  double limit;
  std::function<Outcome()> body;
};

std::string join(const std::vector<Weight>& w) {
  std::string s;
  for (Weight x : w) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

Problem common(const std::vector<Weight>& w, std::size_t m) {
  std::vector<ObjectIndex> all(m);
  std::iota(all.begin(), all.end(), ObjectIndex{0});
  return make_indexed_problem(w, m, std::vector<Preference>(w.size(), Preference(all)));
}

ProblemFamily exhaustive_family(const std::vector<Weight>& w, std::size_t m) {
  std::vector<AgentIndex> free(w.size());
  std::iota(free.begin(), free.end(), AgentIndex{0});
  const Problem base = common(w, m);
  return ProblemFamily(base, free, preference_universe(base));
}

std::vector<Weight> random_cumulative(std::mt19937_64& rng, std::size_t n) {
  std::vector<Weight> w(n);
  Weight rest = 0;
  for (std::size_t k = n; k-- > 0;) {
    w[k] = rest + std::uniform_int_distribution<Weight>(k + 1 == n ? 1 : 0, 4)(rng);
    rest += w[k];
  }
  std::shuffle(w.begin(), w.end(), rng);
  return w;
}

std::vector<Weight> random_non_cumulative(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    std::vector<Weight> w(n);
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 9)(rng);
    if (!oracle::cumulatively_ordered(w)) return w;
  }
}

// Distinct or essentially distinct, drawn at random.
std::vector<Weight> random_characterized(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    std::vector<Weight> w(n);
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 12)(rng);
    if (std::bernoulli_distribution(0.4)(rng)) w[n - 1] = w[n - 2];
    if (oracle::distinct(w) || oracle::essentially_distinct(w)) return w;
  }
}

// Instances of the random nonexistence suite, shared with the fact suite.
struct Generated {
  std::vector<Problem> cumulative;
  std::vector<Problem> nonexistence;
};

Generated& generated() {
  static Generated g;
  return g;
}

// Every counterexample report produced along the way, replayed at the end.
std::vector<Json>& emitted_reports() {
  static std::vector<Json> r;
  return r;
}

void keep(const AuditReport& r) {
  if (!r.holds) emitted_reports().push_back(report_to_json(r));
}

Outcome examples() {
  Outcome out;
  const Problem cumulative = common({6, 3, 2}, 3);
  const auto set = w_popular_set(cumulative);
  if (set != std::vector<Matching>{weight_sd(cumulative)}) out.fail("(6,3,2) set is not {weight-SD}");
  if (set != std::vector<Matching>{Matching{0, 1, 2}}) out.fail("(6,3,2) set is not {i1-a1,i2-a2,i3-a3}");
  if (!w_popular_set(common({4, 3, 2}, 3)).empty()) out.fail("(4,3,2) set is not empty");
  if (out.ok) out.detail = "(6,3,2) -> {i1:a1 i2:a2 i3:a3}; (4,3,2) -> empty";
  return out;
}

Outcome nonexistence() {
  Outcome out;
  std::mt19937_64 rng(0x5eed0001);
  auto& g = generated();
  for (int t = 0; t < kRandomProfiles; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 2);
    const auto w = random_cumulative(rng, n);
    const Problem p = oracle::random_problem(rng, w, n);
    g.cumulative.push_back(p);
    if (!is_w_popular(p, weight_sd(p)).popular) out.fail("sd:weights not w-popular for " + join(w));
    const auto pl = oracle::plain(p);
    if (!oracle::popular(pl, oracle::to_assignment(weight_sd(p)), oracle::all_matchings(pl))) {
      out.fail("oracle disagrees for " + join(w));
    }
  }
  for (int t = 0; t < kRandomProfiles; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 2);
    const auto w = random_non_cumulative(rng, n);
    const Fixture f = prop1_nonexistence_instance(w);
    g.nonexistence.push_back(f.problem);
    if (!w_popular_set(f.problem).empty()) out.fail("w-popular matching exists for " + join(w));
    if (!oracle::popular_set(oracle::plain(f.problem)).empty()) out.fail("oracle set non-empty for " + join(w));
  }
  if (out.ok) {
    out.detail = std::to_string(kRandomProfiles) + " cumulative + " + std::to_string(kRandomProfiles) +
                 " non-cumulative profiles, 0 failures";
  }
  return out;
}

Outcome facts() {
  Outcome out;
  const auto& g = generated();
  if (g.cumulative.empty()) out.fail("criterion 2 instances missing");
  std::size_t members = 0;
  for (const auto* group : {&g.cumulative, &g.nonexistence}) {
    for (const Problem& p : *group) {
      for (const auto& mu : w_popular_set(p)) {
        ++members;
        if (!is_pareto_efficient(p, mu).efficient ||
            !oracle::pareto_efficient(oracle::plain(p), oracle::to_assignment(mu))) {
          out.fail("w-popular member not Pareto efficient");
        }
      }
    }
  }
  for (const Problem& p : g.cumulative) {
    const WeightClass wc = classify_weights(p);
    if (!wc.cumulatively_ordered || !(wc.distinct || wc.essentially_distinct)) {
      out.fail("cumulative profile neither distinct nor essentially distinct");
    }
  }
  if (out.ok) {
    out.detail = std::to_string(members) + " w-popular members efficient; " +
                 std::to_string(g.cumulative.size()) + " cumulative profiles classified";
  }
  return out;
}

Outcome characterization() {
  Outcome out;
  std::ostringstream detail;
  for (const auto& w : std::vector<std::vector<Weight>>{{4, 3, 2}, {5, 2, 1, 1}}) {
    const ProblemFamily fam = exhaustive_family(w, 3);
    const auto sp = check_strategy_proofness(sd_by_weights(), fam);
    const auto wp = check_w_popularity(sd_by_weights(), fam);
    keep(sp);
    keep(wp);
    if (!sp.holds) out.fail("sd:weights not strategy-proof on (" + join(w) + ")");
    if (!wp.holds) out.fail("sd:weights not w-popular on (" + join(w) + ")");
    detail << "(" << join(w) << "): " << fam.size() << " profiles; ";
  }
  std::mt19937_64 rng(0x5eed0004);
  for (int t = 0; t < kRandomProfiles; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 2);
    const auto w = random_characterized(rng, n);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(2, 4)(rng));
    const auto set = w_popular_set(p);
    const auto sd = sd_consistent_outcomes(p);
    for (const auto& mu : set) {
      if (std::find(sd.begin(), sd.end(), mu) == sd.end()) out.fail("w-popular matching not an SD outcome");
    }
    const std::size_t bound = oracle::distinct(w) ? 1 : 2;
    if (set.size() > bound) out.fail("too many w-popular matchings for " + join(w));
    if (oracle::popular_set(oracle::plain(p)).size() != set.size()) out.fail("oracle set size differs");
  }
  detail << kRandomProfiles << " random instances";
  if (out.ok) out.detail = detail.str();
  return out;
}

Outcome manipulation() {
  Outcome out;
  std::ostringstream detail;
  for (const auto& w : std::vector<std::vector<Weight>>{{2, 2, 2}, {3, 2, 2}}) {
    const Fixture f = thm1_manipulation_instance(w);
    if (!w_popular_set(f.problem).empty()) out.fail("w-popular matching exists for " + join(w));
    std::size_t popular = 0;
    for (const Mechanism& m : shipped_mechanisms(f.problem)) {
      const auto wp = check_w_popularity(m, *f.family);
      if (!wp.holds) continue;
      ++popular;
      const auto sp = check_strategy_proofness(m, *f.family);
      keep(sp);
      if (sp.holds) out.fail(m.name + " is w-popular and strategy-proof on (" + join(w) + ")");
    }
    if (popular == 0) out.fail("no shipped mechanism is w-popular on (" + join(w) + ")");
    detail << "(" << join(w) << ") " << f.name << ": " << popular << " w-popular mechanisms, all manipulable; ";
  }
  if (out.ok) out.detail = detail.str();
  return out;
}

Outcome independence() {
  Outcome out;
  const std::vector<Axiom> four{Axiom::strategy_proofness, Axiom::w_popularity, Axiom::non_wastefulness,
                                Axiom::dispute_resolutions};
  const std::vector<std::string> rows{"dispute-tail", "wasteful", "nonsp", "da-counterexample"};
  std::ostringstream detail;
  for (const auto& name : rows) {
    const Fixture f = find_fixtures(name).front();
    const Mechanism m = parse_mechanism(*f.mechanism);
    for (Axiom a : four) {
      const auto r = audit(a, m, *f.family);
      keep(r);
      if (r.holds == (a == *f.violates)) {
        out.fail(m.name + " " + std::string(r.holds ? "passes " : "fails ") + std::string(axiom_name(a)));
      }
      const auto sd = audit(a, sd_by_weights(), *f.family);
      if (!sd.holds) out.fail("sd:weights fails " + std::string(axiom_name(a)) + " on " + name);
    }
    detail << name << " fails " << axiom_name(*f.violates) << " only; ";
  }
  if (out.ok) out.detail = detail.str() + "sd:weights passes all";

  const Fixture literal = find_fixtures("dispute").front();
  std::cout << "  info: literal dispute fixture:";
  for (Axiom a : four) {
    const auto r = audit(a, parse_mechanism(*literal.mechanism), *literal.family);
    keep(r);
    std::cout << " " << axiom_name(a) << "=" << (r.holds ? "holds" : "fails");
  }
  std::cout << "\n";
  return out;
}

Outcome equilibrium() {
  Outcome out;
  std::ostringstream detail;
  for (const auto& w : std::vector<std::vector<Weight>>{{4, 3, 2}, {5, 2, 1, 1}}) {
    const ProblemFamily fam = exhaustive_family(w, 3);
    const auto table = std::make_shared<const OutcomeTable>(sd_by_weights(), fam.base(),
                                                            preference_universe(fam.base()));
    std::uint64_t truths = 0, equilibria = 0;
    fam.for_each([&](const Problem& p) {
      const ReportingGame g(sd_by_weights(), p, table);
      const auto eq = check_w_popular_in_equilibrium(g);
      if (!eq.holds) {
        out.fail("sd:weights not w-popular in equilibrium on (" + join(w) + ")");
        emitted_reports().push_back(equilibrium_report_to_json(eq));
      }
      const auto u = check_equilibrium_outcome_uniqueness(g);
      if (u.verdict != UniquenessVerdict::unique) out.fail("equilibrium outcome not unique on (" + join(w) + ")");
      ++truths;
      equilibria += u.equilibria;
      return out.ok;
    });
    detail << "(" << join(w) << "): " << truths << " true profiles x " << table->size() << " report profiles, "
           << equilibria << " equilibria; ";
  }

  const Problem witness = make_indexed_problem({2, 2, 2}, 3, {Preference{0, 1, 2}, Preference{0, 1, 2},
                                                              Preference{1, 2}});
  const Mechanism sd = sd_by_ordering({"i1", "i2", "i3"});
  const auto r = check_w_popular_in_equilibrium(sd, witness);
  if (r.holds) {
    out.fail("equal-weights witness not detected");
  } else {
    emitted_reports().push_back(equilibrium_report_to_json(r));
    const auto pl = oracle::plain(witness);
    const auto outcome = oracle::to_assignment(*r.outcome);
    Margin best = 0;
    for (const auto& a : oracle::all_matchings(pl)) best = std::max(best, oracle::margin(pl, a, outcome));
    if (best <= 0) out.fail("oracle finds no challenger to the equilibrium outcome");
    if (oracle::popular_set(pl).empty()) out.fail("oracle finds no w-popular matching");
    detail << "witness margin +" << best;
  }
  if (out.ok) out.detail = detail.str();
  return out;
}

Outcome oracles() {
  Outcome out;
  std::size_t shapes = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 1; m <= 4; ++m) {
      const Problem base = make_indexed_problem(std::vector<Weight>(n, 1), m, std::vector<Preference>(n));
      std::vector<int> caps(m, 1);
      for (;;) {
        const Problem p = base.with_capacities(caps);
        const std::uint64_t expected = oracle::recursive_count(caps, n);
        if (count_matchings(p) != expected || enumerate_matchings(p).size() != expected) {
          out.fail("matching count differs at n=" + std::to_string(n) + " m=" + std::to_string(m));
        }
        ++shapes;
        std::size_t k = 0;
        while (k < m && caps[k] == 4) caps[k++] = 1;
        if (k == m) break;
        ++caps[k];
      }
      if (count_matchings(base) != oracle::unit_count_formula(n, m)) out.fail("unit formula differs");
    }
  }

  std::mt19937_64 rng(0x5eed0008);
  for (int t = 0; t < kAntisymmetryPairs; ++t) {
    std::vector<Weight> w(std::uniform_int_distribution<std::size_t>(1, 4)(rng));
    for (auto& x : w) x = std::uniform_int_distribution<Weight>(1, 20)(rng);
    const Problem p = oracle::random_problem(rng, w, std::uniform_int_distribution<std::size_t>(1, 4)(rng), 2);
    const auto all = enumerate_matchings(p);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    const Matching& a = all[pick(rng)];
    const Matching& b = all[pick(rng)];
    const Margin ab = popularity_margin(p, a, b);
    if (ab != -popularity_margin(p, b, a)) out.fail("margin not antisymmetric");
    if (ab != oracle::margin(oracle::plain(p), oracle::to_assignment(a), oracle::to_assignment(b))) {
      out.fail("margin differs from oracle");
    }
  }

  const fs::path dir = fs::temp_directory_path() / "popmatch_acceptance";
  fs::create_directories(dir);
  std::size_t replayed = 0;
  for (const Json& report : emitted_reports()) {
    const fs::path file = dir / ("report" + std::to_string(replayed) + ".json");
    std::ofstream(file) << report.dump(2) << "\n";
    std::ostringstream cout, cerr;
    const int code = cli::run({"verify", file.string(), "--format", "json"}, cout, cerr);
    if (code != 1) {
      out.fail("verify exit " + std::to_string(code) + " for " + report["mechanism"].get<std::string>() +
               " " + report["axiom"].get<std::string>() + ": " + cerr.str());
      continue;
    }
    const Json echoed = Json::parse(cout.str());
    const char* key = report.contains("witness") ? "witness" : "profile";
    if (echoed[key] != report[key] || echoed["verdict"] != report["verdict"]) out.fail("verify changed the witness");
    ++replayed;
  }
  fs::remove_all(dir);
  if (emitted_reports().empty()) out.fail("no counterexample reports to replay");
  if (out.ok) {
    out.detail = std::to_string(shapes) + " capacity shapes counted; " + std::to_string(kAntisymmetryPairs) +
                 " margin pairs; " + std::to_string(replayed) + " witnesses replayed via verify";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::set<std::string> only(argv + 1, argv + argc);
  const std::vector<Criterion> criteria{
      {"1 example popular sets", kLimitExamples, examples},
      {"2 nonexistence suite", kLimitNonexistence, nonexistence},
      {"3 fact suite", kLimitFacts, facts},
      {"4 characterization (SP, w-popularity, SD outcomes)", kLimitCharacterization, characterization},
      {"5 manipulation under ties", kLimitManipulation, manipulation},
      {"6 axiom independence", kLimitIndependence, independence},
      {"7 w-popular in equilibrium", kLimitEquilibrium, equilibrium},
      {"8 oracle cross-checks", kLimitOracles, oracles},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.name.substr(0, c.name.find(' ')))) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit) o.fail("took longer than " + std::to_string(c.limit) + " s");
    if (!o.ok) ++failures;
    std::printf("%s criterion %s (%.2f s): %s\n", o.ok ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
