#pragma once

// Problem and matching files.
//
//   problem:  {"agents":[{"id":str,"weight":int}],
//              "objects":[{"id":str,"capacity":int}],
//              "preferences":{agentId:[objectId,...]}}
//   matching: {"assignment":{agentId: objectId|null}}
//
// Serialization is canonical (file order, two-space indent, trailing
// newline), so parse/serialize round-trips canonical text byte for byte.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "popmatch/model.hpp"

namespace popmatch {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing field '") + key + "'", path);
  return *it;
}

inline void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> known,
                                const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw InputError("unexpected field '" + it.key() + "'", path);
    }
  }
}

inline std::int64_t require_positive_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InputError("expected an integer", path);
  const auto x = v.get<std::int64_t>();
  if (x <= 0) throw InputError("must be a positive integer", path);
  return x;
}

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

inline Problem problem_from_json(const Json& j) {
  using detail::require;
  if (!j.is_object()) throw InputError("problem must be a JSON object", "");
  detail::reject_unknown_keys(j, {"agents", "objects", "preferences"}, "");

  const Json& agents = require(j, "agents", "");
  const Json& objects = require(j, "objects", "");
  const Json& prefs = require(j, "preferences", "");
  if (!agents.is_array()) throw InputError("expected an array", "/agents");
  if (!objects.is_array()) throw InputError("expected an array", "/objects");
  if (!prefs.is_object()) throw InputError("expected an object", "/preferences");

  auto market = std::make_shared<Market>();
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string path = "/agents/" + std::to_string(k);
    const Json& a = agents[k];
    if (!a.is_object()) throw InputError("expected an object", path);
    detail::reject_unknown_keys(a, {"id", "weight"}, path);
    const Json& id = require(a, "id", path);
    if (!id.is_string()) throw InputError("expected a string", path + "/id");
    const Weight w = detail::require_positive_int(require(a, "weight", path), path + "/weight");
    market->agents.push_back(id.get<std::string>());
    market->weights.push_back(w);
  }
  std::vector<int> caps;
  for (std::size_t k = 0; k < objects.size(); ++k) {
    const std::string path = "/objects/" + std::to_string(k);
    const Json& o = objects[k];
    if (!o.is_object()) throw InputError("expected an object", path);
    detail::reject_unknown_keys(o, {"id", "capacity"}, path);
    const Json& id = require(o, "id", path);
    if (!id.is_string()) throw InputError("expected a string", path + "/id");
    const auto q = detail::require_positive_int(require(o, "capacity", path), path + "/capacity");
    if (q > std::numeric_limits<int>::max()) throw InputError("capacity too large", path + "/capacity");
    market->objects.push_back(id.get<std::string>());
    caps.push_back(static_cast<int>(q));
  }

  // Ids are checked before preferences are resolved against them.
  Problem::check_market(*market);

  std::vector<Preference> ranked(market->agents.size());
  std::vector<bool> seen(market->agents.size(), false);
  for (auto it = prefs.begin(); it != prefs.end(); ++it) {
    const std::string path = "/preferences/" + it.key();
    auto a = std::find(market->agents.begin(), market->agents.end(), it.key());
    if (a == market->agents.end()) throw InputError("unknown agent '" + it.key() + "'", path);
    const auto i = static_cast<std::size_t>(a - market->agents.begin());
    if (!it.value().is_array()) throw InputError("expected an array", path);
    std::vector<ObjectIndex> list;
    for (std::size_t k = 0; k < it.value().size(); ++k) {
      const Json& v = it.value()[k];
      const std::string item = path + "/" + std::to_string(k);
      if (!v.is_string()) throw InputError("expected a string", item);
      const auto id = v.get<std::string>();
      auto o = std::find(market->objects.begin(), market->objects.end(), id);
      if (o == market->objects.end()) throw InputError("unknown object '" + id + "'", item);
      list.push_back(static_cast<ObjectIndex>(o - market->objects.begin()));
    }
    ranked[i] = Preference(std::move(list));
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw InputError("no preference list", "/preferences/" + market->agents[i]);
    }
  }
  return Problem(std::move(market), std::move(caps), std::move(ranked));
}

inline Problem parse_problem(std::string_view text) {
  return problem_from_json(detail::parse_json_text(text));
}

inline Json preference_to_json(const Problem& p, const Preference& pref) {
  Json list = Json::array();
  for (ObjectIndex o : pref.objects()) list.push_back(p.object_id(o));
  return list;
}

inline Preference preference_from_json(const Problem& p, const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError("expected an array", path);
  std::vector<ObjectIndex> list;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string item = path + "/" + std::to_string(k);
    if (!j[k].is_string()) throw InputError("expected a string", item);
    auto o = p.find_object(j[k].get<std::string>());
    if (!o) throw InputError("unknown object '" + j[k].get<std::string>() + "'", item);
    if (std::find(list.begin(), list.end(), *o) != list.end()) {
      throw InputError("duplicate object", item);
    }
    list.push_back(*o);
  }
  return Preference(std::move(list));
}

inline Json problem_to_json(const Problem& p) {
  Json j;
  j["agents"] = Json::array();
  for (AgentIndex i = 0; i < p.agent_count(); ++i) {
    j["agents"].push_back(Json{{"id", p.agent_id(i)}, {"weight", p.weight(i)}});
  }
  j["objects"] = Json::array();
  for (std::size_t o = 0; o < p.object_count(); ++o) {
    const auto oi = static_cast<ObjectIndex>(o);
    j["objects"].push_back(Json{{"id", p.object_id(oi)}, {"capacity", p.capacity(oi)}});
  }
  j["preferences"] = Json::object();
  for (AgentIndex i = 0; i < p.agent_count(); ++i) {
    j["preferences"][p.agent_id(i)] = preference_to_json(p, p.preference(i));
  }
  return j;
}

inline std::string serialize_problem(const Problem& p) { return problem_to_json(p).dump(2) + "\n"; }

inline Json matching_to_json(const Problem& p, const Matching& mu) {
  Json assignment = Json::object();
  for (AgentIndex i = 0; i < p.agent_count(); ++i) {
    assignment[p.agent_id(i)] = mu[i] == kUnassigned ? Json(nullptr) : Json(p.object_id(mu[i]));
  }
  return Json{{"assignment", assignment}};
}

inline std::string serialize_matching(const Problem& p, const Matching& mu) {
  return matching_to_json(p, mu).dump(2) + "\n";
}

inline Matching matching_from_json(const Problem& p, const Json& j) {
  if (!j.is_object()) throw InputError("matching must be a JSON object", "");
  detail::reject_unknown_keys(j, {"assignment"}, "");
  const Json& a = detail::require(j, "assignment", "");
  if (!a.is_object()) throw InputError("expected an object", "/assignment");
  Matching mu(p.agent_count());
  std::vector<bool> seen(p.agent_count(), false);
  for (auto it = a.begin(); it != a.end(); ++it) {
    const std::string path = "/assignment/" + it.key();
    auto i = p.find_agent(it.key());
    if (!i) throw InputError("unknown agent '" + it.key() + "'", path);
    if (it.value().is_null()) {
      mu.assign(*i, kUnassigned);
    } else if (it.value().is_string()) {
      auto o = p.find_object(it.value().get<std::string>());
      if (!o) throw InputError("unknown object '" + it.value().get<std::string>() + "'", path);
      mu.assign(*i, *o);
    } else {
      throw InputError("expected an object id or null", path);
    }
    seen[*i] = true;
  }
  for (AgentIndex i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw InputError("agent missing from assignment", "/assignment/" + p.agent_id(i));
  }
  return mu;
}

inline Matching parse_matching(const Problem& p, std::string_view text) {
  return matching_from_json(p, detail::parse_json_text(text));
}

/// "i1:o1 i2:- i3:o3" in canonical agent order; used for DOT labels and logs.
inline std::string compact(const Problem& p, const Matching& mu) {
  std::string out;
  for (AgentIndex i : canonical_order(p)) {
    if (!out.empty()) out += ' ';
    out += p.agent_id(i) + ":" + (mu[i] == kUnassigned ? std::string("-") : p.object_id(mu[i]));
  }
  return out;
}

/// One "agent→object" line per agent, canonical agent order.
inline std::string render_matching(const Problem& p, const Matching& mu) {
  std::ostringstream os;
  for (AgentIndex i : canonical_order(p)) {
    os << p.agent_id(i) << "→" << (mu[i] == kUnassigned ? std::string("∅") : p.object_id(mu[i]))
       << "\n";
  }
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace popmatch
