#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqalloc/errors.hpp"
#include "seqalloc/instance.hpp"
#include "seqalloc/rational.hpp"
#include "seqalloc/types.hpp"

namespace seqalloc {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json must_parse(const std::string& text, const std::string& what) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError(what + ": not valid JSON");
  return doc;
}

inline Rational rational_from_json(const Json& node) {
  if (node.is_string()) return parse_rational(node.get<std::string>());
  if (node.is_number_integer()) return Rational(node.get<long long>());
  throw ValidationError("utilities must be integers or \"p/q\" strings");
}

inline std::vector<std::string> string_list(const Json& node, const std::string& what) {
  if (!node.is_array()) throw ValidationError(what + " must be an array");
  std::vector<std::string> out;
  for (const auto& entry : node) {
    if (!entry.is_string()) throw ValidationError(what + " must contain strings");
    out.push_back(entry.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Parses the instance document:
///   {"items": [...], "sequence": [1,2,2,1],
///    "agents": [{"name": "1", "ranking": [...], "utilities": {"o1": "3/2", ...}}, ...]}
/// Utilities are optional per agent; rationals are exact strings or integers.
inline Instance parse_instance(const std::string& text) {
  const Json doc = detail::must_parse(text, "instance");
  if (!doc.is_object()) throw ValidationError("instance: top level must be an object");

  InstanceData data;
  if (!doc.contains("items")) throw ValidationError("instance: missing \"items\"");
  data.items = detail::string_list(doc["items"], "\"items\"");

  if (!doc.contains("sequence") || !doc["sequence"].is_array())
    throw ValidationError("instance: \"sequence\" must be an array of agent numbers");
  for (const auto& entry : doc["sequence"]) {
    if (!entry.is_number_integer())
      throw ValidationError("instance: \"sequence\" must contain integers");
    data.sequence.push_back(entry.get<int>());
  }

  if (!doc.contains("agents") || !doc["agents"].is_array())
    throw ValidationError("instance: \"agents\" must be an array");
  for (const auto& agent_node : doc["agents"]) {
    if (!agent_node.is_object()) throw ValidationError("instance: each agent must be an object");
    AgentData agent;
    if (agent_node.contains("name")) {
      if (!agent_node["name"].is_string())
        throw ValidationError("instance: agent \"name\" must be a string");
      agent.name = agent_node["name"].get<std::string>();
    }
    if (!agent_node.contains("ranking"))
      throw ValidationError("instance: each agent needs a \"ranking\"");
    agent.ranking = detail::string_list(agent_node["ranking"], "agent \"ranking\"");
    if (agent_node.contains("utilities")) {
      const auto& utilities = agent_node["utilities"];
      if (!utilities.is_object())
        throw ValidationError("instance: agent \"utilities\" must be an object");
      std::map<std::string, Rational> values;
      for (const auto& [item, value] : utilities.items())
        values[item] = detail::rational_from_json(value);
      agent.utilities = std::move(values);
    }
    data.agents.push_back(std::move(agent));
  }
  return validate_instance(data);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

/// Canonical serialization; parse_instance(dump(instance_json(i))) == i.
inline Json instance_json(const Instance& instance) {
  Json doc;
  doc["items"] = instance.items;
  Json sequence = Json::array();
  for (int agent : instance.sequence.turns) sequence.push_back(agent + 1);
  doc["sequence"] = std::move(sequence);
  Json agents = Json::array();
  for (int a = 0; a < instance.agent_count(); ++a) {
    Json node;
    node["name"] = instance.agent_names[a];
    Json ranking = Json::array();
    for (int item : instance.truthful.rankings[a].order) ranking.push_back(instance.items[item]);
    node["ranking"] = std::move(ranking);
    if (instance.utilities[a]) {
      Json utilities = Json::object();
      for (int item = 0; item < instance.item_count(); ++item)
        utilities[instance.items[item]] = to_string(instance.utilities[a]->value(item));
      node["utilities"] = std::move(utilities);
    }
    agents.push_back(std::move(node));
  }
  doc["agents"] = std::move(agents);
  return doc;
}

/// Profile document: {"rankings": [[item, ...], ...]}, one ranking per agent
/// in agent order.
inline Profile parse_profile(const std::string& text, const Instance& instance) {
  const Json doc = detail::must_parse(text, "profile");
  if (!doc.is_object() || !doc.contains("rankings") || !doc["rankings"].is_array())
    throw ValidationError("profile: expected {\"rankings\": [[...], ...]}");
  const auto& rankings = doc["rankings"];
  if (static_cast<int>(rankings.size()) != instance.agent_count())
    throw ValidationError("profile: need one ranking per agent");
  Profile profile;
  for (const auto& node : rankings) {
    const auto names = detail::string_list(node, "profile ranking");
    if (static_cast<int>(names.size()) != instance.item_count())
      throw ValidationError("profile: each ranking must list all items");
    Ranking ranking;
    std::vector<bool> seen(instance.item_count(), false);
    for (const auto& name : names) {
      const int item = instance.item_index(name);
      if (seen[item]) throw ValidationError("profile: duplicate item '" + name + "'");
      seen[item] = true;
      ranking.order.push_back(item);
    }
    profile.rankings.push_back(std::move(ranking));
  }
  return profile;
}

inline Profile load_profile(const std::string& path, const Instance& instance) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_profile(buffer.str(), instance);
}

/// Replay document: {"moves": [{"agent": 1, "ranking": [...]}, ...]}; the
/// agent is a 1-based number or an agent name.
inline std::vector<std::pair<int, Ranking>> parse_replay(const std::string& text,
                                                         const Instance& instance) {
  const Json doc = detail::must_parse(text, "replay");
  if (!doc.is_object() || !doc.contains("moves") || !doc["moves"].is_array())
    throw ValidationError("replay: expected {\"moves\": [...]}");
  std::vector<std::pair<int, Ranking>> moves;
  for (const auto& node : doc["moves"]) {
    if (!node.is_object() || !node.contains("agent") || !node.contains("ranking"))
      throw ValidationError("replay: each move needs \"agent\" and \"ranking\"");
    int agent = -1;
    if (node["agent"].is_number_integer()) {
      agent = node["agent"].get<int>() - 1;
    } else if (node["agent"].is_string()) {
      const std::string name = node["agent"].get<std::string>();
      for (int a = 0; a < instance.agent_count(); ++a)
        if (instance.agent_names[a] == name) agent = a;
      if (agent < 0) throw ValidationError("replay: unknown agent '" + name + "'");
    } else {
      throw ValidationError("replay: \"agent\" must be a number or name");
    }
    if (agent < 0 || agent >= instance.agent_count())
      throw ValidationError("replay: agent number out of range");
    const auto names = detail::string_list(node["ranking"], "replay ranking");
    if (static_cast<int>(names.size()) != instance.item_count())
      throw ValidationError("replay: each ranking must list all items");
    Ranking ranking;
    std::vector<bool> seen(instance.item_count(), false);
    for (const auto& name : names) {
      const int item = instance.item_index(name);
      if (seen[item]) throw ValidationError("replay: duplicate item '" + name + "'");
      seen[item] = true;
      ranking.order.push_back(item);
    }
    moves.emplace_back(agent, std::move(ranking));
  }
  return moves;
}

inline std::vector<std::pair<int, Ranking>> load_replay(const std::string& path,
                                                        const Instance& instance) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open replay file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_replay(buffer.str(), instance);
}

/// Assignment as JSON: bundles keyed by agent name plus the 0/1 matrix and
/// the pick trace.
inline Json assignment_json(const Assignment& assignment, const Instance& instance) {
  Json doc;
  Json bundles = Json::object();
  for (int agent = 0; agent < assignment.agents(); ++agent) {
    Json items = Json::array();
    for (int item : assignment.bundles[agent]) items.push_back(instance.items[item]);
    bundles[instance.agent_names[agent]] = std::move(items);
  }
  doc["bundles"] = std::move(bundles);
  doc["matrix"] = assignment.matrix();
  Json trace = Json::array();
  for (const Pick& pick : assignment.trace) {
    Json entry;
    entry["turn"] = pick.turn + 1;
    entry["agent"] = instance.agent_names[pick.agent];
    entry["item"] = instance.items[pick.item];
    trace.push_back(std::move(entry));
  }
  doc["trace"] = std::move(trace);
  return doc;
}

inline Json ranking_json(const Ranking& ranking, const Instance& instance) {
  Json items = Json::array();
  for (int item : ranking.order) items.push_back(instance.items[item]);
  return items;
}

inline Json profile_json(const Profile& profile, const Instance& instance) {
  Json doc = Json::object();
  for (int agent = 0; agent < profile.agents(); ++agent)
    doc[instance.agent_names[agent]] = ranking_json(profile.rankings[agent], instance);
  return doc;
}

inline Json bundle_json(const Bundle& bundle, const Instance& instance) {
  Json items = Json::array();
  for (int item : bundle) items.push_back(instance.items[item]);
  return items;
}

}  // namespace seqalloc
