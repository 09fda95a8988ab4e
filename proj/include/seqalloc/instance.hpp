#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/rational.hpp"
#include "seqalloc/types.hpp"
#include "seqalloc/utility.hpp"

namespace seqalloc {

/// Unvalidated instance data as it appears in input files. Agents are
/// numbered 1..n in the sequence, rankings and utilities refer to items by
/// name.
struct AgentData {
  std::string name;
  std::vector<std::string> ranking;
  std::optional<std::map<std::string, Rational>> utilities;
};

struct InstanceData {
  std::vector<std::string> items;
  std::vector<int> sequence;  // 1-based agent indices
  std::vector<AgentData> agents;
};

/// A validated problem instance. Internally items and agents are dense
/// 0-based indices; names are kept for I/O.
struct Instance {
  std::vector<std::string> items;
  std::vector<std::string> agent_names;
  PickingSequence sequence;
  Profile truthful;
  std::vector<std::optional<UtilityFunction>> utilities;  // one slot per agent

  int item_count() const { return static_cast<int>(items.size()); }
  int agent_count() const { return static_cast<int>(agent_names.size()); }

  int item_index(const std::string& name) const {
    for (int i = 0; i < item_count(); ++i)
      if (items[i] == name) return i;
    throw ValidationError("unknown item: '" + name + "'");
  }

  bool operator==(const Instance& other) const = default;
};

/// Validates raw instance data. Diagnoses duplicate items, rankings that are
/// not permutations of the item set, sequence length or agent-index errors,
/// and utilities that reverse the declared ranking or are not positive.
inline Instance validate_instance(const InstanceData& raw) {
  Instance inst;
  const int m = static_cast<int>(raw.items.size());
  const int n = static_cast<int>(raw.agents.size());
  if (m < 1) throw ValidationError("instance needs at least one item");
  if (n < 1) throw ValidationError("instance needs at least one agent");

  std::map<std::string, int> item_index;
  for (int i = 0; i < m; ++i) {
    const auto& name = raw.items[i];
    if (name.empty()) throw ValidationError("empty item name");
    if (!item_index.emplace(name, i).second)
      throw ValidationError("duplicate item: '" + name + "'");
  }
  inst.items = raw.items;

  if (static_cast<int>(raw.sequence.size()) != m)
    throw ValidationError("sequence length " + std::to_string(raw.sequence.size()) +
                          " does not match item count " + std::to_string(m));
  inst.sequence.turns.reserve(m);
  for (int entry : raw.sequence) {
    if (entry < 1 || entry > n)
      throw ValidationError("sequence agent index " + std::to_string(entry) +
                            " out of range 1.." + std::to_string(n));
    inst.sequence.turns.push_back(entry - 1);
  }

  std::set<std::string> agent_names;
  for (int a = 0; a < n; ++a) {
    const AgentData& agent = raw.agents[a];
    const std::string name = agent.name.empty() ? std::to_string(a + 1) : agent.name;
    if (!agent_names.insert(name).second)
      throw ValidationError("duplicate agent name: '" + name + "'");
    inst.agent_names.push_back(name);

    if (static_cast<int>(agent.ranking.size()) != m)
      throw ValidationError("agent " + name + ": ranking must list all " + std::to_string(m) +
                            " items");
    Ranking ranking;
    std::set<int> seen;
    for (const auto& item_name : agent.ranking) {
      auto it = item_index.find(item_name);
      if (it == item_index.end())
        throw ValidationError("agent " + name + ": unknown item '" + item_name + "' in ranking");
      if (!seen.insert(it->second).second)
        throw ValidationError("agent " + name + ": duplicate item '" + item_name + "' in ranking");
      ranking.order.push_back(it->second);
    }
    inst.truthful.rankings.push_back(std::move(ranking));

    if (agent.utilities) {
      std::vector<Rational> values(m);
      std::vector<bool> present(m, false);
      for (const auto& [item_name, value] : *agent.utilities) {
        auto it = item_index.find(item_name);
        if (it == item_index.end())
          throw ValidationError("agent " + name + ": utility for unknown item '" + item_name + "'");
        values[it->second] = value;
        present[it->second] = true;
      }
      for (int i = 0; i < m; ++i)
        if (!present[i])
          throw ValidationError("agent " + name + ": missing utility for item '" + inst.items[i] +
                                "'");
      try {
        inst.utilities.emplace_back(
            make_utility(UtilityKind::explicit_values, inst.truthful.rankings.back(),
                         std::move(values)));
      } catch (const ValidationError& e) {
        throw ValidationError("agent " + name + ": " + e.what());
      }
    } else {
      inst.utilities.emplace_back(std::nullopt);
    }
  }
  return inst;
}

}  // namespace seqalloc
