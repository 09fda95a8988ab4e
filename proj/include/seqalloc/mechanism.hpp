#pragma once

#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/types.hpp"

namespace seqalloc {

/// Runs sequential allocation: at each turn the scheduled agent receives the
/// highest item in their reported ranking that is still unallocated. Pure and
/// deterministic; the trace is a first-class output because the equilibrium
/// constructions consume pick orders.
inline Assignment sequential_allocation(const Profile& profile, const PickingSequence& sequence) {
  const int n = profile.agents();
  const int m = sequence.length();
  if (n < 1) throw ValidationError("profile has no agents");
  for (const auto& r : profile.rankings)
    if (r.size() != m)
      throw ValidationError("ranking length does not match the picking sequence");

  Assignment result;
  result.bundles.assign(n, {});
  result.trace.reserve(m);
  std::vector<bool> taken(m, false);
  std::vector<int> cursor(n, 0);  // per-agent scan position into their ranking

  for (int turn = 0; turn < m; ++turn) {
    const int agent = sequence.turns[turn];
    if (agent < 0 || agent >= n) throw ValidationError("sequence agent index out of range");
    int& pos = cursor[agent];
    const auto& order = profile.rankings[agent].order;
    while (taken[order[pos]]) ++pos;
    const int item = order[pos];
    taken[item] = true;
    result.bundles[agent].push_back(item);
    result.trace.push_back({turn, agent, item});
  }
  for (auto& bundle : result.bundles) bundle = make_bundle(std::move(bundle));
  return result;
}

/// The m items in the order they are taken under sequential allocation.
inline std::vector<int> pick_order(const Profile& profile, const PickingSequence& sequence) {
  const Assignment assignment = sequential_allocation(profile, sequence);
  std::vector<int> order;
  order.reserve(assignment.trace.size());
  for (const Pick& pick : assignment.trace) order.push_back(pick.item);
  return order;
}

}  // namespace seqalloc
