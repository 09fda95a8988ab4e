#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/instance.hpp"
#include "seqalloc/mechanism.hpp"
#include "seqalloc/rational.hpp"
#include "seqalloc/types.hpp"
#include "seqalloc/utility.hpp"

namespace seqalloc {

namespace detail {

constexpr int kMaxSearchItems = 64;  // taken sets are 64-bit masks

/// (primary, secondary) objective compared lexicographically; both components
/// are additive over picked items, so they memoize like a single value.
struct PairValue {
  Rational primary = 0;
  Rational secondary = 0;

  bool operator>(const PairValue& other) const {
    if (primary != other.primary) return primary > other.primary;
    return secondary > other.secondary;
  }
};

/// Exact search over one agent's pick choices while all other agents pick
/// greedily from their fixed reports. The state is the set of taken items
/// (its size determines the turn), memoized across paths.
class DeviationSearch {
 public:
  DeviationSearch(const Profile& profile, const PickingSequence& sequence, int agent,
                  std::vector<Rational> primary, std::vector<Rational> secondary = {})
      : profile_(profile),
        sequence_(sequence),
        agent_(agent),
        primary_(std::move(primary)),
        secondary_(std::move(secondary)),
        m_(sequence.length()) {
    if (m_ > kMaxSearchItems)
      throw SizeGuardError("deviation search supports at most " +
                           std::to_string(kMaxSearchItems) + " items");
    if (agent_ < 0 || agent_ >= profile_.agents())
      throw ValidationError("deviating agent index out of range");
    if (static_cast<int>(primary_.size()) != m_)
      throw ValidationError("objective must value every item");
    if (secondary_.empty()) secondary_.assign(m_, Rational(0));
  }

  const PairValue& best_value() { return state(0).value; }

  /// Optimal total over completions starting from a given taken set.
  const PairValue& value_from(std::uint64_t mask) { return state(mask).value; }

  /// The deviator's picks, in the order they are taken, along one optimal
  /// path (first maximizer in ascending item order at every choice).
  std::vector<int> best_picks() {
    std::vector<int> picks;
    std::uint64_t mask = 0;
    while (std::popcount(mask) < m_) {
      const int turn = std::popcount(mask);
      int item;
      if (sequence_.turns[turn] == agent_) {
        item = state(mask).choice;
        picks.push_back(item);
      } else {
        item = forced_pick(sequence_.turns[turn], mask);
      }
      mask |= std::uint64_t{1} << item;
    }
    return picks;
  }

  int forced_pick(int agent, std::uint64_t mask) const {
    for (int item : profile_.rankings[agent].order)
      if (!(mask >> item & 1)) return item;
    throw ValidationError("no item left to pick");
  }

 private:
  struct Entry {
    PairValue value;
    int choice = -1;  // deviator's pick at this state, if it is their turn
  };

  const Entry& state(std::uint64_t mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;

    Entry entry;
    const int turn = std::popcount(mask);
    if (turn < m_) {
      const int mover = sequence_.turns[turn];
      if (mover != agent_) {
        const int item = forced_pick(mover, mask);
        entry.value = state(mask | std::uint64_t{1} << item).value;
      } else {
        bool first = true;
        for (int item = 0; item < m_; ++item) {
          if (mask >> item & 1) continue;
          const PairValue& future = state(mask | std::uint64_t{1} << item).value;
          PairValue candidate{primary_[item] + future.primary,
                              secondary_[item] + future.secondary};
          if (first || candidate > entry.value) {
            entry.value = std::move(candidate);
            entry.choice = item;
            first = false;
          }
        }
      }
    }
    return memo_.emplace(mask, std::move(entry)).first->second;
  }

  const Profile& profile_;
  const PickingSequence& sequence_;
  int agent_;
  std::vector<Rational> primary_;
  std::vector<Rational> secondary_;
  int m_;
  std::unordered_map<std::uint64_t, Entry> memo_;
};

/// Witness report for a chosen pick path: the picked items in pick order,
/// then every other item in the completion ranking's order. Any completion
/// yields the same bundle; this one is deterministic.
inline Ranking witness_ranking(const std::vector<int>& picks, const Ranking& completion) {
  Ranking report;
  report.order = picks;
  std::vector<bool> picked(completion.size(), false);
  for (int item : picks) picked[item] = true;
  for (int item : completion.order)
    if (!picked[item]) report.order.push_back(item);
  return report;
}

}  // namespace detail

/// The profile in which every agent reports the truthful pick order. Its
/// allocation coincides with the truthful one and it is a pure Nash
/// equilibrium for every utility profile consistent with the rankings.
inline Profile bluff_profile(const Instance& instance) {
  Ranking common;
  common.order = pick_order(instance.truthful, instance.sequence);
  Profile profile;
  profile.rankings.assign(instance.agent_count(), common);
  return profile;
}

/// Two-agent equilibrium profile mirroring optimal play of the extensive
/// form game: reverse and invert the picking sequence, reverse both
/// rankings, simulate, and report the reverse of the resulting pick order.
inline Profile crossout_profile(const Instance& instance) {
  if (instance.agent_count() != 2)
    throw ValidationError("crossout profile is defined for exactly two agents");

  PickingSequence mirrored;
  mirrored.turns.assign(instance.sequence.turns.rbegin(), instance.sequence.turns.rend());
  for (int& agent : mirrored.turns) agent = 1 - agent;

  Profile reversed;
  for (const Ranking& r : instance.truthful.rankings) {
    Ranking rev;
    rev.order.assign(r.order.rbegin(), r.order.rend());
    reversed.rankings.push_back(std::move(rev));
  }

  std::vector<int> picked = pick_order(reversed, mirrored);
  Ranking common;
  common.order.assign(picked.rbegin(), picked.rend());
  Profile profile;
  profile.rankings.assign(2, common);
  return profile;
}

struct BestResponse {
  Bundle bundle;
  Ranking report;
  Rational value;
};

/// Exact best response for one agent against the others' fixed reports.
/// profile[agent] is ignored. The report is one ranking achieving the
/// optimal bundle.
inline BestResponse best_response(const Profile& profile, int agent, const UtilityFunction& u,
                                  const PickingSequence& sequence) {
  detail::DeviationSearch search(profile, sequence, agent, u.values());
  BestResponse result;
  result.value = search.best_value().primary;
  const std::vector<int> picks = search.best_picks();
  result.bundle = make_bundle(picks);
  result.report = detail::witness_ranking(picks, u.base());
  return result;
}

struct Deviation {
  int agent = -1;
  Ranking report;
  Bundle bundle;
  Rational old_value;
  Rational new_value;
};

struct NashCheck {
  bool is_pne = true;
  std::optional<Deviation> witness;
};

/// True iff no agent can strictly improve their bundle utility by changing
/// their report; otherwise carries one profitable deviation.
inline NashCheck is_pure_nash(const Profile& profile, const std::vector<UtilityFunction>& utilities,
                              const PickingSequence& sequence) {
  const int n = profile.agents();
  if (static_cast<int>(utilities.size()) != n)
    throw ValidationError("need one utility function per agent");
  const Assignment current = sequential_allocation(profile, sequence);
  for (int agent = 0; agent < n; ++agent) {
    const Rational current_value = bundle_utility(utilities[agent], current.bundles[agent]);
    BestResponse best = best_response(profile, agent, utilities[agent], sequence);
    if (best.value > current_value) {
      NashCheck check;
      check.is_pne = false;
      check.witness = Deviation{agent, std::move(best.report), std::move(best.bundle),
                                current_value, std::move(best.value)};
      return check;
    }
  }
  return NashCheck{};
}

/// True iff the profile is a pure Nash equilibrium under every cardinal
/// utility profile consistent with the truthful rankings. Equivalent to:
/// each agent's current bundle weakly pairwise-dominates every bundle they
/// can reach by deviating. Checked exactly one truthful-ranking prefix at a
/// time: a reachable bundle escapes domination iff for some rho the deviator
/// can grab strictly more top-rho items than they currently hold.
inline bool is_pne_all_consistent(const Profile& profile, const Profile& truthful,
                                  const PickingSequence& sequence) {
  const int n = profile.agents();
  const int m = sequence.length();
  if (truthful.agents() != n)
    throw ValidationError("reported and truthful profiles disagree on the agent count");
  const Assignment current = sequential_allocation(profile, sequence);
  for (int agent = 0; agent < n; ++agent) {
    const auto rank = truthful.rankings[agent].rank_table();
    for (int rho = 1; rho < m; ++rho) {
      std::vector<Rational> indicator(m, Rational(0));
      for (int item = 0; item < m; ++item)
        if (rank[item] < rho) indicator[item] = 1;
      Rational held = 0;
      for (int item : current.bundles[agent])
        if (rank[item] < rho) ++held;
      detail::DeviationSearch search(profile, sequence, agent, std::move(indicator));
      if (search.best_value().primary > held) return false;
    }
  }
  return true;
}

enum class ResponseClass { better, best, neither };

/// Classifies one deviation by comparing the old utility, the new utility
/// and the exact best-response value.
inline ResponseClass verify_response_step(const Profile& profile, int agent,
                                          const Ranking& new_ranking, const UtilityFunction& u,
                                          const PickingSequence& sequence) {
  const Assignment before = sequential_allocation(profile, sequence);
  const Rational old_value = bundle_utility(u, before.bundles[agent]);
  Profile changed = profile;
  changed.rankings[agent] = new_ranking;
  const Assignment after = sequential_allocation(changed, sequence);
  const Rational new_value = bundle_utility(u, after.bundles[agent]);
  if (new_value <= old_value) return ResponseClass::neither;
  detail::DeviationSearch search(profile, sequence, agent, u.values());
  return new_value == search.best_value().primary ? ResponseClass::best : ResponseClass::better;
}

enum class DynamicsPolicy { round_robin, first_improving, replay };

enum class DynamicsVerdict { converged_to_pne, cycle_detected, step_cap_reached };

struct DynamicsStep {
  int agent;
  Ranking old_ranking;
  Ranking new_ranking;
  Assignment result;
};

struct DynamicsTrace {
  std::vector<DynamicsStep> steps;
  DynamicsVerdict verdict = DynamicsVerdict::converged_to_pne;
  /// Profile index (0 = start, k = after step k) seen again when a cycle is
  /// detected; the repeat happens at the last recorded step.
  int cycle_first_index = -1;
  Profile final_profile;
};

struct ReplayMove {
  int agent;
  Ranking ranking;
};

struct DynamicsOptions {
  DynamicsPolicy policy = DynamicsPolicy::round_robin;
  int max_steps = 10000;
  std::vector<ReplayMove> replay;
};

namespace detail {

/// First strictly improving deviation for one agent, in the fixed
/// deterministic enumeration order: depth-first over the agent's pick
/// choices, trying items in ascending index at every turn. The memoized
/// completion values prune subtrees with no improving leaf, so the walk goes
/// straight to the first improving pick path. Returns nothing when the agent
/// is already best-responding.
inline std::optional<Ranking> first_improving_deviation(const Profile& profile, int agent,
                                                        const UtilityFunction& u,
                                                        const PickingSequence& sequence,
                                                        const Rational& current_value) {
  DeviationSearch search(profile, sequence, agent, u.values());
  if (!(search.best_value().primary > current_value)) return std::nullopt;

  const int m = sequence.length();
  std::vector<int> picks;
  std::uint64_t mask = 0;
  Rational prefix = 0;
  while (std::popcount(mask) < m) {
    const int turn = std::popcount(mask);
    const int mover = sequence.turns[turn];
    if (mover != agent) {
      mask |= std::uint64_t{1} << search.forced_pick(mover, mask);
      continue;
    }
    for (int item = 0; item < m; ++item) {
      if (mask >> item & 1) continue;
      const std::uint64_t next = mask | std::uint64_t{1} << item;
      if (prefix + u.value(item) + search.value_from(next).primary > current_value) {
        prefix += u.value(item);
        picks.push_back(item);
        mask = next;
        break;
      }
    }
  }
  return witness_ranking(picks, u.base());
}

inline std::vector<std::vector<int>> profile_key(const Profile& profile) {
  std::vector<std::vector<int>> key;
  key.reserve(profile.rankings.size());
  for (const Ranking& r : profile.rankings) key.push_back(r.order);
  return key;
}

}  // namespace detail

/// Iterates better responses from a start profile until a pure Nash
/// equilibrium, a repeated profile, or the step cap. The round-robin policy
/// resumes scanning after the previous mover; first-improving rescans from
/// agent 1 every step; replay applies the supplied move list verbatim,
/// validating that every move is a strict improvement.
inline DynamicsTrace better_response_dynamics(const Profile& start,
                                              const std::vector<UtilityFunction>& utilities,
                                              const PickingSequence& sequence,
                                              const DynamicsOptions& options = {}) {
  const int n = start.agents();
  if (static_cast<int>(utilities.size()) != n)
    throw ValidationError("need one utility function per agent");

  DynamicsTrace trace;
  Profile current = start;
  std::map<std::vector<std::vector<int>>, int> seen;
  seen.emplace(detail::profile_key(current), 0);

  auto apply_move = [&](int agent, Ranking new_ranking) {
    DynamicsStep step;
    step.agent = agent;
    step.old_ranking = current.rankings[agent];
    step.new_ranking = new_ranking;
    current.rankings[agent] = std::move(new_ranking);
    step.result = sequential_allocation(current, sequence);
    trace.steps.push_back(std::move(step));
  };

  // true when the new current profile was seen before
  auto record_profile = [&]() {
    auto [it, inserted] = seen.emplace(detail::profile_key(current),
                                       static_cast<int>(trace.steps.size()));
    if (!inserted) {
      trace.verdict = DynamicsVerdict::cycle_detected;
      trace.cycle_first_index = it->second;
      return true;
    }
    return false;
  };

  auto nobody_can_improve = [&]() {
    const Assignment assignment = sequential_allocation(current, sequence);
    for (int agent = 0; agent < n; ++agent) {
      const Rational value = bundle_utility(utilities[agent], assignment.bundles[agent]);
      detail::DeviationSearch search(current, sequence, agent, utilities[agent].values());
      if (search.best_value().primary > value) return false;
    }
    return true;
  };

  if (options.policy == DynamicsPolicy::replay) {
    for (std::size_t k = 0; k < options.replay.size(); ++k) {
      if (static_cast<int>(trace.steps.size()) >= options.max_steps) {
        trace.verdict = DynamicsVerdict::step_cap_reached;
        trace.final_profile = current;
        return trace;
      }
      const ReplayMove& move = options.replay[k];
      if (move.agent < 0 || move.agent >= n)
        throw ValidationError("replay step " + std::to_string(k + 1) + ": bad agent index");
      const ResponseClass cls = verify_response_step(current, move.agent, move.ranking,
                                                     utilities[move.agent], sequence);
      if (cls == ResponseClass::neither)
        throw ReplayError("replay step " + std::to_string(k + 1) + ": move by agent " +
                          std::to_string(move.agent + 1) + " is not a better response");
      apply_move(move.agent, move.ranking);
      if (record_profile()) {
        trace.final_profile = current;
        return trace;
      }
    }
    trace.verdict = nobody_can_improve() ? DynamicsVerdict::converged_to_pne
                                         : DynamicsVerdict::step_cap_reached;
    trace.final_profile = current;
    return trace;
  }

  int scan_start = 0;
  while (true) {
    if (static_cast<int>(trace.steps.size()) >= options.max_steps) {
      trace.verdict = DynamicsVerdict::step_cap_reached;
      break;
    }
    const Assignment assignment = sequential_allocation(current, sequence);
    bool moved = false;
    for (int offset = 0; offset < n && !moved; ++offset) {
      const int agent =
          options.policy == DynamicsPolicy::round_robin ? (scan_start + offset) % n : offset;
      const Rational value = bundle_utility(utilities[agent], assignment.bundles[agent]);
      auto deviation =
          detail::first_improving_deviation(current, agent, utilities[agent], sequence, value);
      if (deviation) {
        apply_move(agent, std::move(*deviation));
        scan_start = (agent + 1) % n;
        moved = true;
      }
    }
    if (!moved) {
      trace.verdict = DynamicsVerdict::converged_to_pne;
      break;
    }
    if (record_profile()) break;
  }
  trace.final_profile = current;
  return trace;
}

}  // namespace seqalloc
