#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqalloc/equilibria.hpp"
#include "seqalloc/errors.hpp"
#include "seqalloc/instance.hpp"
#include "seqalloc/rational.hpp"
#include "seqalloc/types.hpp"
#include "seqalloc/utility.hpp"

namespace seqalloc {

// Throughout this module agent 0 is the leader (commits to a ranking first)
// and agent 1 is the follower (best-responds, ties broken in the leader's
// favor). The picking sequence uses those indices.

/// Partition of the items into classes the follower values equally, ordered
/// by strictly decreasing follower value; within a class, items are ordered
/// by decreasing leader value.
struct ValueClasses {
  std::vector<std::vector<int>> classes;
  std::vector<Rational> class_value;  // follower value per class

  int class_count() const { return static_cast<int>(classes.size()); }
};

inline ValueClasses partition_by_value(const std::vector<Rational>& follower_values,
                                       const std::vector<Rational>& leader_values) {
  if (follower_values.size() != leader_values.size())
    throw ValidationError("leader and follower must value the same items");
  const int m = static_cast<int>(follower_values.size());
  std::map<Rational, std::vector<int>, std::greater<Rational>> groups;
  for (int item = 0; item < m; ++item) groups[follower_values[item]].push_back(item);
  ValueClasses result;
  for (auto& [value, items] : groups) {
    std::stable_sort(items.begin(), items.end(), [&](int a, int b) {
      return leader_values[a] > leader_values[b];
    });
    result.classes.push_back(std::move(items));
    result.class_value.push_back(value);
  }
  return result;
}

namespace detail {

/// Follower's choice over a (possibly partial) leader ranking in the token
/// model: tokens start at the given 1-based positions and may only slide to
/// later positions, staying distinct. The follower takes the marked items,
/// maximizing follower value, then minimizing the leader's value of the
/// taken set; remaining ties resolve toward later positions.
struct TokenTake {
  std::vector<int> positions;  // chosen 1-based positions, ascending
  Rational follower_value;
  Rational leader_take_value;
};

inline TokenTake token_take(const std::vector<int>& ranked_items,
                            const std::vector<int>& token_positions,
                            const std::vector<Rational>& follower_values,
                            const std::vector<Rational>& leader_values) {
  const int j = static_cast<int>(ranked_items.size());
  const int ell = static_cast<int>(token_positions.size());
  for (int pos : token_positions)
    if (pos < 1 || pos > j) throw ValidationError("token position outside the ranking");

  struct Cell {
    bool valid = false;
    Rational follower;
    Rational leader;
    bool place = false;
  };
  // best[p][c]: deciding positions p..1 with c tokens already placed above p
  std::vector<std::vector<Cell>> best(j + 1, std::vector<Cell>(ell + 1));
  best[0][ell].valid = true;
  for (int p = 1; p <= j; ++p) {
    const int item = ranked_items[p - 1];
    for (int c = 0; c <= ell; ++c) {
      Cell skip = best[p - 1][c];
      skip.place = false;
      Cell place;
      if (c < ell && p >= token_positions[ell - c - 1]) {
        const Cell& sub = best[p - 1][c + 1];
        if (sub.valid) {
          place.valid = true;
          place.follower = sub.follower + follower_values[item];
          place.leader = sub.leader + leader_values[item];
          place.place = true;
        }
      }
      Cell chosen;
      if (place.valid && skip.valid) {
        if (place.follower != skip.follower)
          chosen = place.follower > skip.follower ? place : skip;
        else if (place.leader != skip.leader)
          chosen = place.leader < skip.leader ? place : skip;
        else
          chosen = place;  // canonical: slide toward the bottom
      } else {
        chosen = place.valid ? place : skip;
      }
      best[p][c] = std::move(chosen);
    }
  }
  if (!best[j][0].valid) throw ValidationError("token placement infeasible");

  TokenTake result;
  result.follower_value = best[j][0].follower;
  result.leader_take_value = best[j][0].leader;
  int c = 0;
  for (int p = j; p >= 1; --p) {
    if (best[p][c].place) {
      result.positions.push_back(p);
      ++c;
    }
  }
  std::reverse(result.positions.begin(), result.positions.end());
  return result;
}

/// 1-based positions of the follower's turns in the sequence.
inline std::vector<int> follower_positions(const PickingSequence& sequence) {
  std::vector<int> positions;
  for (int turn = 0; turn < sequence.length(); ++turn)
    if (sequence.turns[turn] == 1) positions.push_back(turn + 1);
  return positions;
}

}  // namespace detail

/// The follower's take set against a committed leader ranking, allowing the
/// follower exactly ell items: tokens start on the ranking positions of the
/// first ell follower turns and slide only downward. Among reachable sets the
/// follower takes a most valuable one, ties broken in the leader's favor.
inline Bundle follower_take_set(const Ranking& leader_ranking, const PickingSequence& sequence,
                                int ell, const std::vector<Rational>& follower_values,
                                const std::vector<Rational>& leader_values) {
  const auto positions = detail::follower_positions(sequence);
  if (ell < 0 || ell > static_cast<int>(positions.size()))
    throw ValidationError("follower cannot take " + std::to_string(ell) + " items; the sequence has " +
                          std::to_string(positions.size()) + " follower turns");
  const std::vector<int> tokens(positions.begin(), positions.begin() + ell);
  const auto take = detail::token_take(leader_ranking.order, tokens, follower_values, leader_values);
  Bundle bundle;
  for (int pos : take.positions) bundle.push_back(leader_ranking.order[pos - 1]);
  return make_bundle(std::move(bundle));
}

struct StackelbergResult {
  Ranking ranking;        // optimal leader commitment
  Rational leader_value;  // leader's value of their own resulting bundle
  Bundle follower_take;
};

namespace detail {

constexpr long long kDpStateCap = 50'000'000;
constexpr int kBruteMaxItems = 7;

struct DpState {
  enum class Status : std::uint8_t { unknown, computed, infeasible };
  Status status = Status::unknown;
  Rational value;
  std::int8_t cls = -1;   // class whose current bottom item ranks last
  std::int8_t kase = -1;  // 1: follower takes the bottom item, 2: leader keeps it
};

class StackelbergDp {
 public:
  StackelbergDp(const std::vector<Rational>& leader_values,
                const std::vector<Rational>& follower_values, const PickingSequence& sequence)
      : leader_(leader_values),
        follower_(follower_values),
        classes_(partition_by_value(follower_values, leader_values)),
        positions_(follower_positions(sequence)),
        m_(sequence.length()) {
    twos_.assign(m_ + 1, 0);
    for (int j = 1; j <= m_; ++j)
      twos_[j] = twos_[j - 1] + (sequence.turns[j - 1] == 1 ? 1 : 0);

    const int k = classes_.class_count();
    strides_.assign(k + 1, 1);
    long long states = static_cast<int>(positions_.size()) + 1;
    for (int i = k - 1; i >= 0; --i) {
      strides_[i] = states;
      states *= static_cast<int>(classes_.classes[i].size()) + 1;
      if (states > kDpStateCap)
        throw SizeGuardError("Stackelberg DP table above " + std::to_string(kDpStateCap) +
                             " states (k = " + std::to_string(k) + " follower value classes)");
    }
    table_.resize(states);
  }

  StackelbergResult solve() {
    const int k = classes_.class_count();
    std::vector<int> full(k);
    for (int i = 0; i < k; ++i) full[i] = static_cast<int>(classes_.classes[i].size());
    const int m_prime = static_cast<int>(positions_.size());
    compute(full, m_prime);

    StackelbergResult result;
    result.ranking.order = rebuild_ranking(full, m_prime);
    const std::vector<int> tokens(positions_.begin(), positions_.end());
    const auto take = token_take(result.ranking.order, tokens, follower_, leader_);
    for (int pos : take.positions) result.follower_take.push_back(result.ranking.order[pos - 1]);
    result.follower_take = make_bundle(std::move(result.follower_take));
    result.leader_value = table_[index_of(full, m_prime)].value;
    return result;
  }

 private:
  long long index_of(const std::vector<int>& state, int ell) const {
    long long idx = ell;
    for (std::size_t i = 0; i < state.size(); ++i) idx += state[i] * strides_[i];
    return idx;
  }

  /// Ranking (best first) stored for a computed state, rebuilt by walking
  /// the chosen transitions.
  std::vector<int> rebuild_ranking(std::vector<int> state, int ell) const {
    std::vector<int> reversed;
    while (std::accumulate(state.begin(), state.end(), 0) > 0) {
      const DpState& cell = table_[index_of(state, ell)];
      const int i = cell.cls;
      reversed.push_back(classes_.classes[i][state[i] - 1]);
      --state[i];
      if (cell.kase == 1) --ell;
    }
    return {reversed.rbegin(), reversed.rend()};
  }

  const DpState& compute(const std::vector<int>& state, int ell) {
    DpState& cell = table_[index_of(state, ell)];
    if (cell.status != DpState::Status::unknown) return cell;

    const int j = std::accumulate(state.begin(), state.end(), 0);
    if (ell > twos_[j]) {
      cell.status = DpState::Status::infeasible;
      return cell;
    }
    if (j == 0) {
      cell.status = DpState::Status::computed;
      cell.value = 0;
      return cell;
    }

    // Try both cases of every class whose bottom item could rank last. Each
    // candidate ranking (child ranking + bottom item) is evaluated by
    // recomputing the follower's response on it, so a candidate's value is
    // always achievable; the case assumption picks which child the ranking
    // extends, and a transition whose assumption fails may still win on its
    // directly evaluated value.
    struct Candidate {
      Rational value;
      int cls;
      int kase;
    };
    std::optional<Candidate> best;
    const std::vector<int> tokens(positions_.begin(), positions_.begin() + ell);

    std::vector<int> child = state;
    for (int i = 0; i < classes_.class_count(); ++i) {
      if (state[i] == 0) continue;
      const int bottom = classes_.classes[i][state[i] - 1];
      --child[i];
      for (int kase = 1; kase <= 2; ++kase) {
        const int child_ell = kase == 1 ? ell - 1 : ell;
        if (child_ell < 0) continue;
        const DpState& sub = compute(child, child_ell);
        if (sub.status == DpState::Status::infeasible) continue;

        std::vector<int> ranking = rebuild_ranking(child, child_ell);
        ranking.push_back(bottom);
        const TokenTake take = token_take(ranking, tokens, follower_, leader_);
        Rational value = 0;
        for (int item : ranking) value += leader_[item];
        value -= take.leader_take_value;

        Candidate candidate{std::move(value), i, kase};
        if (!best || candidate.value > best->value) best = candidate;
      }
      ++child[i];
    }

    cell.status = DpState::Status::computed;
    cell.value = best->value;
    cell.cls = static_cast<std::int8_t>(best->cls);
    cell.kase = static_cast<std::int8_t>(best->kase);
    return cell;
  }

  const std::vector<Rational>& leader_;
  const std::vector<Rational>& follower_;
  ValueClasses classes_;
  std::vector<int> positions_;
  int m_;
  std::vector<int> twos_;
  std::vector<long long> strides_;
  std::vector<DpState> table_;
};

}  // namespace detail

/// Optimal leader commitment by dynamic programming over follower value
/// classes. States fix how many of each class's leader-best items are in
/// play and how many items the follower may still take; every transition is
/// validated by recomputing the follower's response on the reconstructed
/// candidate ranking.
inline StackelbergResult stackelberg_dp(const std::vector<Rational>& leader_values,
                                        const std::vector<Rational>& follower_values,
                                        const PickingSequence& sequence) {
  if (static_cast<int>(leader_values.size()) != sequence.length() ||
      static_cast<int>(follower_values.size()) != sequence.length())
    throw ValidationError("agents must value exactly the allocated items");
  for (int turn : sequence.turns)
    if (turn != 0 && turn != 1)
      throw ValidationError("Stackelberg analysis needs a two-agent sequence");
  detail::StackelbergDp dp(leader_values, follower_values, sequence);
  return dp.solve();
}

/// Brute-force oracle: enumerate every leader ranking, let the follower
/// best-respond (via the deviation search, ties broken in the leader's
/// favor), and keep the first maximizer of the leader's value.
inline StackelbergResult stackelberg_brute(const std::vector<Rational>& leader_values,
                                           const std::vector<Rational>& follower_values,
                                           const PickingSequence& sequence) {
  const int m = sequence.length();
  if (m > detail::kBruteMaxItems)
    throw SizeGuardError("brute-force Stackelberg search capped at " +
                         std::to_string(detail::kBruteMaxItems) + " items");
  if (static_cast<int>(leader_values.size()) != m ||
      static_cast<int>(follower_values.size()) != m)
    throw ValidationError("agents must value exactly the allocated items");
  for (int turn : sequence.turns)
    if (turn != 0 && turn != 1)
      throw ValidationError("Stackelberg analysis needs a two-agent sequence");

  Rational total = 0;
  for (const Rational& v : leader_values) total += v;
  std::vector<Rational> negated_leader;
  for (const Rational& v : leader_values) negated_leader.push_back(-v);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::optional<StackelbergResult> best;
  do {
    Profile committed;
    committed.rankings.resize(2);
    committed.rankings[0].order = order;
    committed.rankings[1].order = order;  // placeholder; the deviator's slot is ignored
    detail::DeviationSearch search(committed, sequence, 1, follower_values, negated_leader);
    const detail::PairValue& value = search.best_value();
    const Rational leader_value = total + value.secondary;  // secondary is -(taken leader value)
    if (!best || leader_value > best->leader_value) {
      StackelbergResult result;
      result.ranking.order = order;
      result.leader_value = leader_value;
      result.follower_take = make_bundle(search.best_picks());
      best = std::move(result);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

enum class StackelbergMethod { dp, brute, both };

struct CommitmentReport {
  Rational truthful_value;
  Rational optimal_value;
  Rational advantage;
  Ranking optimal_ranking;
  Bundle follower_take;
};

/// Compares committing to the truth with the optimal commitment for the
/// leader of a two-agent instance. Both agents' cardinal utilities must be
/// present. leader is the 0-based agent index to treat as the committing
/// agent.
inline CommitmentReport commitment_advantage(const Instance& instance, int leader = 0,
                                             StackelbergMethod method = StackelbergMethod::dp) {
  if (instance.agent_count() != 2)
    throw ValidationError("commitment analysis is defined for exactly two agents");
  if (leader != 0 && leader != 1) throw ValidationError("leader must be agent 1 or 2");
  const int follower = 1 - leader;
  if (!instance.utilities[follower])
    throw ValidationError("follower utility missing (agent " + instance.agent_names[follower] +
                          ")");
  if (!instance.utilities[leader])
    throw ValidationError("leader utility missing (agent " + instance.agent_names[leader] + ")");

  const std::vector<Rational>& leader_values = instance.utilities[leader]->values();
  const std::vector<Rational>& follower_values = instance.utilities[follower]->values();
  PickingSequence sequence;  // relabel so the leader is agent 0
  for (int agent : instance.sequence.turns) sequence.turns.push_back(agent == leader ? 0 : 1);

  Rational total = 0;
  for (const Rational& v : leader_values) total += v;

  const int m_prime = static_cast<int>(detail::follower_positions(sequence).size());
  const Ranking& truthful_ranking = instance.truthful.rankings[leader];
  const Bundle truthful_take =
      follower_take_set(truthful_ranking, sequence, m_prime, follower_values, leader_values);
  Rational truthful_value = total;
  for (int item : truthful_take) truthful_value -= leader_values[item];

  StackelbergResult optimal;
  switch (method) {
    case StackelbergMethod::dp:
      optimal = stackelberg_dp(leader_values, follower_values, sequence);
      break;
    case StackelbergMethod::brute:
      optimal = stackelberg_brute(leader_values, follower_values, sequence);
      break;
    case StackelbergMethod::both: {
      optimal = stackelberg_dp(leader_values, follower_values, sequence);
      const StackelbergResult brute = stackelberg_brute(leader_values, follower_values, sequence);
      if (brute.leader_value != optimal.leader_value)
        throw ValidationError("Stackelberg DP and brute-force values disagree");
      break;
    }
  }

  CommitmentReport report;
  report.truthful_value = truthful_value;
  report.optimal_value = optimal.leader_value;
  report.advantage = optimal.leader_value - truthful_value;
  report.optimal_ranking = std::move(optimal.ranking);
  report.follower_take = std::move(optimal.follower_take);
  return report;
}

}  // namespace seqalloc
