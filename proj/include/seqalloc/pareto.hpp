#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/types.hpp"
#include "seqalloc/utility.hpp"

namespace seqalloc {

/// Weak pairwise-comparison (responsive) dominance: S is at least as good as
/// T iff there is an injection from T into S mapping every item to a weakly
/// preferred one. Checked by sorting both bundles best-first and requiring
/// the j-th best of S to be weakly preferred to the j-th best of T; the
/// greedy exchange argument makes this equivalent to the matching condition.
/// Sizes may differ; |S| < |T| can never dominate.
inline bool pairwise_dominates(const Ranking& r, const Bundle& s, const Bundle& t) {
  if (s.size() < t.size()) return false;
  const auto rank = r.rank_table();
  const auto rs = detail::sorted_ranks(rank, s);
  const auto rt = detail::sorted_ranks(rank, t);
  for (std::size_t i = 0; i < rt.size(); ++i)
    if (rs[i] > rt[i]) return false;
  return true;
}

/// Strict preference: S dominates T but not conversely. The relation is
/// transitive but not complete; incomparable pairs fail in both directions.
inline bool strictly_pairwise_preferred(const Ranking& r, const Bundle& s, const Bundle& t) {
  return pairwise_dominates(r, s, t) && !pairwise_dominates(r, t, s);
}

/// A Pareto-dominates B iff every agent weakly prefers their A-bundle by
/// pairwise comparisons and at least one strictly does.
inline bool pareto_dominates(const Profile& truthful, const Assignment& a, const Assignment& b) {
  if (a.agents() != b.agents() || a.agents() != truthful.agents())
    throw ValidationError("assignments must cover the same agent population");
  bool some_strict = false;
  for (int agent = 0; agent < a.agents(); ++agent) {
    const auto& r = truthful.rankings[agent];
    if (!pairwise_dominates(r, a.bundles[agent], b.bundles[agent])) return false;
    if (!pairwise_dominates(r, b.bundles[agent], a.bundles[agent])) some_strict = true;
  }
  return some_strict;
}

struct ParetoCheck {
  bool optimal = true;
  /// A dominating assignment's bundles when the check fails.
  std::optional<std::vector<Bundle>> witness;
};

namespace detail {

constexpr long long kParetoEnumerationCap = 10'000'000;

inline long long count_assignments(int m, const std::vector<int>& sizes) {
  // multinomial m! / prod(sizes!) built as a product of binomials, capped
  long long total = 1;
  int remaining = m;
  for (int size : sizes) {
    for (int step = 0; step < size; ++step) {
      total = total * (remaining - step) / (step + 1);
      if (total > kParetoEnumerationCap) return kParetoEnumerationCap + 1;
    }
    remaining -= size;
  }
  return total;
}

}  // namespace detail

/// Brute-force Pareto-optimality test under pairwise comparisons. Enumerates
/// every assignment with the same per-agent bundle sizes (sizes are forced:
/// a smaller bundle can never weakly dominate) in deterministic order and
/// reports the first dominating one found, if any.
inline ParetoCheck is_pareto_optimal_pc(const Profile& truthful, const Assignment& assignment) {
  const int n = assignment.agents();
  const int m = assignment.items();
  if (truthful.agents() != n)
    throw ValidationError("profile and assignment disagree on the agent count");

  std::vector<int> sizes(n);
  for (int agent = 0; agent < n; ++agent) sizes[agent] = static_cast<int>(assignment.bundles[agent].size());
  if (detail::count_assignments(m, sizes) > detail::kParetoEnumerationCap)
    throw SizeGuardError("Pareto enumeration above " +
                         std::to_string(detail::kParetoEnumerationCap) + " candidate assignments");

  // Item list in the fixed enumeration order 0..m-1; every item must be one
  // of the assignment's items.
  std::vector<int> all_items;
  for (const auto& bundle : assignment.bundles) all_items.insert(all_items.end(), bundle.begin(), bundle.end());
  all_items = make_bundle(std::move(all_items));
  if (static_cast<int>(all_items.size()) != m)
    throw ValidationError("assignment allocates some item more than once");

  std::vector<Bundle> candidate(n);
  std::vector<int> capacity = sizes;
  ParetoCheck result;

  auto assign = [&](auto&& self, int index) -> bool {
    if (index == m) {
      Assignment b;
      b.bundles = candidate;
      for (auto& bundle : b.bundles) bundle = make_bundle(std::move(bundle));
      if (b == assignment) return false;
      if (pareto_dominates(truthful, b, assignment)) {
        result.optimal = false;
        result.witness = b.bundles;
        return true;
      }
      return false;
    }
    for (int agent = 0; agent < n; ++agent) {
      if (capacity[agent] == 0) continue;
      --capacity[agent];
      candidate[agent].push_back(all_items[index]);
      if (self(self, index + 1)) return true;
      candidate[agent].pop_back();
      ++capacity[agent];
    }
    return false;
  };
  assign(assign, 0);
  return result;
}

}  // namespace seqalloc
