#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "seqalloc/errors.hpp"

namespace seqalloc {

// Items and agents are dense 0-based indices inside the library. The
// instance layer owns the mapping to external names and 1-based agent
// numbering.

/// A strict total order over all m items, most preferred first.
struct Ranking {
  std::vector<int> order;

  int size() const { return static_cast<int>(order.size()); }

  /// Position of each item in the order (0 = most preferred).
  std::vector<int> rank_table() const {
    std::vector<int> rank(order.size(), -1);
    for (int pos = 0; pos < size(); ++pos) rank[order[pos]] = pos;
    return rank;
  }

  bool operator==(const Ranking& other) const = default;
};

/// One ranking per agent.
struct Profile {
  std::vector<Ranking> rankings;

  int agents() const { return static_cast<int>(rankings.size()); }

  bool operator==(const Profile& other) const = default;
};

/// Agent turn order; turns.size() equals the item count.
struct PickingSequence {
  std::vector<int> turns;  // 0-based agent index per turn

  int length() const { return static_cast<int>(turns.size()); }

  int turn_count(int agent) const {
    return static_cast<int>(std::count(turns.begin(), turns.end(), agent));
  }

  bool operator==(const PickingSequence& other) const = default;
};

/// Item set, kept sorted ascending by item index.
using Bundle = std::vector<int>;

inline Bundle make_bundle(std::vector<int> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

inline std::uint64_t bundle_mask(const Bundle& bundle) {
  std::uint64_t mask = 0;
  for (int item : bundle) mask |= std::uint64_t{1} << item;
  return mask;
}

inline Bundle mask_bundle(std::uint64_t mask) {
  Bundle out;
  for (int item = 0; mask != 0; ++item, mask >>= 1)
    if (mask & 1) out.push_back(item);
  return out;
}

struct Pick {
  int turn;   // 0-based position in the sequence
  int agent;  // who picked
  int item;   // what they picked

  bool operator==(const Pick& other) const = default;
};

/// Result of running the mechanism: per-agent bundles plus the pick trace.
struct Assignment {
  std::vector<Bundle> bundles;
  std::vector<Pick> trace;

  int agents() const { return static_cast<int>(bundles.size()); }

  int items() const {
    int m = 0;
    for (const auto& b : bundles) m += static_cast<int>(b.size());
    return m;
  }

  /// The n x m 0/1 allocation matrix.
  std::vector<std::vector<int>> matrix() const {
    std::vector<std::vector<int>> mat(bundles.size(), std::vector<int>(items(), 0));
    for (int agent = 0; agent < agents(); ++agent)
      for (int item : bundles[agent]) mat[agent][item] = 1;
    return mat;
  }

  bool operator==(const Assignment& other) const { return bundles == other.bundles; }
};

}  // namespace seqalloc
