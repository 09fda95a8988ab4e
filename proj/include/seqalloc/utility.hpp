#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/rational.hpp"
#include "seqalloc/types.hpp"

namespace seqalloc {

enum class UtilityKind { lexicographic, upward_lexicographic, borda, explicit_values };

/// Additive cardinal utility over items, tied to the ranking it was declared
/// against. Values never increase along the ranking and are strictly
/// positive. The named constructors (lexicographic, upward-lexicographic,
/// borda) always produce strictly decreasing values; explicit values may tie
/// on adjacent items, which is what the Stackelberg analysis needs, but may
/// never reverse the ranking.
class UtilityFunction {
 public:
  UtilityFunction(Ranking base, std::vector<Rational> values)
      : base_(std::move(base)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != base_.size())
      throw ValidationError("utility must assign a value to every item");
    const auto rank = base_.rank_table();
    for (int item = 0; item < base_.size(); ++item) {
      if (values_[item] <= 0)
        throw ValidationError("utility values must be strictly positive");
    }
    for (int pos = 0; pos + 1 < base_.size(); ++pos) {
      if (values_[base_.order[pos]] < values_[base_.order[pos + 1]])
        throw ValidationError("utility values inconsistent with ranking");
    }
  }

  const Ranking& base() const { return base_; }
  const std::vector<Rational>& values() const { return values_; }

  const Rational& value(int item) const {
    if (item < 0 || item >= static_cast<int>(values_.size()))
      throw ValidationError("unknown item index in utility lookup");
    return values_[item];
  }

  /// True when the values realize the ranking exactly (no ties).
  bool strictly_consistent() const {
    for (int pos = 0; pos + 1 < base_.size(); ++pos)
      if (values_[base_.order[pos]] == values_[base_.order[pos + 1]]) return false;
    return true;
  }

  bool operator==(const UtilityFunction& other) const {
    return base_ == other.base_ && values_ == other.values_;
  }

 private:
  Ranking base_;
  std::vector<Rational> values_;
};

/// u(S) = sum of item values.
inline Rational bundle_utility(const UtilityFunction& u, const Bundle& bundle) {
  Rational total = 0;
  for (int item : bundle) total += u.value(item);
  return total;
}

/// Builds a utility of the requested kind on ranking r. With m items and
/// 1-based rank j: lexicographic assigns 2^(m-j), upward-lexicographic
/// assigns 1 - 1/2^(m+1-j), borda assigns m+1-j. Explicit values are
/// validated against r.
inline UtilityFunction make_utility(UtilityKind kind, const Ranking& r,
                                    std::optional<std::vector<Rational>> explicit_values = {}) {
  const int m = r.size();
  if ((kind == UtilityKind::explicit_values) != explicit_values.has_value())
    throw ValidationError("explicit values must be supplied exactly when kind is explicit");
  std::vector<Rational> values(m);
  switch (kind) {
    case UtilityKind::lexicographic:
      for (int pos = 0; pos < m; ++pos)
        values[r.order[pos]] = Rational(BigInt(1) << (m - 1 - pos));
      break;
    case UtilityKind::upward_lexicographic:
      for (int pos = 0; pos < m; ++pos) {
        const BigInt den = BigInt(1) << (m - pos);
        values[r.order[pos]] = Rational(den - 1, den);
      }
      break;
    case UtilityKind::borda:
      for (int pos = 0; pos < m; ++pos) values[r.order[pos]] = m - pos;
      break;
    case UtilityKind::explicit_values:
      values = std::move(*explicit_values);
      break;
  }
  return UtilityFunction(r, std::move(values));
}

enum class BundleOrder { first_better, second_better, equal };

namespace detail {
inline std::vector<int> sorted_ranks(const std::vector<int>& rank, const Bundle& bundle) {
  std::vector<int> rs;
  rs.reserve(bundle.size());
  for (int item : bundle) {
    if (item < 0 || item >= static_cast<int>(rank.size()))
      throw ValidationError("unknown item index in bundle");
    rs.push_back(rank[item]);
  }
  std::sort(rs.begin(), rs.end());
  return rs;
}
}  // namespace detail

/// Lexicographic comparison of equal-size bundles: walk both from the most
/// preferred end; the first position that differs decides. Coincides with
/// numeric comparison under any lexicographic utility on r.
inline BundleOrder compare_bundles_lex(const Ranking& r, const Bundle& s, const Bundle& t) {
  if (s.size() != t.size())
    throw ValidationError("lexicographic bundle comparison requires equal sizes");
  const auto rank = r.rank_table();
  const auto rs = detail::sorted_ranks(rank, s);
  const auto rt = detail::sorted_ranks(rank, t);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] < rt[i]) return BundleOrder::first_better;
    if (rs[i] > rt[i]) return BundleOrder::second_better;
  }
  return BundleOrder::equal;
}

/// Upward-lexicographic comparison: walk both bundles from the least
/// preferred end; the better worst item wins, then the second worst, and so
/// on. Coincides with numeric comparison under u(o_j) = 1 - 1/2^(m+1-j).
inline BundleOrder compare_bundles_uplex(const Ranking& r, const Bundle& s, const Bundle& t) {
  if (s.size() != t.size())
    throw ValidationError("upward-lexicographic bundle comparison requires equal sizes");
  const auto rank = r.rank_table();
  const auto rs = detail::sorted_ranks(rank, s);
  const auto rt = detail::sorted_ranks(rank, t);
  for (std::size_t i = rs.size(); i-- > 0;) {
    if (rs[i] < rt[i]) return BundleOrder::first_better;
    if (rs[i] > rt[i]) return BundleOrder::second_better;
  }
  return BundleOrder::equal;
}

}  // namespace seqalloc
