#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace seqalloc;
using testsupport::make_instance;
using testsupport::named_bundle;

namespace {

Instance three_agent_instance() {
  return make_instance({"a", "b", "c", "d", "e", "f"}, "123123",
                       {{"a", "b", "c", "d", "e", "f"},
                        {"e", "f", "b", "a", "d", "c"},
                        {"c", "f", "e", "d", "a", "b"}});
}

Assignment bundles_only(std::vector<Bundle> bundles) {
  Assignment a;
  a.bundles = std::move(bundles);
  return a;
}

std::vector<Bundle> all_subsets(int m) {
  std::vector<Bundle> subsets;
  for (int mask = 0; mask < (1 << m); ++mask) subsets.push_back(mask_bundle(mask));
  return subsets;
}

}  // namespace

TEST_CASE("pairwise dominance examples") {
  const Ranking r6{{0, 1, 2, 3, 4, 5}};  // a,b,c,d,e,f
  CHECK(pairwise_dominates(r6, {0, 1}, {0, 2}));
  CHECK(pairwise_dominates(r6, {3, 4}, {3, 4}));

  const Ranking r4{{0, 1, 2, 3}};  // a,b,c,d
  CHECK_FALSE(pairwise_dominates(r4, {0, 3}, {1, 2}));
  CHECK_FALSE(pairwise_dominates(r4, {1, 2}, {0, 3}));  // incomparable pair

  // size asymmetry: more items may dominate, fewer never do
  CHECK(pairwise_dominates(r4, {0, 1}, {0}));
  CHECK_FALSE(pairwise_dominates(r4, {0}, {0, 1}));
  CHECK_THROWS_AS(pairwise_dominates(r4, {0, 9}, {1}), ValidationError);
}

TEST_CASE("strict pairwise preference") {
  const Ranking r{{0, 1, 2}};
  CHECK(strictly_pairwise_preferred(r, {0}, {1}));
  CHECK_FALSE(strictly_pairwise_preferred(r, {0, 2}, {0, 2}));

  // agent 2 of the three-agent instance strictly prefers {e,f} to {b,e}
  const Instance inst = three_agent_instance();
  CHECK(strictly_pairwise_preferred(inst.truthful.rankings[1], named_bundle(inst, {"e", "f"}),
                                    named_bundle(inst, {"b", "e"})));
}

TEST_CASE("dominance is reflexive, transitive, and antisymmetric up to equality") {
  testsupport::Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> m_dist(2, 8);
    const int m = m_dist(rng);
    const Ranking r = testsupport::random_ranking(rng, m);
    std::uniform_int_distribution<int> mask_dist(0, (1 << m) - 1);
    const Bundle s = mask_bundle(mask_dist(rng));
    const Bundle t = mask_bundle(mask_dist(rng));
    const Bundle u = mask_bundle(mask_dist(rng));

    CHECK(pairwise_dominates(r, s, s));
    if (pairwise_dominates(r, s, t) && pairwise_dominates(r, t, u))
      CHECK(pairwise_dominates(r, s, u));
    if (s.size() == t.size() && pairwise_dominates(r, s, t) && pairwise_dominates(r, t, s))
      CHECK(s == t);
  }
}

TEST_CASE("sorted dominance check agrees with the matching oracle") {
  testsupport::Rng rng(2002);
  for (int m = 1; m <= 5; ++m) {
    const Ranking r = testsupport::random_ranking(rng, m);
    const auto subsets = all_subsets(m);
    for (const Bundle& s : subsets)
      for (const Bundle& t : subsets)
        CHECK(pairwise_dominates(r, s, t) == testsupport::matching_dominates(r, s, t));
  }
}

TEST_CASE("equal-size dominance matches universal utility comparison on samples") {
  testsupport::Rng rng(3003);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> m_dist(2, 8);
    const int m = m_dist(rng);
    const Ranking r = testsupport::random_ranking(rng, m);
    std::uniform_int_distribution<int> size_dist(1, m);
    const int size = size_dist(rng);
    std::vector<int> pool(m);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    const Bundle s = make_bundle({pool.begin(), pool.begin() + size});
    std::shuffle(pool.begin(), pool.end(), rng);
    const Bundle t = make_bundle({pool.begin(), pool.begin() + size});

    const bool dominates = pairwise_dominates(r, s, t);
    bool always_weakly_better = true;
    for (int draw = 0; draw < 50; ++draw) {
      const UtilityFunction u = testsupport::random_consistent_utility(rng, r);
      if (bundle_utility(u, s) < bundle_utility(u, t)) {
        always_weakly_better = false;
        break;
      }
    }
    if (dominates) CHECK(always_weakly_better);  // the only-if direction must never fail
    if (!always_weakly_better) CHECK_FALSE(dominates);
  }
}

TEST_CASE("Pareto dominance between the three-agent outcomes") {
  const Instance inst = three_agent_instance();
  const Assignment truthful_outcome = bundles_only({named_bundle(inst, {"a", "b"}),
                                                    named_bundle(inst, {"e", "f"}),
                                                    named_bundle(inst, {"c", "d"})});
  const Assignment reported_outcome = bundles_only({named_bundle(inst, {"c", "a"}),
                                                    named_bundle(inst, {"b", "e"}),
                                                    named_bundle(inst, {"f", "d"})});
  CHECK(pareto_dominates(inst.truthful, truthful_outcome, reported_outcome));
  CHECK_FALSE(pareto_dominates(inst.truthful, reported_outcome, truthful_outcome));
  CHECK_FALSE(pareto_dominates(inst.truthful, truthful_outcome, truthful_outcome));
}

TEST_CASE("the three-agent equilibrium outcome is not Pareto optimal") {
  const Instance inst = three_agent_instance();
  Profile reported;
  reported.rankings = {testsupport::named_ranking(inst, {"c", "f", "a", "b", "d", "e"}),
                       testsupport::named_ranking(inst, {"b", "a", "e", "c", "d", "f"}),
                       testsupport::named_ranking(inst, {"f", "e", "d", "a", "b", "c"})};
  const Assignment outcome = sequential_allocation(reported, inst.sequence);
  REQUIRE(outcome.bundles[0] == named_bundle(inst, {"a", "c"}));

  const ParetoCheck check = is_pareto_optimal_pc(inst.truthful, outcome);
  REQUIRE_FALSE(check.optimal);
  REQUIRE(check.witness.has_value());
  CHECK((*check.witness)[0] == named_bundle(inst, {"a", "b"}));
  CHECK((*check.witness)[1] == named_bundle(inst, {"e", "f"}));
  CHECK((*check.witness)[2] == named_bundle(inst, {"c", "d"}));
}

TEST_CASE("truthful outcomes are Pareto optimal on random instances") {
  testsupport::Rng rng(4004);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 3);
    std::uniform_int_distribution<int> m_dist(2, 8);
    const Instance inst = testsupport::random_instance(rng, n_dist(rng), m_dist(rng));
    const Assignment truthful_outcome = sequential_allocation(inst.truthful, inst.sequence);
    CHECK(is_pareto_optimal_pc(inst.truthful, truthful_outcome).optimal);
    const Assignment bluff_outcome =
        sequential_allocation(bluff_profile(inst), inst.sequence);
    CHECK(is_pareto_optimal_pc(inst.truthful, bluff_outcome).optimal);
  }
}

TEST_CASE("a single agent holding everything is Pareto optimal") {
  const Instance inst = make_instance({"a", "b"}, "11", {{"a", "b"}});
  const Assignment outcome = sequential_allocation(inst.truthful, inst.sequence);
  CHECK(is_pareto_optimal_pc(inst.truthful, outcome).optimal);
}

TEST_CASE("oversized enumeration is rejected") {
  // 20 items over 4 agents, 5 each: far beyond the candidate cap
  testsupport::Rng rng(5005);
  Instance inst = testsupport::random_instance(rng, 4, 20);
  for (int t = 0; t < 20; ++t) inst.sequence.turns[t] = t % 4;
  const Assignment outcome = sequential_allocation(inst.truthful, inst.sequence);
  CHECK_THROWS_AS(is_pareto_optimal_pc(inst.truthful, outcome), SizeGuardError);
}
