#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace seqalloc;
using testsupport::make_instance;
using testsupport::named_bundle;
using testsupport::named_ranking;

namespace {

Ranking abc() { return Ranking{{0, 1, 2}}; }
Ranking abcd() { return Ranking{{0, 1, 2, 3}}; }

}  // namespace

TEST_CASE("validate_instance accepts the four-item 1221 instance") {
  const Instance inst = make_instance({"o1", "o2", "o3", "o4"}, "1221",
                                      {{"o1", "o2", "o3", "o4"}, {"o1", "o3", "o2", "o4"}});
  CHECK(inst.item_count() == 4);
  CHECK(inst.agent_count() == 2);
  CHECK(inst.sequence.turns == std::vector<int>{0, 1, 1, 0});
  CHECK(inst.truthful.rankings[1].order == std::vector<int>{0, 2, 1, 3});
}

TEST_CASE("validate_instance diagnoses malformed data") {
  SECTION("duplicate item") {
    InstanceData data;
    data.items = {"o1", "o1", "o2"};
    data.sequence = {1, 1, 1};
    data.agents = {{"1", {"o1", "o1", "o2"}, std::nullopt}};
    CHECK_THROWS_AS(validate_instance(data), ValidationError);
  }
  SECTION("ranking not a permutation") {
    CHECK_THROWS_AS(make_instance({"a", "b", "c"}, "111", {{"a", "a", "b"}}), ValidationError);
    CHECK_THROWS_AS(make_instance({"a", "b", "c"}, "111", {{"a", "b"}}), ValidationError);
    CHECK_THROWS_AS(make_instance({"a", "b", "c"}, "111", {{"a", "b", "x"}}), ValidationError);
  }
  SECTION("sequence length mismatch") {
    CHECK_THROWS_AS(make_instance({"a", "b", "c"}, "11", {{"a", "b", "c"}}), ValidationError);
  }
  SECTION("agent index out of range") {
    CHECK_THROWS_AS(make_instance({"a", "b"}, "13", {{"a", "b"}, {"b", "a"}}), ValidationError);
    CHECK_THROWS_AS(make_instance({"a", "b"}, "10", {{"a", "b"}, {"b", "a"}}), ValidationError);
  }
  SECTION("utility reversing the ranking is inconsistent") {
    InstanceData data;
    data.items = {"o1", "o2"};
    data.sequence = {1, 1};
    data.agents = {{"1",
                    {"o1", "o2"},
                    std::map<std::string, Rational>{{"o1", Rational(1)}, {"o2", Rational(2)}}}};
    CHECK_THROWS_AS(validate_instance(data), ValidationError);
  }
  SECTION("non-positive utility") {
    InstanceData data;
    data.items = {"o1", "o2"};
    data.sequence = {1, 1};
    data.agents = {{"1",
                    {"o1", "o2"},
                    std::map<std::string, Rational>{{"o1", Rational(1)}, {"o2", Rational(0)}}}};
    CHECK_THROWS_AS(validate_instance(data), ValidationError);
  }
  SECTION("tied utilities are allowed") {
    InstanceData data;
    data.items = {"o1", "o2"};
    data.sequence = {1, 1};
    data.agents = {{"1",
                    {"o1", "o2"},
                    std::map<std::string, Rational>{{"o1", Rational(2)}, {"o2", Rational(2)}}}};
    const Instance inst = validate_instance(data);
    REQUIRE(inst.utilities[0].has_value());
    CHECK_FALSE(inst.utilities[0]->strictly_consistent());
  }
}

TEST_CASE("bundle_utility sums values") {
  const UtilityFunction u(abc(), {Rational(3), Rational(2), Rational(1)});
  CHECK(bundle_utility(u, {0, 2}) == Rational(4));
  CHECK(bundle_utility(u, {}) == Rational(0));
  CHECK_THROWS_AS(bundle_utility(u, {7}), ValidationError);
}

TEST_CASE("make_utility kinds") {
  SECTION("lexicographic values 2^(m-rank)") {
    const UtilityFunction u = make_utility(UtilityKind::lexicographic, abc());
    CHECK(u.value(0) == Rational(4));
    CHECK(u.value(1) == Rational(2));
    CHECK(u.value(2) == Rational(1));
    // every item beats all strictly worse items combined
    CHECK(bundle_utility(u, {1, 2}) == Rational(3));
    CHECK(bundle_utility(u, {1, 2}) < u.value(0));
  }
  SECTION("upward-lexicographic values 1 - 1/2^(m+1-rank)") {
    const UtilityFunction u = make_utility(UtilityKind::upward_lexicographic, abc());
    CHECK(u.value(0) == Rational(7, 8));
    CHECK(u.value(1) == Rational(3, 4));
    CHECK(u.value(2) == Rational(1, 2));
  }
  SECTION("borda values m+1-rank") {
    const UtilityFunction u = make_utility(UtilityKind::borda, Ranking{{0, 1}});
    CHECK(u.value(0) == Rational(2));
    CHECK(u.value(1) == Rational(1));
  }
  SECTION("explicit values validated") {
    CHECK_THROWS_AS(make_utility(UtilityKind::explicit_values, abc(),
                                 std::vector<Rational>{Rational(1), Rational(2), Rational(3)}),
                    ValidationError);
    CHECK_THROWS_AS(make_utility(UtilityKind::explicit_values, abc(),
                                 std::vector<Rational>{Rational(3), Rational(2), Rational(-1)}),
                    ValidationError);
    CHECK_THROWS_AS(make_utility(UtilityKind::lexicographic, abc(),
                                 std::vector<Rational>{Rational(3), Rational(2), Rational(1)}),
                    ValidationError);
  }
}

TEST_CASE("lexicographic bundle comparison") {
  const Ranking r = abcd();
  CHECK(compare_bundles_lex(r, {0, 3}, {1, 2}) == BundleOrder::first_better);
  CHECK(compare_bundles_lex(r, {0, 2}, {0, 2}) == BundleOrder::equal);
  CHECK(compare_bundles_lex(r, {1, 2}, {1, 3}) == BundleOrder::first_better);
  CHECK_THROWS_AS(compare_bundles_lex(r, {0}, {1, 2}), ValidationError);
}

TEST_CASE("upward-lexicographic bundle comparison") {
  const Ranking r = abcd();
  CHECK(compare_bundles_uplex(r, {0, 2}, {1, 2}) == BundleOrder::first_better);
  CHECK(compare_bundles_uplex(r, {0, 3}, {1, 2}) == BundleOrder::second_better);
  CHECK(compare_bundles_uplex(r, {1, 3}, {1, 3}) == BundleOrder::equal);
  CHECK_THROWS_AS(compare_bundles_uplex(r, {0}, {1, 2}), ValidationError);
}

TEST_CASE("ordinal comparisons agree with their numeric realizations") {
  testsupport::Rng rng(20240811);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> m_dist(2, 8);
    const int m = m_dist(rng);
    const Ranking r = testsupport::random_ranking(rng, m);
    std::uniform_int_distribution<int> size_dist(1, m);
    const int size = size_dist(rng);

    std::vector<int> pool(m);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    Bundle s(pool.begin(), pool.begin() + size);
    std::shuffle(pool.begin(), pool.end(), rng);
    Bundle t(pool.begin(), pool.begin() + size);
    s = make_bundle(std::move(s));
    t = make_bundle(std::move(t));

    const UtilityFunction lex = make_utility(UtilityKind::lexicographic, r);
    const UtilityFunction uplex = make_utility(UtilityKind::upward_lexicographic, r);

    const auto sign = [](const Rational& a, const Rational& b) {
      if (a > b) return BundleOrder::first_better;
      if (a < b) return BundleOrder::second_better;
      return BundleOrder::equal;
    };
    CHECK(compare_bundles_lex(r, s, t) == sign(bundle_utility(lex, s), bundle_utility(lex, t)));
    CHECK(compare_bundles_uplex(r, s, t) ==
          sign(bundle_utility(uplex, s), bundle_utility(uplex, t)));

    // lexicographic invariant: u(o) > sum of all strictly worse items
    Rational tail = 0;
    for (int pos = m - 1; pos >= 0; --pos) {
      CHECK(lex.value(r.order[pos]) > tail);
      tail += lex.value(r.order[pos]);
    }
  }
}

TEST_CASE("rational parse and format round-trip") {
  CHECK(to_string(parse_rational("3/4")) == "3/4");
  CHECK(to_string(parse_rational("8")) == "8");
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("-2/4")) == "-1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("x"), ValidationError);
  CHECK_THROWS_AS(parse_rational("/3"), ValidationError);
}
