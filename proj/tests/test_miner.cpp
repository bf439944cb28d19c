#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dialx/miner.hpp"
#include "dialx/oracle.hpp"
#include "dialx/synthetic.hpp"
#include "helpers.hpp"

using namespace dialx;
using testing::error_code;
using testing::full_event;

namespace {

const PredicateSet& preds() {
  static const PredicateSet set = compile_predicates(default_predicate_config(), testing::full_schema());
  return set;
}

Bucket lit(const char* name, bool negated = false) { return Bucket({{name, negated}}); }

TemporalRule rule(std::vector<Bucket> buckets, std::vector<Interval> intervals) {
  TemporalRule r;
  r.buckets = std::move(buckets);
  r.intervals = std::move(intervals);
  r.effect = "SENTIMENT_HIGH";
  return r;
}

double entropy_oracle(double p, double n) {
  double total = p + n;
  double h = 0;
  for (double x : {p, n}) {
    if (x > 0) h -= x / total * std::log2(x / total);
  }
  return h;
}

// Positive traces contain one cat_office = 2 event; negatives only lower office values.
Dataset separable(std::uint64_t seed, std::size_t traces) {
  synthetic::Rng rng(seed);
  auto schema = testing::full_schema();
  std::vector<DialogueTrace> out;
  for (std::size_t i = 0; i < traces; ++i) {
    std::vector<Event> events;
    const bool positive = i % 2 == 0;
    for (int e = 0; e < 6; ++e) {
      auto ev = synthetic::random_event(rng, schema, e * 100);
      ev.attributes["cat_office"] = (e % 3) * 0.5;
      events.push_back(ev);
    }
    if (positive) events[3].attributes["cat_office"] = 2.0;
    out.push_back(validate_trace(events, "t" + std::to_string(i),
                                 positive ? Outcome::Positive : Outcome::Negative));
  }
  return make_dataset(out, schema);
}

void check_template_laws(const std::vector<MinedRule>& rules, const MinerConfig& config,
                         const Dataset& ds) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& mined = rules[i];
    const auto& r = mined.rule;
    CHECK(r.literal_count() <= config.max_depth);
    CHECK(r.literal_count() >= 1);
    CHECK(r.buckets.size() <= config.n + 1);
    std::int64_t span = 0;
    for (const auto& iv : r.intervals) {
      CHECK(iv.lo == 0);
      CHECK(iv.hi > 0);
      CHECK(iv.hi % config.k == 0);
      span += iv.hi;
    }
    CHECK(span <= static_cast<std::int64_t>(config.n) * config.k);
    CHECK(mined.metrics == evaluate_rule(r, ds, preds()));
    REQUIRE(mined.metrics.confidence.has_value());
    CHECK(*mined.metrics.confidence >= config.purity_threshold);
    CHECK(mined.metrics.support >= config.min_support);
    if (i > 0) CHECK(*rules[i - 1].metrics.correlation >= *mined.metrics.correlation);
  }
}

}  // namespace

TEST_CASE("merging one empty bucket sums its two intervals") {
  auto merged = merge_empty_buckets(
      rule({lit("OFFICE_HIGH"), Bucket{}, lit("FAMILY_HIGH")}, {{0, 10000}, {0, 10000}}));
  CHECK(merged == rule({lit("OFFICE_HIGH"), lit("FAMILY_HIGH")}, {{0, 20000}}));
}

TEST_CASE("merging two empty buckets") {
  auto merged = merge_empty_buckets(rule({lit("OFFICE_HIGH"), Bucket{}, Bucket{}, lit("FAMILY_HIGH")},
                                         {{0, 10000}, {0, 10000}, {0, 10000}}));
  CHECK(merged == rule({lit("OFFICE_HIGH"), lit("FAMILY_HIGH")}, {{0, 30000}}));
}

TEST_CASE("merge leaves full rules alone and is idempotent") {
  auto full = rule({lit("OFFICE_HIGH"), lit("FAMILY_HIGH")}, {{0, 10000}});
  CHECK(merge_empty_buckets(full) == full);
  auto edges = rule({Bucket{}, lit("OFFICE_HIGH"), Bucket{}, lit("FAMILY_HIGH"), Bucket{}},
                    {{0, 1}, {2, 3}, {4, 5}, {6, 7}});
  auto once = merge_empty_buckets(edges);
  CHECK(once == rule({lit("OFFICE_HIGH"), lit("FAMILY_HIGH")}, {{6, 8}}));
  CHECK(merge_empty_buckets(once) == once);
  CHECK(merge_empty_buckets(rule({Bucket{}, Bucket{}}, {{0, 5}})) == rule({Bucket{}}, {}));
}

TEST_CASE("a merged rule matches every trace its template matches") {
  synthetic::Rng rng(41);
  auto ds = synthetic::random_dataset(rng, 40, {1, 12, 15});
  DatasetTruth truth(ds, preds());
  for (int i = 0; i < 150; ++i) {
    auto r = synthetic::random_rule(rng, preds(), {4, 2, 20, 0.4});
    auto original = matched_traces(compile_rule(r, preds()), truth);
    auto merged = matched_traces(compile_rule(merge_empty_buckets(r), preds()), truth);
    CHECK(std::includes(merged.begin(), merged.end(), original.begin(), original.end()));
  }
}

TEST_CASE("entropy and information gain") {
  CHECK(binary_entropy(0, 0) == 0.0);
  CHECK(binary_entropy(4, 4) == 0.0);
  CHECK(binary_entropy(2, 4) == doctest::Approx(1.0));
  CHECK(binary_entropy(1, 4) == doctest::Approx(entropy_oracle(1, 3)));
  // Pure halves recover the whole parent entropy; a no-op split gains nothing.
  CHECK(information_gain(4, 8, 4, 4) == doctest::Approx(1.0));
  CHECK(information_gain(3, 8, 3, 8) == doctest::Approx(0.0));
  // 8 traces, 5 positive; the split keeps 4 traces of which 3 are positive.
  double expected = entropy_oracle(5, 3) - 0.5 * entropy_oracle(3, 1) - 0.5 * entropy_oracle(2, 2);
  CHECK(information_gain(5, 8, 3, 4) == doctest::Approx(expected));
}

TEST_CASE("split_gain on an eight-trace toy dataset") {
  // Traces 0-3 carry an office event; outcomes: office traces 3 of 4 positive,
  // the rest 2 of 4 positive.
  std::vector<DialogueTrace> traces;
  const bool positive[8] = {true, true, true, false, true, true, false, false};
  for (int i = 0; i < 8; ++i) {
    auto e = full_event(10, {{"cat_office", i < 4 ? 2.0 : 0.0}});
    traces.push_back(validate_trace({e}, "t" + std::to_string(i),
                                    positive[i] ? Outcome::Positive : Outcome::Negative));
  }
  auto ds = make_dataset(traces, testing::full_schema());
  DatasetTruth truth(ds, preds());
  MinerConfig config;
  TreeNode root;
  root.slots.assign(config.n + 1, Bucket{});
  for (std::size_t i = 0; i < 8; ++i) root.members.push_back(i);
  SplitCandidate office{static_cast<std::int64_t>(config.n), {"OFFICE_HIGH", false}};
  double expected = entropy_oracle(5, 3) - 0.5 * entropy_oracle(3, 1) - 0.5 * entropy_oracle(2, 2);
  CHECK(split_gain(root, office, truth, preds(), config) == doctest::Approx(expected));
  SplitCandidate everything{static_cast<std::int64_t>(config.n), {"OFFICE_LOW", true}};
  CHECK(split_gain(root, everything, truth, preds(), config) == doctest::Approx(0.0));
}

TEST_CASE("split_gain of a perfect separator is the parent entropy") {
  auto ds = separable(3, 10);
  DatasetTruth truth(ds, preds());
  MinerConfig config;
  TreeNode root;
  root.slots.assign(config.n + 1, Bucket{});
  for (std::size_t i = 0; i < 10; ++i) root.members.push_back(i);
  SplitCandidate c{3, {"OFFICE_HIGH", false}};
  CHECK(split_gain(root, c, truth, preds(), config) == doctest::Approx(1.0));
}

TEST_CASE("candidate order: bucket index, then name, then polarity") {
  MinerConfig config;
  TreeNode root;
  root.slots.assign(config.n + 1, Bucket{});
  auto cands = enumerate_candidates(root, config, {"A", "B"});
  REQUIRE(cands.size() == 4);
  CHECK(cands[0] == SplitCandidate{3, {"A", false}});
  CHECK(cands[1] == SplitCandidate{3, {"A", true}});
  CHECK(cands[2] == SplitCandidate{3, {"B", false}});

  auto node = apply_candidate(root, cands[0], config);
  cands = enumerate_candidates(node, config, {"A", "B"});
  // Slot 3 holds A already; new buckets: slots 0-2 before it, 4-6 after it.
  // A new bucket after A takes index 0 as well, so name order decides first.
  CHECK(cands[0] == SplitCandidate{4, {"A", false}});
  CHECK(cands[1] == SplitCandidate{5, {"A", false}});
  CHECK(cands[6] == SplitCandidate{3, {"B", false}});
  std::set<std::int64_t> slots;
  for (const auto& c : cands) slots.insert(c.slot);
  CHECK(slots == std::set<std::int64_t>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("apply_candidate keeps the layout right aligned") {
  MinerConfig config;
  TreeNode root;
  root.slots.assign(4, Bucket{});
  auto a = apply_candidate(root, {3, {"A", false}}, config);
  auto ab = apply_candidate(a, {5, {"B", false}}, config);
  CHECK(ab.slots[1] == lit("A"));
  CHECK(ab.slots[3] == lit("B"));
  CHECK(render_rule(node_rule(ab, config)) == "A ##[0:20000] B |-> SENTIMENT_HIGH");
  auto ba = apply_candidate(a, {0, {"B", false}}, config);
  CHECK(render_rule(node_rule(ba, config)) == "B ##[0:30000] A |-> SENTIMENT_HIGH");
}

TEST_CASE("refine_intervals tightens to the smallest preserving multiple") {
  auto make = [](Timestamp gap, const char* id) {
    return validate_trace({full_event(0, {{"cat_office", 2}}), full_event(gap, {{"cat_family", 2}})},
                          id, Outcome::Positive);
  };
  auto ds = make_dataset({make(9000, "a"), make(4000, "b")}, testing::full_schema());
  auto r = rule({lit("OFFICE_HIGH"), lit("FAMILY_HIGH")}, {{0, 10000}});
  CHECK(refine_intervals(r, ds, preds(), 10000) == r);

  auto wide = rule({lit("OFFICE_HIGH"), lit("FAMILY_HIGH")}, {{0, 30000}});
  auto ds2 = make_dataset({make(15000, "a"), make(4000, "b")}, testing::full_schema());
  auto refined = refine_intervals(wide, ds2, preds(), 10000);
  CHECK(refined.intervals == std::vector<Interval>{{0, 20000}});
  DatasetTruth truth(ds2, preds());
  CHECK(matched_traces(compile_rule(refined, preds()), truth) ==
        matched_traces(compile_rule(wide, preds()), truth));

  auto nothing = rule({lit("AGGRESSION_HIGH")}, {});
  CHECK(error_code([&] { refine_intervals(nothing, ds2, preds(), 10000); }) == ErrorCode::NoSupport);
}

TEST_CASE("refine_intervals never changes the matched set") {
  synthetic::Rng rng(43);
  auto ds = synthetic::random_dataset(rng, 40, {1, 12, 15});
  DatasetTruth truth(ds, preds());
  for (int i = 0; i < 150; ++i) {
    auto r = synthetic::random_rule(rng, preds(), {3, 1, 0, 0.3});
    for (auto& iv : r.intervals) iv = {0, 30};
    auto before = matched_traces(compile_rule(r, preds()), truth);
    if (before.empty()) continue;
    auto refined = refine_intervals(r, truth, preds(), 10);
    CHECK(matched_traces(compile_rule(refined, preds()), truth) == before);
    for (const auto& iv : refined.intervals) CHECK(iv.hi % 10 == 0);
  }
}

TEST_CASE("mine finds a perfect separator") {
  auto ds = separable(5, 20);
  MinerConfig config;
  config.target_effect = "SENTIMENT_HIGH";
  auto rules = mine(ds, config, preds());
  REQUIRE_FALSE(rules.empty());
  CHECK(render_rule(rules.front().rule) == "OFFICE_HIGH |-> SENTIMENT_HIGH");
  CHECK(rules.front().metrics.correlation == 1.0);
}

TEST_CASE("mine rejects bad targets and configs") {
  auto ds = separable(5, 6);
  MinerConfig config;
  config.target_effect = "OFFICE_HIGH";
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::UnknownEffect);
  config.target_effect = "NOPE";
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::UnknownEffect);
  for (auto& t : ds.traces) t.outcome = Outcome::Negative;
  config.target_effect = "SENTIMENT_HIGH";
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::NoEffectObserved);
  config = MinerConfig{};
  config.k = 0;
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::InvalidConfig);
  config = MinerConfig{};
  config.purity_threshold = 0.5;
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::InvalidConfig);
  config = MinerConfig{};
  config.max_depth = 0;
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::InvalidConfig);
  config = MinerConfig{};
  config.min_support = 1.5;
  CHECK(error_code([&] { mine(ds, config, preds()); }) == ErrorCode::InvalidConfig);
  CHECK(error_code([&] { mine(Dataset{}, MinerConfig{}, preds()); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("mined rules obey the template laws") {
  synthetic::Rng rng(47);
  for (int run = 0; run < 25; ++run) {
    auto ds = synthetic::random_dataset(rng, 24, {2, 10, 12});
    MinerConfig config;
    config.n = static_cast<std::size_t>(run % 4);
    config.k = 5 + run % 3 * 5;
    config.max_depth = 1 + static_cast<std::size_t>(run % 6);
    config.target_effect = run % 2 ? "SENTIMENT_HIGH" : "SENTIMENT_LOW";
    config.min_support = 0.05;
    auto rules = mine(ds, config, preds());
    check_template_laws(rules, config, ds);
  }
}

TEST_CASE("mining is deterministic and schedule independent") {
  synthetic::Rng rng(53);
  auto ds = synthetic::random_dataset(rng, 30, {2, 10, 12});
  MinerConfig config;
  config.k = 10;
  config.target_effect = "SENTIMENT_LOW";
  auto first = mine(ds, config, preds());
  auto second = mine(ds, config, preds());
  config.parallel = false;
  auto serial = mine(ds, config, preds());
  REQUIRE(first.size() == second.size());
  REQUIRE(first.size() == serial.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].rule == second[i].rule);
    CHECK(first[i].metrics == second[i].metrics);
    CHECK(first[i].rule == serial[i].rule);
    CHECK(first[i].metrics == serial[i].metrics);
  }
}
