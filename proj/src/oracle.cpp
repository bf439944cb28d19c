#include "dialx/oracle.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "dialx/error.hpp"
#include "dialx/parallel.hpp"

namespace dialx::oracle {

namespace {

struct ResolvedLiteral {
  PredicateId predicate;
  bool negated;
};

std::vector<std::vector<ResolvedLiteral>> resolve(const TemporalRule& rule,
                                                  const PredicateSet& predicates) {
  rule.check_shape();
  std::vector<std::vector<ResolvedLiteral>> out;
  for (const auto& bucket : rule.buckets) {
    auto& resolved = out.emplace_back();
    for (const auto& literal : bucket.literals()) {
      auto id = predicates.find(literal.predicate);
      if (!id || predicates[*id].kind != PredicateKind::Event) {
        throw Error(ErrorCode::UnknownPredicate, "unknown predicate " + literal.predicate);
      }
      resolved.push_back({*id, literal.negated});
    }
  }
  return out;
}

// truth[i][p]: event i satisfies predicate p, straight from PredicateSet::eval.
using Table = std::vector<std::vector<std::uint8_t>>;

Table truth_table(const DialogueTrace& trace, const PredicateSet& predicates) {
  Table table(trace.events.size(), std::vector<std::uint8_t>(predicates.size(), 0));
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    for (PredicateId p = 0; p < predicates.size(); ++p) {
      if (predicates[p].kind == PredicateKind::Event) {
        table[i][p] = predicates.eval(p, trace.events[i]) ? 1 : 0;
      }
    }
  }
  return table;
}

bool tuple_satisfies(const std::vector<std::size_t>& tuple,
                     const std::vector<std::vector<ResolvedLiteral>>& buckets,
                     const std::vector<Interval>& intervals, const DialogueTrace& trace,
                     const Table& table) {
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    for (const auto& literal : buckets[b]) {
      if ((table[tuple[b]][literal.predicate] != 0) == literal.negated) return false;
    }
  }
  for (std::size_t b = 0; b + 1 < buckets.size(); ++b) {
    // Differences of valid timestamps; use long double so extreme values cannot wrap.
    const long double gap = static_cast<long double>(trace.events[tuple[b + 1]].timestamp) -
                            static_cast<long double>(trace.events[tuple[b]].timestamp);
    if (gap < static_cast<long double>(intervals[b].lo) ||
        gap > static_cast<long double>(intervals[b].hi)) {
      return false;
    }
  }
  return true;
}

std::optional<Witness> enumerate(const std::vector<std::vector<ResolvedLiteral>>& buckets,
                                 const std::vector<Interval>& intervals,
                                 const DialogueTrace& trace, const Table& table) {
  const std::size_t n = trace.events.size();
  const std::size_t m = buckets.size();
  if (m > n) return std::nullopt;
  std::vector<std::size_t> tuple(m);
  for (std::size_t i = 0; i < m; ++i) tuple[i] = i;
  for (;;) {
    if (tuple_satisfies(tuple, buckets, intervals, trace, table)) return Witness{tuple};
    // Next combination in lexicographic order.
    std::size_t i = m;
    while (i > 0 && tuple[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) return std::nullopt;
    ++tuple[i - 1];
    for (std::size_t j = i; j < m; ++j) tuple[j] = tuple[j - 1] + 1;
  }
}

void check_match_size(const TemporalRule& rule, const DialogueTrace& trace) {
  if (trace.events.size() > kMaxMatchEvents || rule.buckets.size() > kMaxMatchBuckets) {
    throw Error(ErrorCode::InstanceTooLarge,
                "brute force matching is limited to " + std::to_string(kMaxMatchEvents) +
                    " events and " + std::to_string(kMaxMatchBuckets) + " buckets");
  }
}

}  // namespace

std::optional<Witness> brute_force_match(const TemporalRule& rule, const DialogueTrace& trace,
                                         const PredicateSet& predicates) {
  check_match_size(rule, trace);
  auto buckets = resolve(rule, predicates);
  return enumerate(buckets, rule.intervals, trace, truth_table(trace, predicates));
}

std::optional<MinedRule> exhaustive_mine(const Dataset& dataset, const PredicateSet& predicates,
                                         const MinerConfig& config, std::size_t max_literals) {
  config.validate();
  if (max_literals == 0 || max_literals > kMaxMineLiterals) {
    throw Error(ErrorCode::InstanceTooLarge, "exhaustive mining supports 1 or 2 literals");
  }
  if (predicates.size() > kMaxMinePredicates || dataset.traces.size() > kMaxMineTraces) {
    throw Error(ErrorCode::InstanceTooLarge,
                "exhaustive mining is limited to " + std::to_string(kMaxMinePredicates) +
                    " predicates and " + std::to_string(kMaxMineTraces) + " traces");
  }
  if (dataset.traces.empty()) throw Error(ErrorCode::InvalidConfig, "dataset is empty");
  auto effect = predicates.find(config.target_effect);
  if (!effect || predicates[*effect].kind != PredicateKind::Trace) {
    throw Error(ErrorCode::UnknownEffect, "effect " + config.target_effect + " is not an outcome predicate");
  }

  std::vector<Literal> literals;
  for (auto id : predicates.event_predicates()) {
    literals.push_back({predicates[id].name, false});
    literals.push_back({predicates[id].name, true});
  }
  std::vector<TemporalRule> rules;
  auto make = [&](std::vector<Bucket> buckets, std::vector<Interval> intervals) {
    TemporalRule rule;
    rule.buckets = std::move(buckets);
    rule.intervals = std::move(intervals);
    rule.effect = config.target_effect;
    rules.push_back(std::move(rule));
  };
  for (const auto& l : literals) make({Bucket({l})}, {});
  if (max_literals >= 2) {
    for (std::size_t a = 0; a < literals.size(); ++a) {
      for (std::size_t b = a + 1; b < literals.size(); ++b) {
        if (literals[a].predicate == literals[b].predicate) continue;
        make({Bucket({literals[a], literals[b]})}, {});
      }
    }
    for (std::size_t g = 1; g <= config.n; ++g) {
      const Interval iv{0, static_cast<std::int64_t>(g) * config.k};
      for (const auto& first : literals) {
        for (const auto& second : literals) make({Bucket({first}), Bucket({second})}, {iv});
      }
    }
  }

  std::vector<Table> tables;
  std::vector<std::uint8_t> effects;
  for (const auto& trace : dataset.traces) {
    check_match_size(TemporalRule{}, trace);
    tables.push_back(truth_table(trace, predicates));
    effects.push_back(predicates.eval(*effect, trace) ? 1 : 0);
  }

  std::vector<RuleMetrics> metrics(rules.size());
  parallel_for_each(rules.size(), [&](std::size_t r) {
    auto buckets = resolve(rules[r], predicates);
    RuleCounts counts;
    counts.dataset_size = dataset.traces.size();
    for (std::size_t t = 0; t < dataset.traces.size(); ++t) {
      const bool hit = enumerate(buckets, rules[r].intervals, dataset.traces[t], tables[t]).has_value();
      counts.effect_total += effects[t];
      counts.matched += hit;
      counts.matched_and_effect += hit && effects[t];
    }
    metrics[r] = RuleMetrics::from_counts(counts);
  });

  std::optional<MinedRule> best;
  std::string best_text;
  auto key = [](const RuleMetrics& m) {
    return std::make_tuple(m.correlation.value_or(0.0), m.confidence.value_or(0.0), m.support);
  };
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const auto& m = metrics[r];
    if (!m.confidence || *m.confidence < config.purity_threshold) continue;
    if (m.support < config.min_support) continue;
    auto text = render_rule(rules[r]);
    if (best) {
      if (key(m) < key(best->metrics)) continue;
      if (key(m) == key(best->metrics)) {
        const auto literals = rules[r].literal_count();
        const auto best_literals = best->rule.literal_count();
        if (literals > best_literals || (literals == best_literals && text >= best_text)) continue;
      }
    }
    best = MinedRule{rules[r], m};
    best_text = std::move(text);
  }
  return best;
}

}  // namespace dialx::oracle
