#include "dialx/matching.hpp"

#include <limits>

#include "dialx/error.hpp"
#include "dialx/parallel.hpp"

namespace dialx {

namespace {

Timestamp saturating_add(Timestamp t, std::int64_t d) {
  if (d > 0 && t > std::numeric_limits<Timestamp>::max() - d) {
    return std::numeric_limits<Timestamp>::max();
  }
  return t + d;
}

}  // namespace

CompiledRule compile_rule(const TemporalRule& rule, const PredicateSet& predicates) {
  rule.check_shape();
  CompiledRule compiled;
  compiled.intervals = rule.intervals;
  for (const auto& bucket : rule.buckets) {
    auto& out = compiled.buckets.emplace_back();
    for (const auto& literal : bucket.literals()) {
      auto id = predicates.find(literal.predicate);
      if (!id) {
        throw Error(ErrorCode::UnknownPredicate, "unknown predicate " + literal.predicate);
      }
      if (predicates[*id].kind != PredicateKind::Event) {
        throw Error(ErrorCode::UnknownPredicate,
                    "predicate " + literal.predicate + " is trace-level and cannot appear in a bucket");
      }
      out.push_back({*id, literal.negated});
    }
  }
  auto effect = predicates.find(rule.effect);
  if (!effect || predicates[*effect].kind != PredicateKind::Trace) {
    throw Error(ErrorCode::UnknownEffect, "effect " + rule.effect + " is not an outcome predicate");
  }
  compiled.effect = *effect;
  return compiled;
}

TraceTruth::TraceTruth(const DialogueTrace& trace, const PredicateSet& predicates)
    : width_(predicates.size()) {
  timestamps_.reserve(trace.events.size());
  cells_.assign(trace.events.size() * width_, 0);
  trace_cells_.assign(width_, 0);
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    timestamps_.push_back(trace.events[i].timestamp);
  }
  for (PredicateId p = 0; p < width_; ++p) {
    if (predicates[p].kind == PredicateKind::Trace) {
      trace_cells_[p] = predicates.eval(p, trace) ? 1 : 0;
      continue;
    }
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      cells_[i * width_ + p] = predicates.eval(p, trace.events[i]) ? 1 : 0;
    }
  }
}

DatasetTruth::DatasetTruth(const Dataset& dataset, const PredicateSet& predicates) {
  traces.reserve(dataset.traces.size());
  for (const auto& trace : dataset.traces) traces.emplace_back(trace, predicates);
}

BucketMasks bucket_masks(const CompiledRule& rule, const TraceTruth& trace) {
  BucketMasks masks(rule.buckets.size(), std::vector<std::uint8_t>(trace.event_count()));
  for (std::size_t b = 0; b < rule.buckets.size(); ++b) {
    for (std::size_t i = 0; i < trace.event_count(); ++i) {
      masks[b][i] = trace.satisfies(i, rule.buckets[b]) ? 1 : 0;
    }
  }
  return masks;
}

std::optional<Witness> find_witness(const BucketMasks& masks, std::span<const Interval> intervals,
                                    std::span<const Timestamp> timestamps) {
  const std::size_t n = timestamps.size();
  const std::size_t buckets = masks.size();
  if (buckets == 0 || n < buckets) return std::nullopt;

  // next[b][k]: smallest k' >= k such that a full suffix match starts with
  // bucket b at event k'; n when there is none.
  std::vector<std::vector<std::size_t>> next(buckets, std::vector<std::size_t>(n + 1, n));
  for (std::size_t b = buckets; b-- > 0;) {
    auto& nb = next[b];
    if (b + 1 == buckets) {
      for (std::size_t i = n; i-- > 0;) nb[i] = masks[b][i] ? i : nb[i + 1];
      continue;
    }
    const auto& following = next[b + 1];
    const Interval iv = intervals[b];
    // Window of successors (lo_idx, hi_idx) advances monotonically with i.
    std::vector<std::uint8_t> feasible(n, 0);
    std::size_t lo_idx = 0;
    std::size_t hi_idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Timestamp earliest = saturating_add(timestamps[i], iv.lo);
      const Timestamp latest = saturating_add(timestamps[i], iv.hi);
      if (lo_idx < i + 1) lo_idx = i + 1;
      while (lo_idx < n && timestamps[lo_idx] < earliest) ++lo_idx;
      if (hi_idx < lo_idx) hi_idx = lo_idx;
      while (hi_idx < n && timestamps[hi_idx] <= latest) ++hi_idx;
      feasible[i] = masks[b][i] && lo_idx < n && following[lo_idx] < hi_idx;
    }
    for (std::size_t i = n; i-- > 0;) nb[i] = feasible[i] ? i : nb[i + 1];
  }

  if (next[0][0] == n) return std::nullopt;
  Witness witness;
  witness.events.reserve(buckets);
  std::size_t current = next[0][0];
  witness.events.push_back(current);
  for (std::size_t b = 1; b < buckets; ++b) {
    const Interval iv = intervals[b - 1];
    const Timestamp earliest = saturating_add(timestamps[current], iv.lo);
    std::size_t k = current + 1;
    while (k < n && timestamps[k] < earliest) ++k;
    current = next[b][k];
    witness.events.push_back(current);
  }
  return witness;
}

std::optional<Witness> match_cause(const CompiledRule& rule, const TraceTruth& trace) {
  return find_witness(bucket_masks(rule, trace), rule.intervals, trace.timestamps());
}

std::optional<Witness> match_cause(const TemporalRule& rule, const DialogueTrace& trace,
                                   const PredicateSet& predicates) {
  auto compiled = compile_rule(rule, predicates);
  return match_cause(compiled, TraceTruth(trace, predicates));
}

RuleMetrics RuleMetrics::from_counts(const RuleCounts& counts) {
  RuleMetrics m;
  m.counts = counts;
  if (counts.dataset_size > 0) {
    m.support = static_cast<double>(counts.matched) / static_cast<double>(counts.dataset_size);
  }
  if (counts.effect_total > 0) {
    m.correlation = static_cast<double>(counts.matched_and_effect) /
                    static_cast<double>(counts.effect_total);
  }
  if (counts.matched > 0) {
    m.confidence =
        static_cast<double>(counts.matched_and_effect) / static_cast<double>(counts.matched);
  }
  return m;
}

RuleMetrics evaluate_rule_serial(const CompiledRule& rule, const DatasetTruth& truth) {
  RuleCounts counts;
  counts.dataset_size = truth.size();
  for (const auto& trace : truth.traces) {
    const bool effect = trace.effect(rule.effect);
    const bool matched = match_cause(rule, trace).has_value();
    counts.effect_total += effect;
    counts.matched += matched;
    counts.matched_and_effect += matched && effect;
  }
  return RuleMetrics::from_counts(counts);
}

RuleMetrics evaluate_rule(const CompiledRule& rule, const DatasetTruth& truth) {
  const auto n = static_cast<std::int64_t>(truth.size());
  std::size_t matched = 0;
  std::size_t matched_and_effect = 0;
  std::size_t effect_total = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : matched, matched_and_effect, effect_total)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& trace = truth.traces[static_cast<std::size_t>(i)];
    const bool effect = trace.effect(rule.effect);
    const bool hit = match_cause(rule, trace).has_value();
    effect_total += effect;
    matched += hit;
    matched_and_effect += hit && effect;
  }
  return RuleMetrics::from_counts({matched, matched_and_effect, effect_total, truth.size()});
}

RuleMetrics evaluate_rule(const TemporalRule& rule, const Dataset& dataset,
                          const PredicateSet& predicates) {
  if (dataset.traces.empty()) throw Error(ErrorCode::InvalidConfig, "dataset is empty");
  auto compiled = compile_rule(rule, predicates);
  return evaluate_rule(compiled, DatasetTruth(dataset, predicates));
}

std::vector<std::size_t> matched_traces_serial(const CompiledRule& rule, const DatasetTruth& truth) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (match_cause(rule, truth.traces[i])) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> matched_traces(const CompiledRule& rule, const DatasetTruth& truth) {
  std::vector<std::uint8_t> hit(truth.size(), 0);
  const auto n = static_cast<std::int64_t>(truth.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    hit[static_cast<std::size_t>(i)] = match_cause(rule, truth.traces[static_cast<std::size_t>(i)]) ? 1 : 0;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(i);
  }
  return out;
}

}  // namespace dialx
