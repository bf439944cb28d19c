#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dialx/predicates.hpp"
#include "dialx/rule.hpp"
#include "dialx/trace.hpp"

namespace dialx {

// Strictly increasing event indices, one per bucket in temporal order.
struct Witness {
  std::vector<std::size_t> events;

  bool operator==(const Witness&) const = default;
};

struct CompiledLiteral {
  PredicateId predicate;
  bool negated;
};

struct CompiledRule {
  std::vector<std::vector<CompiledLiteral>> buckets;
  std::vector<Interval> intervals;
  PredicateId effect;
};

// Resolves predicate names. Throws UnknownPredicate for a literal that does
// not name an event-level predicate and UnknownEffect for an effect that is
// not a trace-level predicate.
CompiledRule compile_rule(const TemporalRule& rule, const PredicateSet& predicates);

// Precomputed truth values of every predicate for one trace.
class TraceTruth {
 public:
  TraceTruth(const DialogueTrace& trace, const PredicateSet& predicates);

  std::size_t event_count() const { return timestamps_.size(); }
  std::size_t predicate_count() const { return width_; }
  std::span<const Timestamp> timestamps() const { return timestamps_; }

  bool holds(std::size_t event, PredicateId predicate) const {
    return cells_[event * width_ + predicate] != 0;
  }
  // Trace-level predicate value (the outcome bins).
  bool effect(PredicateId predicate) const { return trace_cells_[predicate] != 0; }

  bool satisfies(std::size_t event, std::span<const CompiledLiteral> bucket) const {
    for (const auto& literal : bucket) {
      if (holds(event, literal.predicate) == literal.negated) return false;
    }
    return true;
  }

 private:
  std::vector<Timestamp> timestamps_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::uint8_t> trace_cells_;
  std::size_t width_ = 0;
};

struct DatasetTruth {
  std::vector<TraceTruth> traces;

  DatasetTruth(const Dataset& dataset, const PredicateSet& predicates);
  std::size_t size() const { return traces.size(); }
};

// Per-event bucket satisfaction: mask[b][i] != 0 iff event i satisfies bucket b.
using BucketMasks = std::vector<std::vector<std::uint8_t>>;

BucketMasks bucket_masks(const CompiledRule& rule, const TraceTruth& trace);

// Lexicographically earliest witness, or nullopt. Runs in
// O(events x buckets) via backward feasibility over (bucket, event) pairs.
std::optional<Witness> find_witness(const BucketMasks& masks, std::span<const Interval> intervals,
                                    std::span<const Timestamp> timestamps);

std::optional<Witness> match_cause(const CompiledRule& rule, const TraceTruth& trace);
std::optional<Witness> match_cause(const TemporalRule& rule, const DialogueTrace& trace,
                                   const PredicateSet& predicates);

struct RuleCounts {
  std::size_t matched = 0;
  std::size_t matched_and_effect = 0;
  std::size_t effect_total = 0;
  std::size_t dataset_size = 0;

  bool operator==(const RuleCounts&) const = default;
};

struct RuleMetrics {
  RuleCounts counts;
  double support = 0.0;
  std::optional<double> correlation;  // undefined when the effect is never observed
  std::optional<double> confidence;   // undefined when nothing matches

  static RuleMetrics from_counts(const RuleCounts& counts);

  bool operator==(const RuleMetrics&) const = default;
};

// Dataset-level metrics with per-trace counting. The parallel versions split
// traces across OpenMP threads and reduce integer counts, so results equal
// the serial reference exactly.
RuleMetrics evaluate_rule(const TemporalRule& rule, const Dataset& dataset,
                          const PredicateSet& predicates);
RuleMetrics evaluate_rule(const CompiledRule& rule, const DatasetTruth& truth);
RuleMetrics evaluate_rule_serial(const CompiledRule& rule, const DatasetTruth& truth);

// Indices of the traces whose events contain a witness, ascending.
std::vector<std::size_t> matched_traces(const CompiledRule& rule, const DatasetTruth& truth);
std::vector<std::size_t> matched_traces_serial(const CompiledRule& rule, const DatasetTruth& truth);

}  // namespace dialx
