#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dialx/matching.hpp"
#include "dialx/predicates.hpp"
#include "dialx/rule.hpp"
#include "dialx/trace.hpp"

namespace dialx {

enum class TieBreak {
  // Lower bucket index (counted back from the effect) first, then predicate
  // name, then plain before negated literals.
  BucketLiteralPolarity,
};

struct MinerConfig {
  std::size_t n = 3;        // intervals in the template; buckets = n + 1
  std::int64_t k = 10000;   // seconds per template interval
  std::size_t max_depth = 10;
  std::string target_effect = "SENTIMENT_HIGH";
  double min_support = 0.1;
  double purity_threshold = 0.6;
  TieBreak tie_break = TieBreak::BucketLiteralPolarity;
  bool parallel = true;

  // Throws InvalidConfig.
  void validate() const;
};

struct MinedRule {
  TemporalRule rule;
  RuleMetrics metrics;
};

// A node of the search tree: a literal assignment to the n + 1 template slots
// (slot 0 earliest, occupied slots right-aligned so the last one is slot n)
// and the traces its rule matches.
struct TreeNode {
  std::vector<Bucket> slots;
  std::vector<std::size_t> members;

  std::size_t depth() const;
};

// Adds `literal` at template slot `slot` of a node. Slots past n append a new
// bucket after the last occupied one; the layout is re-aligned afterwards.
struct SplitCandidate {
  std::int64_t slot = 0;
  Literal literal;

  bool operator==(const SplitCandidate&) const = default;
};

// Full n + 1 bucket template with [0:k] between adjacent slots.
TemporalRule template_rule(const std::vector<Bucket>& slots, std::int64_t k,
                           const std::string& effect);

// Drops empty buckets. An interior empty bucket merges its two neighbouring
// intervals into their sum; leading and trailing ones drop their single
// interval. A rule with no literals becomes the single bucket `true`.
TemporalRule merge_empty_buckets(const TemporalRule& rule);

// The rule a node stands for during search: its template with empty buckets merged.
TemporalRule node_rule(const TreeNode& node, const MinerConfig& config);

// Candidates at a node in tie-break order; `event_predicates` are the literal
// predicates to consider.
std::vector<SplitCandidate> enumerate_candidates(const TreeNode& node, const MinerConfig& config,
                                                 const std::vector<std::string>& event_predicates);

TreeNode apply_candidate(const TreeNode& node, const SplitCandidate& candidate,
                         const MinerConfig& config);

// Shannon entropy (bits) of a binary label with `positives` out of `total`.
double binary_entropy(std::size_t positives, std::size_t total);

// Information gain of the effect label between node members that the
// candidate rule still matches and those it no longer matches.
double information_gain(std::size_t parent_positives, std::size_t parent_total,
                        std::size_t matched_positives, std::size_t matched_total);

double split_gain(const TreeNode& node, const SplitCandidate& candidate, const DatasetTruth& truth,
                  const PredicateSet& predicates, const MinerConfig& config);

// Tightens every interval's upper bound to the smallest positive multiple of
// k (below the current bound) that keeps the matched-trace set unchanged.
// Throws NoSupport when the rule matches nothing.
TemporalRule refine_intervals(const TemporalRule& rule, const DatasetTruth& truth,
                              const PredicateSet& predicates, std::int64_t k);
TemporalRule refine_intervals(const TemporalRule& rule, const Dataset& dataset,
                              const PredicateSet& predicates, std::int64_t k);

// Greedy tree search for rules implying `config.target_effect`. Rules are
// sorted by descending correlation, confidence and support, then by
// ascending literal count and text.
// Throws UnknownEffect, NoEffectObserved or InvalidConfig.
std::vector<MinedRule> mine(const Dataset& dataset, const MinerConfig& config,
                            const PredicateSet& predicates);

}  // namespace dialx
