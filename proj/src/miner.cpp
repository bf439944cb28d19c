#include "dialx/miner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "dialx/error.hpp"

namespace dialx {

namespace {

constexpr double kMinGain = 1e-12;

std::vector<std::int64_t> occupied_slots(const std::vector<Bucket>& slots) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].empty()) out.push_back(static_cast<std::int64_t>(i));
  }
  return out;
}

// Per-node cache: masks[m][o] is the satisfaction mask of occupied slot o on
// the events of member m.
struct NodeState {
  std::vector<std::int64_t> occupied;
  std::vector<std::vector<std::vector<std::uint8_t>>> masks;
  std::size_t positives = 0;
};

PredicateId resolve_event_predicate(const PredicateSet& predicates, const std::string& name) {
  auto id = predicates.find(name);
  if (!id || predicates[*id].kind != PredicateKind::Event) {
    throw Error(ErrorCode::UnknownPredicate, "unknown predicate " + name);
  }
  return *id;
}

std::vector<std::uint8_t> literal_mask(const TraceTruth& trace, PredicateId predicate, bool negated) {
  std::vector<std::uint8_t> mask(trace.event_count());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = trace.holds(i, predicate) != negated ? 1 : 0;
  }
  return mask;
}

NodeState prepare(const TreeNode& node, const DatasetTruth& truth, const PredicateSet& predicates,
                  PredicateId effect) {
  NodeState state;
  state.occupied = occupied_slots(node.slots);
  state.masks.resize(node.members.size());
  for (std::size_t m = 0; m < node.members.size(); ++m) {
    const auto& trace = truth.traces[node.members[m]];
    state.positives += trace.effect(effect);
    for (auto slot : state.occupied) {
      std::vector<std::uint8_t> mask(trace.event_count(), 1);
      for (const auto& literal : node.slots[static_cast<std::size_t>(slot)].literals()) {
        auto id = resolve_event_predicate(predicates, literal.predicate);
        for (std::size_t i = 0; i < mask.size(); ++i) {
          if (trace.holds(i, id) == literal.negated) mask[i] = 0;
        }
      }
      state.masks[m].push_back(std::move(mask));
    }
  }
  return state;
}

// Match flags (one per member) for the node rule extended by `candidate`.
std::vector<std::uint8_t> candidate_matches(const TreeNode& node, const NodeState& state,
                                            const SplitCandidate& candidate, PredicateId predicate,
                                            const DatasetTruth& truth, std::int64_t k) {
  std::vector<std::int64_t> positions = state.occupied;
  auto at = std::lower_bound(positions.begin(), positions.end(), candidate.slot);
  const bool existing = at != positions.end() && *at == candidate.slot;
  const auto target = static_cast<std::size_t>(at - positions.begin());
  if (!existing) positions.insert(at, candidate.slot);

  std::vector<Interval> intervals;
  for (std::size_t i = 1; i < positions.size(); ++i) {
    intervals.push_back({0, (positions[i] - positions[i - 1]) * k});
  }

  std::vector<std::uint8_t> matched(node.members.size(), 0);
  BucketMasks masks;
  for (std::size_t m = 0; m < node.members.size(); ++m) {
    const auto& trace = truth.traces[node.members[m]];
    auto column = literal_mask(trace, predicate, candidate.literal.negated);
    masks = state.masks[m];
    if (existing) {
      for (std::size_t i = 0; i < column.size(); ++i) masks[target][i] &= column[i];
    } else {
      masks.insert(masks.begin() + static_cast<std::ptrdiff_t>(target), std::move(column));
    }
    matched[m] = find_witness(masks, intervals, trace.timestamps()).has_value() ? 1 : 0;
  }
  return matched;
}

struct Scored {
  double gain = 0.0;
  std::vector<std::uint8_t> matched;
};

Scored score_candidate(const TreeNode& node, const NodeState& state, const SplitCandidate& candidate,
                       const DatasetTruth& truth, const PredicateSet& predicates,
                       const MinerConfig& config, PredicateId effect) {
  Scored s;
  auto predicate = resolve_event_predicate(predicates, candidate.literal.predicate);
  s.matched = candidate_matches(node, state, candidate, predicate, truth, config.k);
  std::size_t matched_total = 0;
  std::size_t matched_positives = 0;
  for (std::size_t m = 0; m < node.members.size(); ++m) {
    if (!s.matched[m]) continue;
    ++matched_total;
    matched_positives += truth.traces[node.members[m]].effect(effect);
  }
  s.gain = information_gain(state.positives, node.members.size(), matched_positives, matched_total);
  return s;
}

std::vector<std::size_t> select_members(const TreeNode& node, const std::vector<std::uint8_t>& flags) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < node.members.size(); ++m) {
    if (flags[m]) out.push_back(node.members[m]);
  }
  return out;
}

class TreeSearch {
 public:
  TreeSearch(const DatasetTruth& truth, const PredicateSet& predicates, const MinerConfig& config,
             PredicateId effect)
      : truth_(truth), predicates_(predicates), config_(config), effect_(effect) {
    for (auto id : predicates.event_predicates()) literal_names_.push_back(predicates[id].name);
  }

  void grow(const TreeNode& node) {
    const auto depth = node.depth();
    const auto total = node.members.size();
    std::size_t positives = 0;
    for (auto m : node.members) positives += truth_.traces[m].effect(effect_);
    const double support = static_cast<double>(total) / static_cast<double>(truth_.size());
    const double confidence =
        total ? static_cast<double>(positives) / static_cast<double>(total) : 0.0;

    const bool pure = depth >= 1 && confidence >= config_.purity_threshold;
    // Children match subsets of this node's traces, so neither support nor
    // effect coverage can recover below here.
    const bool hopeless = positives == 0 || support < config_.min_support;
    if (pure || hopeless || depth >= config_.max_depth) {
      leaf(node, support, confidence);
      return;
    }

    const auto state = prepare(node, truth_, predicates_, effect_);
    const auto candidates = enumerate_candidates(node, config_, literal_names_);
    std::vector<Scored> scores(candidates.size());
    auto score = [&](std::size_t c) {
      scores[c] = score_candidate(node, state, candidates[c], truth_, predicates_, config_, effect_);
    };
    if (config_.parallel) {
      const auto count = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 4)
      for (std::int64_t c = 0; c < count; ++c) score(static_cast<std::size_t>(c));
    } else {
      for (std::size_t c = 0; c < candidates.size(); ++c) score(c);
    }

    // First candidate in tie-break order wins among equal gains.
    std::size_t best = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (best == candidates.size() || scores[c].gain > scores[best].gain) best = c;
    }
    if (best == candidates.size() || scores[best].gain <= kMinGain) {
      leaf(node, support, confidence);
      return;
    }

    const auto& chosen = candidates[best];
    TreeNode present = apply_candidate(node, chosen, config_);
    present.members = select_members(node, scores[best].matched);

    SplitCandidate negation{chosen.slot, {chosen.literal.predicate, !chosen.literal.negated}};
    auto predicate = resolve_event_predicate(predicates_, negation.literal.predicate);
    TreeNode absent = apply_candidate(node, negation, config_);
    absent.members =
        select_members(node, candidate_matches(node, state, negation, predicate, truth_, config_.k));

    grow(present);
    grow(absent);
  }

  std::vector<MinedRule> take_rules() { return std::move(rules_); }

 private:
  void leaf(const TreeNode& node, double support, double confidence) {
    if (node.depth() == 0 || node.members.empty()) return;
    if (confidence < config_.purity_threshold || support < config_.min_support) return;
    auto rule = refine_intervals(node_rule(node, config_), truth_, predicates_, config_.k);
    auto text = render_rule(rule);
    if (!seen_.insert(text).second) return;
    auto compiled = compile_rule(rule, predicates_);
    auto metrics = config_.parallel ? evaluate_rule(compiled, truth_)
                                    : evaluate_rule_serial(compiled, truth_);
    rules_.push_back(MinedRule{std::move(rule), metrics});
  }

  const DatasetTruth& truth_;
  const PredicateSet& predicates_;
  const MinerConfig& config_;
  PredicateId effect_;
  std::vector<std::string> literal_names_;
  std::set<std::string> seen_;
  std::vector<MinedRule> rules_;
};

}  // namespace

void MinerConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (k <= 0) fail("k must be positive");
  if (max_depth < 1) fail("max depth must be at least 1");
  if (!(min_support >= 0.0 && min_support <= 1.0)) fail("min support must lie in [0, 1]");
  if (!(purity_threshold > 0.5 && purity_threshold <= 1.0)) {
    fail("purity threshold must lie in (0.5, 1]");
  }
  if (n > 1000) fail("n is unreasonably large");
  if (static_cast<double>(n) * static_cast<double>(k) > 9.0e18) fail("n * k overflows");
  if (target_effect.empty()) fail("target effect is empty");
}

std::size_t TreeNode::depth() const {
  std::size_t d = 0;
  for (const auto& b : slots) d += b.size();
  return d;
}

TemporalRule template_rule(const std::vector<Bucket>& slots, std::int64_t k,
                           const std::string& effect) {
  TemporalRule rule;
  rule.buckets = slots;
  rule.intervals.assign(slots.empty() ? 0 : slots.size() - 1, Interval{0, k});
  rule.effect = effect;
  return rule;
}

TemporalRule merge_empty_buckets(const TemporalRule& rule) {
  TemporalRule out;
  out.buckets.clear();
  out.effect = rule.effect;
  Interval pending{0, 0};
  for (std::size_t i = 0; i < rule.buckets.size(); ++i) {
    if (!rule.buckets[i].empty()) {
      if (!out.buckets.empty()) out.intervals.push_back(pending);
      out.buckets.push_back(rule.buckets[i]);
      pending = {0, 0};
    }
    if (i < rule.intervals.size()) {
      pending.lo += rule.intervals[i].lo;
      pending.hi += rule.intervals[i].hi;
    }
  }
  if (out.buckets.empty()) out.buckets.emplace_back();
  return out;
}

TemporalRule node_rule(const TreeNode& node, const MinerConfig& config) {
  return merge_empty_buckets(template_rule(node.slots, config.k, config.target_effect));
}

std::vector<SplitCandidate> enumerate_candidates(const TreeNode& node, const MinerConfig& config,
                                                 const std::vector<std::string>& event_predicates) {
  const auto n = static_cast<std::int64_t>(config.n);
  const auto occupied = occupied_slots(node.slots);
  std::vector<std::int64_t> positions;
  if (occupied.empty()) {
    positions.push_back(n);
  } else {
    // Any slot keeping the occupied span within n intervals; slots past n
    // open a new bucket after the current last one.
    for (auto p = occupied.back() - n; p <= occupied.front() + n; ++p) {
      if (p >= 0) positions.push_back(p);
    }
  }

  struct Keyed {
    std::tuple<std::int64_t, std::string_view, bool, bool, std::int64_t> key;
    SplitCandidate candidate;
  };
  std::vector<Keyed> keyed;
  for (auto p : positions) {
    const bool inside = p <= n;
    const Bucket* bucket = inside ? &node.slots[static_cast<std::size_t>(p)] : nullptr;
    const bool existing = bucket && !bucket->empty();
    const std::int64_t index = inside ? n - p : 0;
    for (const auto& name : event_predicates) {
      if (bucket && bucket->contains(name)) continue;
      for (bool negated : {false, true}) {
        keyed.push_back({{index, name, negated, !existing, inside ? 0 : p - n},
                         SplitCandidate{p, Literal{name, negated}}});
      }
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  std::vector<SplitCandidate> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.candidate));
  return out;
}

TreeNode apply_candidate(const TreeNode& node, const SplitCandidate& candidate,
                         const MinerConfig& config) {
  const auto n = static_cast<std::int64_t>(config.n);
  TreeNode out;
  out.slots.assign(static_cast<std::size_t>(n + 1), Bucket{});
  const std::int64_t shift = candidate.slot > n ? candidate.slot - n : 0;
  for (std::int64_t i = 0; i <= n; ++i) {
    const auto& bucket = node.slots.at(static_cast<std::size_t>(i));
    if (bucket.empty()) continue;
    if (i - shift < 0) throw Error(ErrorCode::InvalidConfig, "candidate exceeds the template span");
    out.slots[static_cast<std::size_t>(i - shift)] = bucket;
  }
  out.slots[static_cast<std::size_t>(candidate.slot - shift)].add(candidate.literal);
  // Keep the last occupied slot at n.
  auto occupied = occupied_slots(out.slots);
  const auto gap = n - occupied.back();
  if (gap > 0) {
    std::vector<Bucket> aligned(out.slots.size());
    for (auto s : occupied) aligned[static_cast<std::size_t>(s + gap)] = out.slots[static_cast<std::size_t>(s)];
    out.slots = std::move(aligned);
  }
  return out;
}

double binary_entropy(std::size_t positives, std::size_t total) {
  if (total == 0 || positives == 0 || positives == total) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double information_gain(std::size_t parent_positives, std::size_t parent_total,
                        std::size_t matched_positives, std::size_t matched_total) {
  if (parent_total == 0) return 0.0;
  const double total = static_cast<double>(parent_total);
  const std::size_t rest_total = parent_total - matched_total;
  const std::size_t rest_positives = parent_positives - matched_positives;
  return binary_entropy(parent_positives, parent_total) -
         static_cast<double>(matched_total) / total * binary_entropy(matched_positives, matched_total) -
         static_cast<double>(rest_total) / total * binary_entropy(rest_positives, rest_total);
}

double split_gain(const TreeNode& node, const SplitCandidate& candidate, const DatasetTruth& truth,
                  const PredicateSet& predicates, const MinerConfig& config) {
  auto effect = predicates.find(config.target_effect);
  if (!effect || predicates[*effect].kind != PredicateKind::Trace) {
    throw Error(ErrorCode::UnknownEffect, "effect " + config.target_effect + " is not an outcome predicate");
  }
  auto state = prepare(node, truth, predicates, *effect);
  return score_candidate(node, state, candidate, truth, predicates, config, *effect).gain;
}

TemporalRule refine_intervals(const TemporalRule& rule, const DatasetTruth& truth,
                              const PredicateSet& predicates, std::int64_t k) {
  if (k <= 0) throw Error(ErrorCode::InvalidConfig, "k must be positive");
  auto compiled = compile_rule(rule, predicates);
  const auto matched = matched_traces(compiled, truth);
  if (matched.empty()) {
    throw Error(ErrorCode::NoSupport, "rule matches no trace: " + render_rule(rule));
  }
  auto preserves = [&](const CompiledRule& trial) {
    // Tightening only removes matches, so checking the matched traces suffices.
    return std::all_of(matched.begin(), matched.end(), [&](std::size_t t) {
      return match_cause(trial, truth.traces[t]).has_value();
    });
  };
  TemporalRule out = rule;
  for (std::size_t j = 0; j < compiled.intervals.size(); ++j) {
    const auto hi = compiled.intervals[j].hi;
    for (std::int64_t m = 1; m * k < hi; ++m) {
      if (m * k < compiled.intervals[j].lo) continue;
      auto trial = compiled;
      trial.intervals[j].hi = m * k;
      if (preserves(trial)) {
        compiled = std::move(trial);
        break;
      }
    }
    out.intervals[j] = compiled.intervals[j];
  }
  return out;
}

TemporalRule refine_intervals(const TemporalRule& rule, const Dataset& dataset,
                              const PredicateSet& predicates, std::int64_t k) {
  return refine_intervals(rule, DatasetTruth(dataset, predicates), predicates, k);
}

std::vector<MinedRule> mine(const Dataset& dataset, const MinerConfig& config,
                            const PredicateSet& predicates) {
  config.validate();
  if (dataset.traces.empty()) throw Error(ErrorCode::InvalidConfig, "dataset is empty");
  auto effect = predicates.find(config.target_effect);
  if (!effect || predicates[*effect].kind != PredicateKind::Trace) {
    throw Error(ErrorCode::UnknownEffect,
                "target " + config.target_effect + " is not an outcome predicate");
  }
  DatasetTruth truth(dataset, predicates);
  const bool observed = std::any_of(truth.traces.begin(), truth.traces.end(),
                                    [&](const TraceTruth& t) { return t.effect(*effect); });
  if (!observed) {
    throw Error(ErrorCode::NoEffectObserved,
                "target " + config.target_effect + " holds in no trace");
  }

  TreeNode root;
  root.slots.assign(config.n + 1, Bucket{});
  root.members.resize(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) root.members[i] = i;

  TreeSearch search(truth, predicates, config, *effect);
  search.grow(root);
  auto rules = search.take_rules();
  std::vector<std::pair<std::string, MinedRule>> keyed;
  for (auto& r : rules) keyed.emplace_back(render_rule(r.rule), std::move(r));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    const auto& ma = a.second.metrics;
    const auto& mb = b.second.metrics;
    auto key = [](const RuleMetrics& m) {
      return std::make_tuple(m.correlation.value_or(0.0), m.confidence.value_or(0.0), m.support);
    };
    if (key(ma) != key(mb)) return key(ma) > key(mb);
    const auto la = a.second.rule.literal_count();
    const auto lb = b.second.rule.literal_count();
    if (la != lb) return la < lb;
    return a.first < b.first;
  });
  std::vector<MinedRule> out;
  out.reserve(keyed.size());
  for (auto& [text, rule] : keyed) out.push_back(std::move(rule));
  return out;
}

}  // namespace dialx
