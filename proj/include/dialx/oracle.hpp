#pragma once

#include <cstddef>
#include <optional>

#include "dialx/matching.hpp"
#include "dialx/miner.hpp"
#include "dialx/predicates.hpp"
#include "dialx/rule.hpp"
#include "dialx/trace.hpp"

// Slow reference implementations for tests. Both refuse large inputs.
namespace dialx::oracle {

inline constexpr std::size_t kMaxMatchEvents = 16;
inline constexpr std::size_t kMaxMatchBuckets = 4;
inline constexpr std::size_t kMaxMinePredicates = 30;
inline constexpr std::size_t kMaxMineTraces = 50;
inline constexpr std::size_t kMaxMineLiterals = 2;

// Tries every strictly increasing index tuple in lexicographic order and
// evaluates predicates on the raw events. Throws InstanceTooLarge.
std::optional<Witness> brute_force_match(const TemporalRule& rule, const DialogueTrace& trace,
                                         const PredicateSet& predicates);

// Every rule with at most `max_literals` literals that fits the template of
// `config` (n, k, target_effect), scored with brute_force_match. Returns the
// rule of highest correlation among those meeting min_support and
// purity_threshold, with the miner's ordering for ties; nullopt if none
// qualifies. Throws InstanceTooLarge.
std::optional<MinedRule> exhaustive_mine(const Dataset& dataset, const PredicateSet& predicates,
                                         const MinerConfig& config, std::size_t max_literals);

}  // namespace dialx::oracle
