#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dialx/miner.hpp"
#include "dialx/predicates.hpp"
#include "dialx/trace.hpp"

namespace dialx {

struct TargetAnalysis {
  std::string target;
  std::size_t effect_traces = 0;
  std::vector<MinedRule> rules;
};

struct MiningReport {
  MinerConfig config;
  std::size_t traces = 0;
  std::size_t events = 0;
  std::vector<TargetAnalysis> analyses;
};

// Mines each target in turn. With no targets every outcome predicate is
// analysed and one that never holds yields an empty analysis instead of
// NoEffectObserved.
MiningReport run_mining(const Dataset& dataset, const MinerConfig& config,
                        const PredicateSet& predicates, const std::vector<std::string>& targets);

// 0.3141 -> "31.41"
std::string format_percent(double fraction);
std::string format_percent(const std::optional<double>& fraction);  // "undefined" when empty

std::string render_report_text(const MiningReport& report);
std::string render_report_json(const MiningReport& report);

}  // namespace dialx
