#include "dialx/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "dialx/error.hpp"

namespace dialx {

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

double base_rate(const TargetAnalysis& analysis, std::size_t traces) {
  return traces ? static_cast<double>(analysis.effect_traces) / static_cast<double>(traces) : 0.0;
}

}  // namespace

MiningReport run_mining(const Dataset& dataset, const MinerConfig& config,
                        const PredicateSet& predicates, const std::vector<std::string>& targets) {
  config.validate();
  MiningReport report;
  report.config = config;
  report.traces = dataset.traces.size();
  report.events = dataset.event_count();

  std::vector<std::string> names = targets;
  const bool all = names.empty();
  if (all) {
    for (auto id : predicates.trace_predicates()) names.push_back(predicates[id].name);
  }
  for (const auto& name : names) {
    auto id = predicates.find(name);
    if (!id || predicates[*id].kind != PredicateKind::Trace) {
      throw Error(ErrorCode::UnknownEffect, "target " + name + " is not an outcome predicate");
    }
    TargetAnalysis analysis;
    analysis.target = name;
    for (const auto& trace : dataset.traces) analysis.effect_traces += predicates.eval(*id, trace);
    if (analysis.effect_traces > 0 || !all) {
      MinerConfig per_target = config;
      per_target.target_effect = name;
      analysis.rules = mine(dataset, per_target, predicates);
    }
    report.analyses.push_back(std::move(analysis));
  }
  return report;
}

std::string format_percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  std::string out = buf;
  return out == "-0.00" ? "0.00" : out;
}

std::string format_percent(const std::optional<double>& fraction) {
  return fraction ? format_percent(*fraction) : "undefined";
}

std::string render_report_text(const MiningReport& report) {
  std::ostringstream out;
  const auto& c = report.config;
  out << "n=" << c.n << " k=" << c.k << " max_depth=" << c.max_depth
      << " min_support=" << format_real(c.min_support) << " purity=" << format_real(c.purity_threshold)
      << '\n';
  out << "traces=" << report.traces << " events=" << report.events << '\n';
  for (const auto& analysis : report.analyses) {
    out << '\n'
        << "target " << analysis.target << " (" << analysis.effect_traces << " traces, base rate "
        << format_percent(base_rate(analysis, report.traces)) << "%)\n";
    if (analysis.effect_traces == 0) {
      out << "no trace has this outcome\n";
      continue;
    }
    out << "rule | support% | correlation%\n";
    for (const auto& mined : analysis.rules) {
      out << render_rule(mined.rule) << " | " << format_percent(mined.metrics.support) << " | "
          << format_percent(mined.metrics.correlation) << '\n';
    }
    if (analysis.rules.empty()) out << "no rule found\n";
  }
  return out.str();
}

std::string render_report_json(const MiningReport& report) {
  ordered_json doc;
  const auto& c = report.config;
  doc["config"] = {{"n", c.n},
                   {"k", c.k},
                   {"max_depth", c.max_depth},
                   {"min_support", c.min_support},
                   {"purity_threshold", c.purity_threshold},
                   {"tie_break", "bucket,literal,polarity"}};
  doc["dataset"] = {{"traces", report.traces}, {"events", report.events}};
  auto analyses = ordered_json::array();
  for (const auto& analysis : report.analyses) {
    auto rules = ordered_json::array();
    for (const auto& mined : analysis.rules) {
      const auto& m = mined.metrics;
      rules.push_back({{"rule", render_rule(mined.rule)},
                       {"support", m.support},
                       {"correlation", optional_number(m.correlation)},
                       {"confidence", optional_number(m.confidence)},
                       {"support_percent", format_percent(m.support)},
                       {"correlation_percent", format_percent(m.correlation)},
                       {"counts",
                        {{"matched", m.counts.matched},
                         {"matched_and_effect", m.counts.matched_and_effect},
                         {"effect_total", m.counts.effect_total},
                         {"dataset_size", m.counts.dataset_size}}}});
    }
    analyses.push_back({{"target", analysis.target},
                        {"effect_traces", analysis.effect_traces},
                        {"effect_base_rate", base_rate(analysis, report.traces)},
                        {"rules", std::move(rules)}});
  }
  doc["analyses"] = std::move(analyses);
  return doc.dump(2) + "\n";
}

}  // namespace dialx
