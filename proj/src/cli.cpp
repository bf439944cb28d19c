#include "dialx/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialx/error.hpp"
#include "dialx/featurizer.hpp"
#include "dialx/matching.hpp"
#include "dialx/predicates.hpp"
#include "dialx/report.hpp"
#include "dialx/rule.hpp"
#include "dialx/trace.hpp"

namespace dialx {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string input;
  std::string output;
  std::string lexicons;
  std::string predicates;
  std::string format = "text";
  std::string target;
  std::string rule;
  bool witnesses = false;
  MinerConfig miner;
};

// A rule that failed to parse, with the text it came from.
struct RuleSyntaxError {
  std::string text;
  std::size_t line = 0;  // 1-based line in a rule file, 0 for inline text
  SyntaxError error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorCode::Io, std::string("missing ") + what);
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::Io, std::string(what) + " not found: " + path);
}

void require_output_dir(const std::string& path) {
  if (path.empty()) return;
  auto parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error(ErrorCode::Io, "output directory not found: " + parent.string());
  }
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty()) {
    out << data;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::Io, "cannot write " + path);
  file << data;
  if (!file.flush()) throw Error(ErrorCode::Io, "cannot write " + path);
}

PredicateSet load_predicates(const Options& opt, const Dataset& dataset) {
  PredicateConfig config = default_predicate_config();
  if (!opt.predicates.empty()) {
    require_file(opt.predicates, "predicate config");
    config = load_predicate_config(opt.predicates);
  }
  return compile_predicates(config, dataset.schema);
}

int cmd_featurize(const Options& opt, std::ostream& out) {
  require_file(opt.input, "input");
  require_output_dir(opt.output);
  LexiconSet lexicon = opt.lexicons.empty() ? builtin_lexicons() : load_lexicons(opt.lexicons);
  std::ifstream in(opt.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + opt.input);
  auto messages = read_messages(in);
  if (messages.empty()) throw Error(ErrorCode::MalformedInput, "no messages in " + opt.input);
  auto dataset = featurize_corpus(messages, lexicon);
  auto csv = write_traces(dataset);
  if (opt.output.empty()) {
    out << csv;
    return 0;
  }
  write_output(opt.output, csv, out);
  for (const auto& trace : dataset.traces) {
    out << trace.dialogue_id << " events=" << trace.events.size()
        << " outcome=" << static_cast<int>(trace.outcome) << '\n';
  }
  out << "dialogues=" << dataset.traces.size() << " events=" << dataset.event_count() << '\n';
  return 0;
}

int cmd_mine(const Options& opt, std::ostream& out) {
  require_file(opt.input, "input");
  require_output_dir(opt.output);
  opt.miner.validate();
  auto dataset = load_traces(fs::path(opt.input));
  if (dataset.traces.empty()) throw Error(ErrorCode::InvalidConfig, "dataset is empty");
  auto predicates = load_predicates(opt, dataset);
  std::vector<std::string> targets;
  if (!opt.target.empty()) targets.push_back(opt.target);
  auto report = run_mining(dataset, opt.miner, predicates, targets);
  write_output(opt.output,
               opt.format == "json" ? render_report_json(report) : render_report_text(report), out);
  return 0;
}

std::vector<std::pair<std::size_t, std::string>> rule_texts(const std::string& arg) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::error_code ec;
  if (!fs::is_regular_file(arg, ec)) {
    out.emplace_back(0, arg);
    return out;
  }
  std::istringstream in(read_file(arg));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.emplace_back(number, line);
  }
  if (out.empty()) throw Error(ErrorCode::MalformedInput, "no rules in " + arg);
  return out;
}

int cmd_eval(const Options& opt, std::ostream& out) {
  require_file(opt.input, "input");
  require_output_dir(opt.output);
  std::vector<TemporalRule> rules;
  for (auto& [line, text] : rule_texts(opt.rule)) {
    try {
      rules.push_back(parse_rule(text));
    } catch (const SyntaxError& e) {
      throw RuleSyntaxError{text, line, e};
    }
  }
  auto dataset = load_traces(fs::path(opt.input));
  if (dataset.traces.empty()) throw Error(ErrorCode::InvalidConfig, "dataset is empty");
  auto predicates = load_predicates(opt, dataset);
  DatasetTruth truth(dataset, predicates);

  std::ostringstream text;
  auto docs = nlohmann::ordered_json::array();
  for (const auto& rule : rules) {
    auto compiled = compile_rule(rule, predicates);
    auto m = evaluate_rule(compiled, truth);
    const auto& c = m.counts;
    auto doc = nlohmann::ordered_json{
        {"rule", render_rule(rule)},
        {"support", m.support},
        {"correlation", m.correlation ? nlohmann::ordered_json(*m.correlation) : nullptr},
        {"confidence", m.confidence ? nlohmann::ordered_json(*m.confidence) : nullptr},
        {"counts",
         {{"matched", c.matched},
          {"matched_and_effect", c.matched_and_effect},
          {"effect_total", c.effect_total},
          {"dataset_size", c.dataset_size}}}};
    if (&rule != &rules.front()) text << '\n';
    text << "rule: " << render_rule(rule) << '\n'
         << "support: " << format_percent(m.support) << "% (" << c.matched << '/' << c.dataset_size
         << ")\n"
         << "correlation: " << format_percent(m.correlation) << "% (" << c.matched_and_effect << '/'
         << c.effect_total << ")\n"
         << "confidence: " << format_percent(m.confidence) << "% (" << c.matched_and_effect << '/'
         << c.matched << ")\n";
    if (opt.witnesses) {
      auto witnesses = nlohmann::ordered_json::array();
      for (std::size_t t = 0; t < truth.size(); ++t) {
        auto w = match_cause(compiled, truth.traces[t]);
        if (!w) continue;
        const auto& trace = dataset.traces[t];
        text << "witness " << trace.dialogue_id << ':';
        auto events = nlohmann::ordered_json::array();
        for (auto i : w->events) {
          text << ' ' << i << '@' << trace.events[i].timestamp;
          events.push_back({{"index", i}, {"timestamp", trace.events[i].timestamp}});
        }
        text << '\n';
        witnesses.push_back({{"dialogue_id", trace.dialogue_id}, {"events", std::move(events)}});
      }
      doc["witnesses"] = std::move(witnesses);
    }
    docs.push_back(std::move(doc));
  }
  std::string data = text.str();
  if (opt.format == "json") data = nlohmann::ordered_json{{"rules", std::move(docs)}}.dump(2) + "\n";
  write_output(opt.output, data, out);
  return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("-o,--output", opt.output, "Output file (default: standard output)");
}

void add_predicates(CLI::App* cmd, Options& opt) {
  cmd->add_option("--predicates", opt.predicates, "Predicate config file (default: built-in bins)");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

void print_syntax_error(const RuleSyntaxError& e, std::ostream& err) {
  err << "error: ";
  if (e.line > 0) err << "line " << e.line << ": ";
  err << e.error.what() << '\n';
  err << "  " << e.text << '\n';
  err << "  " << std::string(std::min(e.error.position(), e.text.size()), ' ') << "^\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Mine timed-sequence rules that explain dialogue outcomes", "dialx"};
  app.set_config("--config", "", "INI/TOML file with option defaults (flags take precedence)");
  app.require_subcommand(1);

  auto* featurize = app.add_subcommand("featurize", "Turn JSON Lines messages into a trace CSV");
  featurize->add_option("input", opt.input, "Messages (.jsonl)")->required();
  featurize->add_option("--lexicons", opt.lexicons, "Lexicon directory (default: built-in lexicons)")
      ->envname(kLexiconEnv);
  add_common(featurize, opt);

  auto* mine_cmd = app.add_subcommand("mine", "Mine rules for each outcome");
  mine_cmd->add_option("input", opt.input, "Trace CSV")->required();
  mine_cmd->add_option("--n", opt.miner.n, "Template intervals (buckets = n + 1)")->capture_default_str();
  mine_cmd->add_option("--k", opt.miner.k, "Seconds per template interval")->capture_default_str();
  mine_cmd->add_option("--depth", opt.miner.max_depth, "Maximum literals per rule")->capture_default_str();
  mine_cmd->add_option("--min-support", opt.miner.min_support, "Minimum support fraction")
      ->capture_default_str();
  mine_cmd->add_option("--purity", opt.miner.purity_threshold, "Leaf confidence threshold")
      ->capture_default_str();
  mine_cmd->add_option("--target", opt.target, "Outcome predicate (default: every outcome)");
  add_predicates(mine_cmd, opt);
  add_common(mine_cmd, opt);

  auto* eval = app.add_subcommand("eval", "Evaluate rules on a trace CSV");
  eval->add_option("input", opt.input, "Trace CSV")->required();
  eval->add_option("rule", opt.rule, "Rule text, or a file with one rule per line")->required();
  eval->add_flag("--witnesses", opt.witnesses, "Print the witness of every matched trace");
  add_predicates(eval, opt);
  add_common(eval, opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*featurize) return cmd_featurize(opt, out);
    if (*mine_cmd) return cmd_mine(opt, out);
    return cmd_eval(opt, out);
  } catch (const RuleSyntaxError& e) {
    print_syntax_error(e, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace dialx
