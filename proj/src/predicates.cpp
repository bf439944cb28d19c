#include "dialx/predicates.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "dialx/error.hpp"

namespace dialx {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string uppercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double parse_bound(std::string_view text) {
  auto t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  std::string_view v = t;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidConfig, "bad number '" + t + "' in value domain");
  }
  return out;
}

std::string render_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

// Interval endpoints mapped to a total order: a closed lower end sorts before
// the point itself, an open one after; symmetric for upper ends. A domain is
// the half-open key range [start, end).
struct Cut {
  double value;
  int side;  // 0 or 1; points sit at side 1/2
  auto operator<=>(const Cut&) const = default;
};

Cut start_of(const ValueDomain& d) { return {d.lo, d.lo_closed ? 0 : 1}; }
Cut end_of(const ValueDomain& d) { return {d.hi, d.hi_closed ? 1 : 0}; }

ValueDomain clip(const ValueDomain& d, const ValueDomain& range) {
  ValueDomain out = d;
  if (start_of(range) > start_of(out)) {
    out.lo = range.lo;
    out.lo_closed = range.lo_closed;
  }
  if (end_of(range) < end_of(out)) {
    out.hi = range.hi;
    out.hi_closed = range.hi_closed;
  }
  return out;
}

bool has_range(const ValueDomain& range) {
  return !(std::isinf(range.lo) && std::isinf(range.hi) && range.lo < 0 && range.hi > 0);
}

}  // namespace

ValueDomain parse_domain(std::string_view text) {
  auto t = trim(text);
  std::string_view s = t;
  if (s.empty()) throw Error(ErrorCode::InvalidConfig, "empty value domain");
  auto rest = [&](std::size_t n) { return s.substr(n); };
  if (s.starts_with("==")) return ValueDomain::exactly(parse_bound(rest(2)));
  if (s.starts_with("<=")) {
    return {-std::numeric_limits<double>::infinity(), parse_bound(rest(2)), false, true};
  }
  if (s.starts_with(">=")) return ValueDomain::at_least(parse_bound(rest(2)));
  if (s.starts_with("=")) return ValueDomain::exactly(parse_bound(rest(1)));
  if (s.starts_with("<")) return ValueDomain::below(parse_bound(rest(1)));
  if (s.starts_with(">")) {
    return {parse_bound(rest(1)), std::numeric_limits<double>::infinity(), false, false};
  }
  if ((s.front() == '[' || s.front() == '(') && (s.back() == ']' || s.back() == ')')) {
    auto body = s.substr(1, s.size() - 2);
    auto sep = body.find_first_of(",:");
    if (sep == std::string_view::npos || body.find_first_of(",:", sep + 1) != std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "interval '" + t + "' needs exactly two bounds");
    }
    ValueDomain d{parse_bound(body.substr(0, sep)), parse_bound(body.substr(sep + 1)),
                  s.front() == '[', s.back() == ']'};
    if (std::isinf(d.lo)) d.lo_closed = false;
    if (std::isinf(d.hi)) d.hi_closed = false;
    if (d.empty()) throw Error(ErrorCode::InvalidConfig, "interval '" + t + "' is empty");
    return d;
  }
  throw Error(ErrorCode::InvalidConfig, "cannot parse value domain '" + t + "'");
}

std::string render_domain(const ValueDomain& d) {
  if (d.lo == d.hi && d.lo_closed && d.hi_closed) return "=" + render_bound(d.lo);
  if (std::isinf(d.lo) && d.lo < 0 && !std::isinf(d.hi)) {
    return (d.hi_closed ? "<=" : "<") + render_bound(d.hi);
  }
  if (std::isinf(d.hi) && d.hi > 0 && !std::isinf(d.lo)) {
    return (d.lo_closed ? ">=" : ">") + render_bound(d.lo);
  }
  return std::string(d.lo_closed ? "[" : "(") + render_bound(d.lo) + "," + render_bound(d.hi) +
         (d.hi_closed ? "]" : ")");
}

void check_partition(const AttributeBins& attribute) {
  const bool ranged = has_range(attribute.range);
  std::vector<ValueDomain> pieces;
  for (const auto& bin : attribute.bins) {
    auto piece = ranged ? clip(bin.domain, attribute.range) : bin.domain;
    if (!piece.empty()) pieces.push_back(piece);
  }
  std::sort(pieces.begin(), pieces.end(), [](const ValueDomain& a, const ValueDomain& b) {
    return start_of(a) < start_of(b);
  });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (start_of(pieces[i]) < end_of(pieces[i - 1])) {
      throw Error(ErrorCode::OverlappingBins,
                  "bins " + render_domain(pieces[i - 1]) + " and " + render_domain(pieces[i]) +
                      " of " + attribute.attribute + " overlap");
    }
  }
  if (!ranged) return;
  auto gap = [&](const std::string& where) {
    throw Error(ErrorCode::CoverageGap, "bins of " + attribute.attribute + " leave " + where +
                                            " of " + render_domain(attribute.range) +
                                            " uncovered");
  };
  if (pieces.empty()) gap("all");
  if (start_of(pieces.front()) != start_of(attribute.range)) gap("the lower end");
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (start_of(pieces[i]) != end_of(pieces[i - 1])) {
      gap("a gap before " + render_domain(pieces[i]));
    }
  }
  if (end_of(pieces.back()) != end_of(attribute.range)) gap("the upper end");
}

PredicateConfig default_predicate_config() {
  PredicateConfig config;
  config.attributes.push_back(AttributeBins{
      std::string(kPolarity),
      "SENTIMENT",
      5.0,
      ValueDomain::closed(-1.0, 1.0),
      {
          {"VERY_NEG", ValueDomain::below(-0.2)},
          {"NEG", ValueDomain::closed_open(-0.2, 0.0)},
          {"LOW_POS", ValueDomain::closed_open(0.0, 0.5)},
          {"MEDIUM_POS", ValueDomain::closed_open(0.5, 0.8)},
          // Closed at 0.8 so the sentiment bins partition [-1, 1].
          {"HIGH_POS", ValueDomain::at_least(0.8)},
      }});
  for (const char* category :
       {"office", "domestic_work", "medical_emergency", "aggression", "family"}) {
    config.attributes.push_back(AttributeBins{
        std::string(kCategoryPrefix) + category,
        uppercase(category),
        1.0,
        ValueDomain::closed(0.0, 2.0),
        {
            {"ABSENT", ValueDomain::exactly(0.0)},
            {"LOW", ValueDomain::open(0.0, 1.0)},
            {"MEDIUM", ValueDomain::closed_open(1.0, 2.0)},
            {"HIGH", ValueDomain::at_least(2.0)},
        }});
  }
  config.attributes.push_back(AttributeBins{
      std::string(kOutcome),
      "SENTIMENT",
      1.0,
      ValueDomain{},
      {
          {"LOW", ValueDomain::exactly(0.0)},
          {"HIGH", ValueDomain::exactly(1.0)},
      }});
  config.aliases.push_back(
      {"SENTIMENT_POS", {"SENTIMENT_LOW_POS", "SENTIMENT_MEDIUM_POS", "SENTIMENT_HIGH_POS"}});
  config.aliases.push_back({"SENTIMENT_VERY_POS", {"SENTIMENT_HIGH_POS"}});
  return config;
}

PredicateSet compile_predicates(const PredicateConfig& config,
                                const std::vector<std::string>& schema) {
  PredicateSet set;
  std::map<std::string, PredicateId, std::less<>> names;
  auto add_name = [&](const std::string& name, PredicateId id) {
    if (!names.emplace(name, id).second) {
      throw Error(ErrorCode::DuplicatePredicate, "predicate " + name + " defined twice");
    }
  };
  for (const auto& attribute : config.attributes) {
    const bool is_outcome = attribute.attribute == kOutcome;
    if (!is_outcome &&
        std::find(schema.begin(), schema.end(), attribute.attribute) == schema.end()) {
      throw Error(ErrorCode::UnknownAttribute,
                  "predicate attribute " + attribute.attribute + " is not in the dataset schema");
    }
    if (!(attribute.divisor > 0.0) || !std::isfinite(attribute.divisor)) {
      throw Error(ErrorCode::InvalidConfig, "divisor of " + attribute.attribute + " must be positive");
    }
    check_partition(attribute);
    if (is_outcome) {
      for (double label : {0.0, 1.0}) {
        auto hits = std::count_if(attribute.bins.begin(), attribute.bins.end(),
                                  [&](const Bin& b) { return b.domain.contains(label); });
        if (hits == 0) {
          throw Error(ErrorCode::CoverageGap, "no outcome bin contains " + format_real(label));
        }
      }
    }
    for (const auto& bin : attribute.bins) {
      PredicateDef def;
      def.name = attribute.prefix.empty() ? bin.name : attribute.prefix + "_" + bin.name;
      def.target = attribute.attribute;
      def.divisor = attribute.divisor;
      def.domain = bin.domain;
      def.kind = is_outcome ? PredicateKind::Trace : PredicateKind::Event;
      add_name(def.name, set.predicates_.size());
      set.predicates_.push_back(std::move(def));
    }
  }
  set.atomic_count_ = set.predicates_.size();
  for (const auto& alias : config.aliases) {
    if (alias.members.empty()) {
      throw Error(ErrorCode::InvalidConfig, "alias " + alias.name + " has no members");
    }
    PredicateDef def;
    def.name = alias.name;
    for (const auto& member : alias.members) {
      auto it = names.find(member);
      if (it == names.end() || it->second >= set.atomic_count_) {
        throw Error(ErrorCode::UnknownPredicate,
                    "alias " + alias.name + " refers to unknown predicate " + member);
      }
      const auto& target = set.predicates_[it->second];
      if (def.members.empty()) {
        def.target = target.target;
        def.divisor = target.divisor;
        def.kind = target.kind;
      } else if (target.target != def.target) {
        throw Error(ErrorCode::InvalidConfig,
                    "alias " + alias.name + " mixes predicates over different attributes");
      }
      def.members.push_back(it->second);
    }
    add_name(def.name, set.predicates_.size());
    set.predicates_.push_back(std::move(def));
  }
  return set;
}

std::optional<PredicateId> PredicateSet::find(std::string_view name) const {
  for (PredicateId id = 0; id < predicates_.size(); ++id) {
    if (predicates_[id].name == name) return id;
  }
  return std::nullopt;
}

std::vector<PredicateId> PredicateSet::event_predicates() const {
  std::vector<PredicateId> ids;
  for (PredicateId id = 0; id < predicates_.size(); ++id) {
    if (predicates_[id].kind == PredicateKind::Event) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end(), [&](PredicateId a, PredicateId b) {
    return predicates_[a].name < predicates_[b].name;
  });
  return ids;
}

std::vector<PredicateId> PredicateSet::trace_predicates() const {
  std::vector<PredicateId> ids;
  for (PredicateId id = 0; id < predicates_.size(); ++id) {
    if (predicates_[id].kind == PredicateKind::Trace) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end(), [&](PredicateId a, PredicateId b) {
    return predicates_[a].name < predicates_[b].name;
  });
  return ids;
}

bool PredicateSet::eval_value(const PredicateDef& def, double value) const {
  if (def.is_alias()) {
    return std::any_of(def.members.begin(), def.members.end(), [&](PredicateId m) {
      return eval_value(predicates_[m], value);
    });
  }
  return def.domain.contains(def.divisor == 1.0 ? value : value / def.divisor);
}

bool PredicateSet::eval(PredicateId id, const Event& event) const {
  const auto& def = predicates_.at(id);
  if (def.kind != PredicateKind::Event) {
    throw Error(ErrorCode::UnknownPredicate, def.name + " is not an event-level predicate");
  }
  auto it = event.attributes.find(def.target);
  if (it == event.attributes.end()) {
    throw Error(ErrorCode::UnknownAttribute,
                "event has no attribute " + def.target + " (needed by " + def.name + ")");
  }
  return eval_value(def, it->second);
}

bool PredicateSet::eval(PredicateId id, const DialogueTrace& trace) const {
  const auto& def = predicates_.at(id);
  if (def.kind != PredicateKind::Trace) {
    throw Error(ErrorCode::UnknownPredicate, def.name + " is not a trace-level predicate");
  }
  return eval_value(def, static_cast<double>(static_cast<int>(trace.outcome)));
}

// Config format: `[<attribute>]` sections holding `prefix:`, `divisor:`,
// `range:` and `bin <NAME>: <domain>` lines, plus an `[aliases]` section of
// `<NAME>: <MEMBER> | <MEMBER> ...` lines. `#` starts a comment.
PredicateConfig parse_predicate_config(std::istream& in) {
  PredicateConfig config;
  std::string line;
  std::size_t line_no = 0;
  enum class Section { None, Attribute, Aliases } section = Section::None;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidConfig,
                "predicate config line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail("unterminated section header");
      auto name = trim(std::string_view(text).substr(1, text.size() - 2));
      if (name.empty()) fail("empty section name");
      if (name == "aliases") {
        section = Section::Aliases;
      } else {
        section = Section::Attribute;
        AttributeBins attribute;
        attribute.attribute = name;
        std::string stem = name.starts_with(kCategoryPrefix) ? name.substr(kCategoryPrefix.size()) : name;
        attribute.prefix = uppercase(stem);
        config.attributes.push_back(std::move(attribute));
      }
      continue;
    }
    auto colon = text.find(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    auto key = trim(std::string_view(text).substr(0, colon));
    auto value = trim(std::string_view(text).substr(colon + 1));
    try {
      if (section == Section::Aliases) {
        AliasDef alias{key, {}};
        std::stringstream members(value);
        std::string member;
        while (std::getline(members, member, '|')) {
          auto m = trim(member);
          if (m.empty()) fail("empty alias member");
          alias.members.push_back(m);
        }
        if (alias.members.empty()) fail("alias without members");
        config.aliases.push_back(std::move(alias));
      } else if (section == Section::Attribute) {
        auto& attribute = config.attributes.back();
        if (key == "prefix") {
          attribute.prefix = value;
        } else if (key == "divisor") {
          attribute.divisor = parse_bound(value);
        } else if (key == "range") {
          attribute.range = parse_domain(value);
        } else if (key.starts_with("bin ")) {
          attribute.bins.push_back(Bin{trim(std::string_view(key).substr(4)), parse_domain(value)});
        } else {
          fail("unknown key '" + key + "'");
        }
      } else {
        fail("key outside of a section");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig &&
          std::string_view(e.what()).starts_with("predicate config line")) {
        throw;
      }
      fail(e.what());
    }
  }
  return config;
}

PredicateConfig load_predicate_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_predicate_config(in);
}

std::string write_predicate_config(const PredicateConfig& config) {
  std::ostringstream out;
  bool first = true;
  for (const auto& attribute : config.attributes) {
    if (!first) out << '\n';
    first = false;
    out << '[' << attribute.attribute << "]\n";
    out << "prefix: " << attribute.prefix << '\n';
    if (attribute.divisor != 1.0) out << "divisor: " << render_bound(attribute.divisor) << '\n';
    if (has_range(attribute.range)) out << "range: " << render_domain(attribute.range) << '\n';
    for (const auto& bin : attribute.bins) {
      out << "bin " << bin.name << ": " << render_domain(bin.domain) << '\n';
    }
  }
  if (!config.aliases.empty()) {
    out << "\n[aliases]\n";
    for (const auto& alias : config.aliases) {
      out << alias.name << ": ";
      for (std::size_t i = 0; i < alias.members.size(); ++i) {
        out << (i ? " | " : "") << alias.members[i];
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace dialx
