#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialx/trace.hpp"

namespace dialx {

// A real interval with independently open or closed ends. Unbounded ends use
// infinities; an exact value v is the closed interval [v, v].
struct ValueDomain {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static ValueDomain exactly(double v) { return {v, v, true, true}; }
  static ValueDomain closed(double lo, double hi) { return {lo, hi, true, true}; }
  static ValueDomain closed_open(double lo, double hi) { return {lo, hi, true, false}; }
  static ValueDomain open(double lo, double hi) { return {lo, hi, false, false}; }
  static ValueDomain below(double hi) { return {-std::numeric_limits<double>::infinity(), hi, false, false}; }
  static ValueDomain at_least(double lo) { return {lo, std::numeric_limits<double>::infinity(), true, false}; }

  bool contains(double v) const {
    return (lo_closed ? v >= lo : v > lo) && (hi_closed ? v <= hi : v < hi);
  }
  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }

  bool operator==(const ValueDomain&) const = default;
};

// Parses `<x`, `<=x`, `>x`, `>=x`, `=x`, `==x` or interval notation such as
// `[a,b)`, `(a,b]`, `(a:b)` (':' and ',' both separate the bounds).
ValueDomain parse_domain(std::string_view text);
std::string render_domain(const ValueDomain& domain);

struct Bin {
  std::string name;  // suffix, e.g. LOW_POS
  ValueDomain domain;

  bool operator==(const Bin&) const = default;
};

// Discretization of one attribute. Values are divided by `divisor` before
// they are compared against the bins; `range` is the declared range of the
// scaled value, which the bins must partition.
struct AttributeBins {
  std::string attribute;  // schema name, or "outcome"
  std::string prefix;     // predicate name prefix, e.g. SENTIMENT
  double divisor = 1.0;
  ValueDomain range;
  std::vector<Bin> bins;

  bool operator==(const AttributeBins&) const = default;
};

struct AliasDef {
  std::string name;
  std::vector<std::string> members;  // predicate names; the alias is their union

  bool operator==(const AliasDef&) const = default;
};

struct PredicateConfig {
  std::vector<AttributeBins> attributes;
  std::vector<AliasDef> aliases;

  bool operator==(const PredicateConfig&) const = default;
};

inline constexpr std::string_view kOutcome = "outcome";

enum class PredicateKind { Event, Trace };

struct PredicateDef {
  std::string name;
  std::string target;  // attribute name or "outcome"
  double divisor = 1.0;
  ValueDomain domain;
  PredicateKind kind = PredicateKind::Event;
  // Non-empty for aliases: indices of the atomic predicates in the union.
  std::vector<std::size_t> members;

  bool is_alias() const { return !members.empty(); }
};

using PredicateId = std::size_t;

class PredicateSet {
 public:
  PredicateSet() = default;

  const std::vector<PredicateDef>& predicates() const { return predicates_; }
  const PredicateDef& operator[](PredicateId id) const { return predicates_[id]; }
  std::size_t size() const { return predicates_.size(); }
  std::size_t atomic_count() const { return atomic_count_; }

  std::optional<PredicateId> find(std::string_view name) const;

  // Event-level predicate ids in lexicographic name order.
  std::vector<PredicateId> event_predicates() const;
  std::vector<PredicateId> trace_predicates() const;

  // Evaluates an event-level predicate. Throws UnknownAttribute if the event
  // lacks the referenced attribute.
  bool eval(PredicateId id, const Event& event) const;
  // Evaluates a trace-level predicate on the trace outcome.
  bool eval(PredicateId id, const DialogueTrace& trace) const;

 private:
  friend PredicateSet compile_predicates(const PredicateConfig&, const std::vector<std::string>&);

  bool eval_value(const PredicateDef& def, double value) const;

  std::vector<PredicateDef> predicates_;  // atomic predicates first, then aliases
  std::size_t atomic_count_ = 0;
};

// Default bins: sentiment on polarity/5, five category attributes, and the outcome.
PredicateConfig default_predicate_config();

// Checks bins partition each attribute range and every referenced attribute
// is in `schema`; names are `<PREFIX>_<BIN>`. Throws OverlappingBins,
// CoverageGap, UnknownAttribute, DuplicatePredicate or UnknownPredicate.
PredicateSet compile_predicates(const PredicateConfig& config,
                                const std::vector<std::string>& schema);

// Bins of one attribute must be pairwise disjoint and cover `range`.
void check_partition(const AttributeBins& attribute);

PredicateConfig parse_predicate_config(std::istream& in);
PredicateConfig load_predicate_config(const std::filesystem::path& path);
std::string write_predicate_config(const PredicateConfig& config);

}  // namespace dialx
