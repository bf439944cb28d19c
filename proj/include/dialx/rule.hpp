#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dialx {

struct Literal {
  std::string predicate;
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

// A conjunction of literals satisfied by a single event. Literals are kept
// sorted by predicate name; a predicate appears at most once.
class Bucket {
 public:
  Bucket() = default;
  // Throws DuplicatePredicateInBucket.
  explicit Bucket(std::vector<Literal> literals);

  const std::vector<Literal>& literals() const { return literals_; }
  bool empty() const { return literals_.empty(); }
  std::size_t size() const { return literals_.size(); }
  bool contains(std::string_view predicate) const;

  // Throws DuplicatePredicateInBucket.
  void add(Literal literal);
  // Returns false if the predicate was not present.
  bool remove(std::string_view predicate);

  bool operator==(const Bucket&) const = default;

 private:
  std::vector<Literal> literals_;
};

// Seconds between consecutive witness events: lo <= gap <= hi.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool operator==(const Interval&) const = default;
};

// Buckets in temporal order (earliest first); intervals[i] separates
// buckets[i] and buckets[i + 1].
struct TemporalRule {
  std::vector<Bucket> buckets{Bucket{}};
  std::vector<Interval> intervals;
  std::string effect;

  std::size_t literal_count() const;
  // Throws Error(InvalidConfig) if the shape invariants are broken.
  void check_shape() const;

  bool operator==(const TemporalRule&) const = default;
};

// Grammar:
//   rule    := cause "|->" IDENT
//   cause   := bucket { "##" "[" INT ":" INT "]" bucket }
//   bucket  := "true" | literal { "&&" literal }
//   literal := ["!"] IDENT
// Throws SyntaxError (with byte position) or DuplicatePredicateInBucket.
TemporalRule parse_rule(std::string_view text);

// Canonical text: literals by predicate name joined with " && ", empty
// buckets as "true", intervals as " ##[lo:hi] ", then " |-> " and the effect.
std::string render_rule(const TemporalRule& rule);

}  // namespace dialx
