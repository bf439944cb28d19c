#include "dialx/rule.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "dialx/error.hpp"

namespace dialx {

Bucket::Bucket(std::vector<Literal> literals) {
  for (auto& literal : literals) add(std::move(literal));
}

bool Bucket::contains(std::string_view predicate) const {
  return std::any_of(literals_.begin(), literals_.end(),
                     [&](const Literal& l) { return l.predicate == predicate; });
}

void Bucket::add(Literal literal) {
  auto pos = std::lower_bound(
      literals_.begin(), literals_.end(), literal.predicate,
      [](const Literal& l, const std::string& name) { return l.predicate < name; });
  if (pos != literals_.end() && pos->predicate == literal.predicate) {
    throw Error(ErrorCode::DuplicatePredicateInBucket,
                "predicate " + literal.predicate + " appears twice in one bucket");
  }
  literals_.insert(pos, std::move(literal));
}

bool Bucket::remove(std::string_view predicate) {
  auto it = std::find_if(literals_.begin(), literals_.end(),
                         [&](const Literal& l) { return l.predicate == predicate; });
  if (it == literals_.end()) return false;
  literals_.erase(it);
  return true;
}

std::size_t TemporalRule::literal_count() const {
  std::size_t n = 0;
  for (const auto& b : buckets) n += b.size();
  return n;
}

void TemporalRule::check_shape() const {
  if (buckets.empty()) throw Error(ErrorCode::InvalidConfig, "rule has no buckets");
  if (intervals.size() + 1 != buckets.size()) {
    throw Error(ErrorCode::InvalidConfig, "rule needs one interval between each pair of buckets");
  }
  for (const auto& iv : intervals) {
    if (iv.lo < 0 || iv.lo > iv.hi) {
      throw Error(ErrorCode::InvalidConfig, "interval bounds must satisfy 0 <= lo <= hi");
    }
  }
  if (effect.empty()) throw Error(ErrorCode::InvalidConfig, "rule has no effect");
}

namespace {

enum class Tok { Ident, Int, Not, And, Hash, LBracket, RBracket, Colon, Implies, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&&'";
    case Tok::Hash: return "'##'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Implies: return "'|->'";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Tok::End, start, {}};
    const char c = text_[pos_];
    auto is_ident_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      return {Tok::Ident, start, text_.substr(start, pos_ - start)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        throw SyntaxError("malformed number", start);
      }
      return {Tok::Int, start, text_.substr(start, pos_ - start)};
    }
    auto rest = text_.substr(pos_);
    auto symbol = [&](Tok kind, std::size_t len) {
      pos_ += len;
      return Token{kind, start, text_.substr(start, len)};
    };
    if (rest.starts_with("|->")) return symbol(Tok::Implies, 3);
    if (rest.starts_with("&&")) return symbol(Tok::And, 2);
    if (rest.starts_with("##")) return symbol(Tok::Hash, 2);
    switch (c) {
      case '!': return symbol(Tok::Not, 1);
      case '[': return symbol(Tok::LBracket, 1);
      case ']': return symbol(Tok::RBracket, 1);
      case ':': return symbol(Tok::Colon, 1);
      default: break;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  TemporalRule parse() {
    TemporalRule rule;
    rule.buckets.clear();
    rule.buckets.push_back(parse_bucket());
    while (current_.kind == Tok::Hash) {
      advance();
      expect(Tok::LBracket);
      auto lo_tok = expect(Tok::Int);
      expect(Tok::Colon);
      auto hi_tok = expect(Tok::Int);
      expect(Tok::RBracket);
      Interval iv{to_int(lo_tok), to_int(hi_tok)};
      if (iv.lo > iv.hi) throw SyntaxError("interval lower bound exceeds upper bound", lo_tok.pos);
      rule.intervals.push_back(iv);
      rule.buckets.push_back(parse_bucket());
    }
    expect(Tok::Implies);
    auto effect = expect(Tok::Ident);
    if (effect.text == "true") throw SyntaxError("effect must be a predicate name", effect.pos);
    rule.effect = std::string(effect.text);
    expect(Tok::End);
    return rule;
  }

 private:
  Bucket parse_bucket() {
    if (current_.kind == Tok::Ident && current_.text == "true") {
      advance();
      if (current_.kind == Tok::And) {
        throw SyntaxError("'true' cannot be combined with literals", current_.pos);
      }
      return Bucket{};
    }
    Bucket bucket;
    for (;;) {
      bool negated = false;
      if (current_.kind == Tok::Not) {
        negated = true;
        advance();
      }
      if (current_.kind != Tok::Ident || current_.text == "true") {
        throw SyntaxError(std::string("expected a predicate name, found ") +
                              describe(current_.kind),
                          current_.pos);
      }
      bucket.add(Literal{std::string(current_.text), negated});
      advance();
      if (current_.kind != Tok::And) break;
      advance();
    }
    return bucket;
  }

  std::int64_t to_int(const Token& tok) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc{}) throw SyntaxError("integer out of range", tok.pos);
    return value;
  }

  Token expect(Tok kind) {
    if (current_.kind != kind) {
      throw SyntaxError(std::string("expected ") + describe(kind) + ", found " +
                            describe(current_.kind),
                        current_.pos);
    }
    Token tok = current_;
    advance();
    return tok;
  }

  void advance() { current_ = lexer_.next(); }

  Lexer lexer_;
  Token current_{Tok::End, 0, {}};
};

void render_bucket(std::string& out, const Bucket& bucket) {
  if (bucket.empty()) {
    out += "true";
    return;
  }
  bool first = true;
  for (const auto& literal : bucket.literals()) {
    if (!first) out += " && ";
    first = false;
    if (literal.negated) out += '!';
    out += literal.predicate;
  }
}

}  // namespace

TemporalRule parse_rule(std::string_view text) { return Parser(text).parse(); }

std::string render_rule(const TemporalRule& rule) {
  std::string out;
  for (std::size_t i = 0; i < rule.buckets.size(); ++i) {
    if (i > 0) {
      const auto& iv = rule.intervals.at(i - 1);
      out += " ##[" + std::to_string(iv.lo) + ":" + std::to_string(iv.hi) + "] ";
    }
    render_bucket(out, rule.buckets[i]);
  }
  out += " |-> ";
  out += rule.effect;
  return out;
}

}  // namespace dialx
