#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialx/trace.hpp"

namespace dialx {

struct RawMessage {
  std::string dialogue_id;
  Timestamp timestamp = 0;
  std::string author_id;
  std::string text;
};

using TokenSet = std::set<std::string, std::less<>>;

struct LexiconSet {
  std::map<std::string, double, std::less<>> sentiment;  // token -> weight in [-1, 1]
  std::map<std::string, TokenSet, std::less<>> categories;
  std::vector<std::string> keywords{"thank", "sorry"};
  double category_scale = 20.0;
};

struct SentimentScore {
  double polarity = 0.0;   // [-5, 5]
  double intensity = 0.0;  // [0, 1]
};

// Throws InvalidConfig when a category name is not a lowercase identifier, a
// token set is empty, or a sentiment weight lies outside [-1, 1].
void validate_lexicon(const LexiconSet& lexicon);

// Lexicons compiled into the library (same content as data/lexicons/).
const LexiconSet& builtin_lexicons();

// Reads `sentiment.tsv` and every `<category>.txt` in `dir`.
LexiconSet load_lexicons(const std::filesystem::path& dir);

// Lowercased maximal runs of ASCII alphanumerics; every other byte separates.
std::vector<std::string> tokenize(std::string_view text);

SentimentScore score_sentiment(const std::vector<std::string>& tokens, const LexiconSet& lexicon);

std::map<std::string, double, std::less<>> score_categories(
    const std::vector<std::string>& tokens, const LexiconSet& lexicon);

std::size_t count_keyword(const std::vector<std::string>& tokens, std::string_view keyword);

// Attribute names emitted for a lexicon, in CSV column order:
// polarity, intensity, cat_<category>..., <keyword>_count...
std::vector<std::string> feature_schema(const LexiconSet& lexicon);

Event featurize_message(const RawMessage& message, const LexiconSet& lexicon);

// One event per message. The outcome is positive iff the polarity of the
// latest message (input order breaks timestamp ties) is >= 0.
DialogueTrace featurize_dialogue(const std::vector<RawMessage>& messages,
                                 const LexiconSet& lexicon);

// Groups messages by dialogue_id in order of first appearance and featurizes
// each group. Dialogues are processed in parallel.
Dataset featurize_corpus(const std::vector<RawMessage>& messages, const LexiconSet& lexicon);

// JSON Lines with keys dialogue_id, timestamp, author_id, text. Errors carry
// the 1-based line number.
std::vector<RawMessage> read_messages(std::istream& in);

}  // namespace dialx
