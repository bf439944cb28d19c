#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dialx/error.hpp"
#include "dialx/featurizer.hpp"
#include "helpers.hpp"

using namespace dialx;
using testing::error_code;

namespace {

LexiconSet tiny_lexicon() {
  LexiconSet lex;
  lex.sentiment = {{"great", 0.8}, {"good", 0.5}, {"bad", -0.5}, {"awful", -1.0}, {"fine", 0.0}};
  lex.categories["office"] = {"desk", "boss", "meeting"};
  lex.categories["family"] = {"mom", "kids"};
  return lex;
}

// Independent formula check: walks the tokens once with plain arithmetic.
SentimentScore sentiment_oracle(const std::vector<std::string>& tokens, const LexiconSet& lex) {
  double sum = 0;
  int n = 0;
  for (const auto& t : tokens) {
    for (const auto& [word, weight] : lex.sentiment) {
      if (word == t) {
        sum += weight;
        ++n;
      }
    }
  }
  if (n == 0) return {0, 0};
  double p = 5 * sum / n;
  if (p > 5) p = 5;
  if (p < -5) p = -5;
  return {p, double(n) / double(tokens.size())};
}

RawMessage msg(std::string id, Timestamp t, std::string text) {
  return {std::move(id), t, "u", std::move(text)};
}

}  // namespace

TEST_CASE("tokenize splits on non-alphanumeric runs and lowercases") {
  CHECK(tokenize("Thank you, thank YOU!") == std::vector<std::string>{"thank", "you", "thank", "you"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("medical-emergency @ 3pm") == std::vector<std::string>{"medical", "emergency", "3pm"});
  CHECK(tokenize("caf\xc3\xa9 ok") == std::vector<std::string>{"caf", "ok"});
  CHECK(tokenize("  ,,, ").empty());
}

TEST_CASE("score_sentiment follows the scaled mean") {
  auto lex = tiny_lexicon();
  auto s = score_sentiment({"great"}, lex);
  CHECK(s.polarity == doctest::Approx(4.0));
  CHECK(s.intensity == doctest::Approx(1.0));

  s = score_sentiment({}, lex);
  CHECK(s.polarity == 0.0);
  CHECK(s.intensity == 0.0);

  lex.sentiment["plus"] = 0.5;
  lex.sentiment["minus"] = -0.5;
  std::vector<std::string> ten{"plus", "a", "b", "c", "minus", "d", "e", "f", "g", "h"};
  s = score_sentiment(ten, lex);
  auto expected = sentiment_oracle(ten, lex);
  CHECK(s.polarity == doctest::Approx(expected.polarity));
  CHECK(s.intensity == doctest::Approx(expected.intensity));
  CHECK(s.polarity == doctest::Approx(0.0));
  CHECK(s.intensity == doctest::Approx(0.2));
}

TEST_CASE("score_sentiment matches the oracle on the built-in lexicon") {
  const auto& lex = builtin_lexicons();
  const char* texts[] = {"great great awful meeting", "Terrible, terrible day at the office!",
                         "nothing to see", "happy happy happy kids", "sad and awful but good"};
  for (const char* text : texts) {
    auto tokens = tokenize(text);
    auto s = score_sentiment(tokens, lex);
    auto o = sentiment_oracle(tokens, lex);
    CHECK(s.polarity == doctest::Approx(o.polarity));
    CHECK(s.intensity == doctest::Approx(o.intensity));
  }
}

TEST_CASE("score_categories scales and clamps") {
  auto lex = tiny_lexicon();
  std::vector<std::string> none{"a", "b"};
  for (const auto& [name, value] : score_categories(none, lex)) CHECK(value == 0.0);

  std::vector<std::string> ten(10, "x");
  ten[3] = "desk";
  CHECK(score_categories(ten, lex).at("office") == doctest::Approx(2.0));  // 20 * 0.1

  std::vector<std::string> forty(40, "x");
  forty[7] = "mom";
  CHECK(score_categories(forty, lex).at("family") == doctest::Approx(0.5));

  std::vector<std::string> five{"desk", "boss", "x", "y", "z"};
  CHECK(score_categories(five, lex).at("office") == doctest::Approx(2.0));  // 8 clamped
  CHECK(score_categories({}, lex).at("office") == 0.0);
}

TEST_CASE("score_categories never decreases when a hit is added") {
  auto lex = tiny_lexicon();
  std::vector<std::string> tokens(80, "x");
  double previous = score_categories(tokens, lex).at("office");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    tokens[i] = "boss";
    double now = score_categories(tokens, lex).at("office");
    CHECK(now >= previous);
    if (previous < 2.0) CHECK(now > previous);
    previous = now;
  }
}

TEST_CASE("count_keyword uses token equality") {
  CHECK(count_keyword({"thank", "you", "thank"}, "thank") == 2);
  CHECK(count_keyword({"thankful"}, "thank") == 0);
  auto tokens = tokenize("Thank you! Thank you so much, really, thank you for the help.");
  CHECK(count_keyword(tokens, "thank") == 3);
}

TEST_CASE("featurize_dialogue labels the outcome from the final message") {
  auto lex = tiny_lexicon();
  auto t = featurize_dialogue({msg("d", 1, "great job")}, lex);
  CHECK(t.outcome == Outcome::Positive);
  CHECK(t.events[0].attributes.at("polarity") == doctest::Approx(4.0));

  t = featurize_dialogue({msg("d", 1, "great"), msg("d", 5, "fine fine awful fine fine")}, lex);
  CHECK(t.events.back().attributes.at("polarity") == doctest::Approx(-1.0));
  CHECK(t.outcome == Outcome::Negative);

  // No sentiment tokens: polarity 0, labelled positive.
  t = featurize_dialogue({msg("d", 1, "awful"), msg("d", 2, "the desk")}, lex);
  CHECK(t.events.back().attributes.at("polarity") == 0.0);
  CHECK(t.outcome == Outcome::Positive);

  // Order follows timestamps, not input order.
  t = featurize_dialogue({msg("d", 9, "great"), msg("d", 2, "awful")}, lex);
  CHECK(t.outcome == Outcome::Positive);
}

TEST_CASE("featurize_dialogue rejects empty and mixed input") {
  auto lex = tiny_lexicon();
  CHECK(error_code([&] { featurize_dialogue({}, lex); }) == ErrorCode::EmptyDialogue);
  CHECK(error_code([&] { featurize_dialogue({msg("a", 1, "x"), msg("b", 2, "y")}, lex); }) ==
        ErrorCode::MixedDialogueIds);
}

TEST_CASE("featurized events satisfy the trace ranges") {
  const auto& lex = builtin_lexicons();
  std::vector<RawMessage> messages;
  const char* texts[] = {"", "awful awful awful", "great excellent perfect",
                         "office boss meeting desk family mom kids hospital doctor",
                         "thank thank thank sorry", "!!!"};
  Timestamp t = 0;
  for (const char* text : texts) messages.push_back(msg("d", t += 10, text));
  auto trace = featurize_dialogue(messages, lex);
  for (const auto& e : trace.events) {
    for (const auto& [name, value] : e.attributes) CHECK_NOTHROW(check_attribute_range(name, value));
  }
}

TEST_CASE("featurize_corpus is deterministic and groups by first appearance") {
  const auto& lex = builtin_lexicons();
  std::vector<RawMessage> messages{msg("b", 1, "great"), msg("a", 2, "awful"), msg("b", 3, "thanks")};
  auto first = write_traces(featurize_corpus(messages, lex));
  auto second = write_traces(featurize_corpus(messages, lex));
  CHECK(first == second);
  auto ds = featurize_corpus(messages, lex);
  REQUIRE(ds.traces.size() == 2);
  CHECK(ds.traces[0].dialogue_id == "b");
  CHECK(ds.traces[0].events.size() == 2);
  CHECK(ds.schema == feature_schema(lex));
}

TEST_CASE("built-in lexicons cover the five experiment categories") {
  const auto& lex = builtin_lexicons();
  for (const char* c : {"office", "domestic_work", "medical_emergency", "family", "aggression"}) {
    CHECK(lex.categories.contains(c));
  }
  CHECK(lex.sentiment.size() >= 200);
  CHECK(load_lexicons(DIALX_SOURCE_DIR "/data/lexicons").sentiment == lex.sentiment);
  CHECK(load_lexicons(DIALX_SOURCE_DIR "/data/lexicons").categories == lex.categories);
}

TEST_CASE("validate_lexicon rejects bad lexicons") {
  auto lex = tiny_lexicon();
  lex.sentiment["huge"] = 1.5;
  CHECK(error_code([&] { validate_lexicon(lex); }) == ErrorCode::InvalidConfig);
  lex = tiny_lexicon();
  lex.categories["Bad Name"] = {"x"};
  CHECK(error_code([&] { validate_lexicon(lex); }) == ErrorCode::InvalidConfig);
  lex = tiny_lexicon();
  lex.categories["empty"] = {};
  CHECK(error_code([&] { validate_lexicon(lex); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("read_messages parses JSON Lines") {
  std::istringstream in(
      "{\"dialogue_id\": \"d1\", \"timestamp\": 100, \"author_id\": \"u\", \"text\": \"hi\"}\n"
      "\n"
      "{\"dialogue_id\": 7, \"timestamp\": 100.9, \"author_id\": 3, \"text\": \"\"}\n");
  auto messages = read_messages(in);
  REQUIRE(messages.size() == 2);
  CHECK(messages[1].dialogue_id == "7");
  CHECK(messages[1].timestamp == 100);
  CHECK(messages[1].text.empty());

  std::istringstream bad("{\"dialogue_id\": \"d\", \"timestamp\": 1, \"author_id\": \"u\", \"text\": \"x\"}\n"
                         "{\"dialogue_id\": \"d\", \"timestamp\": \"noon\", \"author_id\": \"u\", \"text\": \"x\"}\n");
  try {
    read_messages(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedInput);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream garbage("not json\n");
  CHECK(error_code([&] { read_messages(garbage); }) == ErrorCode::MalformedInput);
}
