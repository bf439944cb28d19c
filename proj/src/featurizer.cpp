#include "dialx/featurizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "dialx/error.hpp"
#include "dialx/parallel.hpp"
#include "lexicon_internal.hpp"

namespace dialx {

namespace {

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::islower(u) || std::isdigit(u) || c == '_';
  });
}

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string id_field(const nlohmann::json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::MalformedInput,
                "line " + std::to_string(line_no) + ": missing key '" + key + "'");
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw Error(ErrorCode::MalformedInput,
              "line " + std::to_string(line_no) + ": '" + key + "' must be a string");
}

}  // namespace

void validate_lexicon(const LexiconSet& lexicon) {
  for (const auto& [token, weight] : lexicon.sentiment) {
    if (!(weight >= -1.0 && weight <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig,
                  "sentiment weight for '" + token + "' outside [-1, 1]");
    }
  }
  for (const auto& [name, tokens] : lexicon.categories) {
    if (!is_identifier(name)) {
      throw Error(ErrorCode::InvalidConfig, "category name '" + name + "' is not a lowercase identifier");
    }
    if (tokens.empty()) {
      throw Error(ErrorCode::InvalidConfig, "category '" + name + "' has no tokens");
    }
  }
  for (const auto& keyword : lexicon.keywords) {
    if (!is_identifier(keyword)) {
      throw Error(ErrorCode::InvalidConfig, "keyword '" + keyword + "' is not lowercase");
    }
  }
  if (!(lexicon.category_scale > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "category scale must be positive");
  }
}

LexiconSet parse_sentiment_and_categories(
    std::string_view sentiment_tsv,
    const std::vector<std::pair<std::string, std::string>>& category_files) {
  LexiconSet lexicon;
  std::istringstream tsv{std::string(sentiment_tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(tsv, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto tab = text.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig,
                  "sentiment.tsv line " + std::to_string(line_no) + ": expected token<TAB>weight");
    }
    auto token = lowercase(trim(std::string_view(text).substr(0, tab)));
    auto weight_text = trim(std::string_view(text).substr(tab + 1));
    std::size_t used = 0;
    double weight = 0.0;
    try {
      weight = std::stod(weight_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != weight_text.size()) {
      throw Error(ErrorCode::InvalidConfig,
                  "sentiment.tsv line " + std::to_string(line_no) + ": bad weight");
    }
    lexicon.sentiment[token] = weight;
  }
  for (const auto& [name, content] : category_files) {
    auto& tokens = lexicon.categories[name];
    std::istringstream in(content);
    while (std::getline(in, line)) {
      auto token = lowercase(trim(line));
      if (token.empty() || token.front() == '#') continue;
      tokens.insert(std::move(token));
    }
  }
  validate_lexicon(lexicon);
  return lexicon;
}

LexiconSet load_lexicons(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, "lexicon directory not found: " + dir.string());
  }
  std::vector<std::pair<std::string, std::string>> categories;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      categories.emplace_back(entry.path().stem().string(), read_file(entry.path()));
    }
  }
  std::sort(categories.begin(), categories.end());
  return parse_sentiment_and_categories(read_file(dir / "sentiment.tsv"), categories);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

SentimentScore score_sentiment(const std::vector<std::string>& tokens, const LexiconSet& lexicon) {
  double sum = 0.0;
  std::size_t bearing = 0;
  for (const auto& token : tokens) {
    if (auto it = lexicon.sentiment.find(token); it != lexicon.sentiment.end()) {
      sum += it->second;
      ++bearing;
    }
  }
  if (bearing == 0) return {};
  double polarity = std::clamp(5.0 * sum / static_cast<double>(bearing), -5.0, 5.0);
  return {polarity, static_cast<double>(bearing) / static_cast<double>(tokens.size())};
}

std::map<std::string, double, std::less<>> score_categories(
    const std::vector<std::string>& tokens, const LexiconSet& lexicon) {
  std::map<std::string, double, std::less<>> out;
  const double total = static_cast<double>(std::max<std::size_t>(1, tokens.size()));
  for (const auto& [name, set] : lexicon.categories) {
    auto hits = std::count_if(tokens.begin(), tokens.end(),
                              [&](const std::string& t) { return set.contains(t); });
    out[name] = std::clamp(lexicon.category_scale * static_cast<double>(hits) / total, 0.0, 2.0);
  }
  return out;
}

std::size_t count_keyword(const std::vector<std::string>& tokens, std::string_view keyword) {
  return static_cast<std::size_t>(std::count(tokens.begin(), tokens.end(), keyword));
}

std::vector<std::string> feature_schema(const LexiconSet& lexicon) {
  std::vector<std::string> schema{std::string(kPolarity), std::string(kIntensity)};
  for (const auto& [name, tokens] : lexicon.categories) {
    schema.push_back(std::string(kCategoryPrefix) + name);
  }
  for (const auto& keyword : lexicon.keywords) {
    schema.push_back(keyword + std::string(kCountSuffix));
  }
  return schema;
}

Event featurize_message(const RawMessage& message, const LexiconSet& lexicon) {
  const auto tokens = tokenize(message.text);
  Event event;
  event.timestamp = message.timestamp;
  event.author_id = message.author_id;
  auto sentiment = score_sentiment(tokens, lexicon);
  event.attributes.emplace(kPolarity, sentiment.polarity);
  event.attributes.emplace(kIntensity, sentiment.intensity);
  for (const auto& [name, value] : score_categories(tokens, lexicon)) {
    event.attributes.emplace(std::string(kCategoryPrefix) + name, value);
  }
  for (const auto& keyword : lexicon.keywords) {
    event.attributes.emplace(keyword + std::string(kCountSuffix),
                             static_cast<double>(count_keyword(tokens, keyword)));
  }
  return event;
}

DialogueTrace featurize_dialogue(const std::vector<RawMessage>& messages,
                                 const LexiconSet& lexicon) {
  if (messages.empty()) throw Error(ErrorCode::EmptyDialogue, "dialogue has no messages");
  const std::string& id = messages.front().dialogue_id;
  std::vector<Event> events;
  events.reserve(messages.size());
  for (const auto& message : messages) {
    if (message.dialogue_id != id) {
      throw Error(ErrorCode::MixedDialogueIds,
                  "messages from dialogues " + id + " and " + message.dialogue_id + " mixed");
    }
    events.push_back(featurize_message(message, lexicon));
  }
  auto trace = validate_trace(std::move(events), id, Outcome::Positive);
  // Stable ordering puts the last-given message of a timestamp tie at the end.
  double final_polarity = trace.events.back().attributes.find(kPolarity)->second;
  trace.outcome = final_polarity >= 0.0 ? Outcome::Positive : Outcome::Negative;
  return trace;
}

Dataset featurize_corpus(const std::vector<RawMessage>& messages, const LexiconSet& lexicon) {
  std::vector<std::vector<RawMessage>> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& message : messages) {
    auto [it, inserted] = index.try_emplace(message.dialogue_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(message);
  }
  std::vector<DialogueTrace> traces(groups.size());
  parallel_for_each(groups.size(), [&](std::size_t i) {
    traces[i] = featurize_dialogue(groups[i], lexicon);
  });
  return make_dataset(std::move(traces), feature_schema(lexicon));
}

std::vector<RawMessage> read_messages(std::istream& in) {
  std::vector<RawMessage> messages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) {
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + ": expected a JSON object");
    }
    RawMessage message;
    message.dialogue_id = id_field(obj, "dialogue_id", line_no);
    message.author_id = id_field(obj, "author_id", line_no);
    auto ts = obj.find("timestamp");
    if (ts == obj.end() || !ts->is_number()) {
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + ": 'timestamp' must be a number");
    }
    if (ts->is_number_float()) {
      message.timestamp = static_cast<Timestamp>(std::floor(ts->get<double>()));
    } else {
      message.timestamp = ts->get<Timestamp>();
    }
    auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) {
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + ": 'text' must be a string");
    }
    message.text = text->get<std::string>();
    messages.push_back(std::move(message));
  }
  return messages;
}

}  // namespace dialx
