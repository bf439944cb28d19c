#include "dialx/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dialx/error.hpp"

namespace dialx {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

[[noreturn]] void csv_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line) + ": " + what);
}

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted) csv_error(line_no, "unexpected quote");
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      if (was_quoted) csv_error(line_no, "text after closing quote");
      field.push_back(c);
    }
  }
  if (quoted) csv_error(line_no, "unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

void append_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_timestamp(std::string_view text, Timestamp& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return true;
  // Fractional seconds are truncated towards negative infinity.
  double value = 0.0;
  if (!parse_double(text, value)) return false;
  value = std::floor(value);
  if (value < -9.2e18 || value > 9.2e18) return false;
  out = static_cast<Timestamp>(value);
  return true;
}

// Reads one logical record; quoted fields may span physical lines.
bool read_record(std::istream& in, std::string& record, std::size_t& line_no) {
  if (!std::getline(in, record)) return false;
  ++line_no;
  auto quotes = std::count(record.begin(), record.end(), '"');
  std::string next;
  while (quotes % 2 != 0 && std::getline(in, next)) {
    ++line_no;
    record.push_back('\n');
    record.append(next);
    quotes += std::count(next.begin(), next.end(), '"');
  }
  if (!record.empty() && record.back() == '\r') record.pop_back();
  return true;
}

}  // namespace

std::size_t Dataset::event_count() const {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.events.size();
  return n;
}

double quantize(double value) {
  double q = std::round(value * 1e6) / 1e6;
  if (!std::isfinite(q)) return value;
  return q == 0.0 ? 0.0 : q;
}

void check_attribute_range(std::string_view name, double value) {
  auto violation = [&](const char* domain) {
    throw Error(ErrorCode::RangeViolation, "attribute " + std::string(name) + " = " +
                                               format_real(value) + " outside " + domain);
  };
  if (!std::isfinite(value)) violation("the finite reals");
  if (name == kPolarity) {
    if (value < -5.0 || value > 5.0) violation("[-5, 5]");
  } else if (name == kIntensity) {
    if (value < 0.0 || value > 1.0) violation("[0, 1]");
  } else if (starts_with(name, kCategoryPrefix)) {
    if (value < 0.0 || value > 2.0) violation("[0, 2]");
  } else if (ends_with(name, kCountSuffix)) {
    if (value < 0.0 || value != std::floor(value)) violation("the non-negative integers");
  }
}

DialogueTrace validate_trace(std::vector<Event> events, std::string dialogue_id,
                             Outcome outcome) {
  if (events.empty()) {
    throw Error(ErrorCode::EmptyTrace, "dialogue " + dialogue_id + " has no events");
  }
  if (outcome != Outcome::Negative && outcome != Outcome::Positive) {
    throw Error(ErrorCode::RangeViolation, "dialogue " + dialogue_id + ": outcome must be 0 or 1");
  }
  const AttributeMap& reference = events.front().attributes;
  for (auto required : {kPolarity, kIntensity}) {
    if (reference.find(required) == reference.end()) {
      throw Error(ErrorCode::SchemaMismatch, "dialogue " + dialogue_id +
                                                 ": missing required attribute " +
                                                 std::string(required));
    }
  }
  for (auto& event : events) {
    if (event.attributes.size() != reference.size() ||
        !std::equal(event.attributes.begin(), event.attributes.end(), reference.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw Error(ErrorCode::SchemaMismatch,
                  "dialogue " + dialogue_id + ": events carry different attribute sets");
    }
    for (auto& [name, value] : event.attributes) {
      check_attribute_range(name, value);
      value = quantize(value);
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  return DialogueTrace{std::move(dialogue_id), std::move(events), outcome};
}

Dataset make_dataset(std::vector<DialogueTrace> traces, std::vector<std::string> schema) {
  std::set<std::string, std::less<>> names(schema.begin(), schema.end());
  if (names.size() != schema.size()) {
    throw Error(ErrorCode::SchemaMismatch, "schema lists an attribute twice");
  }
  std::set<std::string_view> ids;
  for (const auto& trace : traces) {
    if (!ids.insert(trace.dialogue_id).second) {
      throw Error(ErrorCode::DuplicateDialogue, "duplicate dialogue_id " + trace.dialogue_id);
    }
    for (const auto& event : trace.events) {
      if (event.attributes.size() != names.size() ||
          !std::equal(event.attributes.begin(), event.attributes.end(), names.begin(),
                      [](const auto& a, const auto& b) { return a.first == b; })) {
        throw Error(ErrorCode::SchemaMismatch,
                    "dialogue " + trace.dialogue_id + " does not match the dataset schema");
      }
    }
  }
  return Dataset{std::move(traces), std::move(schema)};
}

Dataset load_traces(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!read_record(in, line, line_no)) {
    throw Error(ErrorCode::MalformedCsv, "empty input: missing header row");
  }
  const auto header = split_record(line, line_no);
  if (header.size() < 4 || header[0] != "dialogue_id" || header[1] != "timestamp" ||
      header[2] != "author_id" || header.back() != "outcome") {
    csv_error(line_no,
              "header must be dialogue_id,timestamp,author_id,<attributes...>,outcome");
  }
  std::vector<std::string> schema(header.begin() + 3, header.end() - 1);
  {
    std::set<std::string_view> seen;
    for (const auto& name : schema) {
      if (name.empty()) csv_error(line_no, "empty attribute name in header");
      if (!seen.insert(name).second) csv_error(line_no, "duplicate column " + name);
    }
  }

  struct Pending {
    std::string id;
    std::vector<Event> events;
    Outcome outcome;
    std::size_t first_line;
  };
  std::vector<Pending> pending;
  std::unordered_map<std::string, std::size_t> index;

  while (read_record(in, line, line_no)) {
    if (line.empty()) continue;
    auto fields = split_record(line, line_no);
    if (fields.size() != header.size()) {
      csv_error(line_no, "expected " + std::to_string(header.size()) + " columns, found " +
                             std::to_string(fields.size()));
    }
    Event event;
    if (!parse_timestamp(fields[1], event.timestamp)) {
      csv_error(line_no, "unparsable timestamp '" + fields[1] + "'");
    }
    event.author_id = std::move(fields[2]);
    for (std::size_t c = 0; c < schema.size(); ++c) {
      double value = 0.0;
      if (!parse_double(fields[c + 3], value)) {
        csv_error(line_no, "unparsable number '" + fields[c + 3] + "' in column " + schema[c]);
      }
      event.attributes.emplace(schema[c], value);
    }
    const std::string& outcome_text = fields.back();
    if (outcome_text != "0" && outcome_text != "1") {
      csv_error(line_no, "outcome must be 0 or 1, found '" + outcome_text + "'");
    }
    Outcome outcome = outcome_text == "1" ? Outcome::Positive : Outcome::Negative;

    auto [it, inserted] = index.try_emplace(fields[0], pending.size());
    if (inserted) {
      pending.push_back(Pending{fields[0], {}, outcome, line_no});
    } else if (pending[it->second].outcome != outcome) {
      throw Error(ErrorCode::InconsistentOutcome,
                  "line " + std::to_string(line_no) + ": dialogue " + fields[0] +
                      " disagrees with the outcome first given on line " +
                      std::to_string(pending[it->second].first_line));
    }
    pending[it->second].events.push_back(std::move(event));
  }

  std::vector<DialogueTrace> traces;
  traces.reserve(pending.size());
  for (auto& p : pending) {
    traces.push_back(validate_trace(std::move(p.events), std::move(p.id), p.outcome));
  }
  return make_dataset(std::move(traces), std::move(schema));
}

Dataset load_traces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return load_traces(in);
}

std::string format_real(double value) {
  char buf[512];
  int n = std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf, static_cast<std::size_t>(n));
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string write_traces(const Dataset& dataset) {
  std::string out = "dialogue_id,timestamp,author_id";
  for (const auto& name : dataset.schema) {
    out.push_back(',');
    append_field(out, name);
  }
  out.append(",outcome\n");
  for (const auto& trace : dataset.traces) {
    for (const auto& event : trace.events) {
      append_field(out, trace.dialogue_id);
      out.push_back(',');
      out.append(std::to_string(event.timestamp));
      out.push_back(',');
      append_field(out, event.author_id);
      for (const auto& name : dataset.schema) {
        out.push_back(',');
        out.append(format_real(event.attributes.find(name)->second));
      }
      out.push_back(',');
      out.push_back(trace.outcome == Outcome::Positive ? '1' : '0');
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace dialx
