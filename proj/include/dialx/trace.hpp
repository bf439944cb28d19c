#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dialx {

using Timestamp = std::int64_t;  // seconds since epoch

using AttributeMap = std::map<std::string, double, std::less<>>;

struct Event {
  Timestamp timestamp = 0;
  std::string author_id;
  AttributeMap attributes;

  bool operator==(const Event&) const = default;
};

// Trace-level outcome label: 1 when the dialogue ends on a positive note.
enum class Outcome : int { Negative = 0, Positive = 1 };

struct DialogueTrace {
  std::string dialogue_id;
  std::vector<Event> events;
  Outcome outcome = Outcome::Positive;

  bool operator==(const DialogueTrace&) const = default;
};

struct Dataset {
  std::vector<DialogueTrace> traces;
  std::vector<std::string> schema;

  bool operator==(const Dataset&) const = default;

  std::size_t event_count() const;
};

inline constexpr std::string_view kPolarity = "polarity";
inline constexpr std::string_view kIntensity = "intensity";
inline constexpr std::string_view kCategoryPrefix = "cat_";
inline constexpr std::string_view kCountSuffix = "_count";

// Attribute values are stored at the precision the CSV format carries.
double quantize(double value);

// Checks `value` against the declared domain of attribute `name`:
// polarity in [-5, 5], intensity in [0, 1], cat_* in [0, 2], *_count a
// non-negative integer, anything else finite. Throws RangeViolation.
void check_attribute_range(std::string_view name, double value);

// Builds a trace from unordered events. Events are stably sorted by timestamp,
// attribute values are quantized, and every event must carry the same key set
// including `polarity` and `intensity`.
DialogueTrace validate_trace(std::vector<Event> events, std::string dialogue_id,
                             Outcome outcome);

// Assembles a dataset, checking that ids are unique and every trace uses
// exactly the attributes listed in `schema`.
Dataset make_dataset(std::vector<DialogueTrace> traces, std::vector<std::string> schema);

Dataset load_traces(std::istream& in);
Dataset load_traces(const std::filesystem::path& path);

std::string write_traces(const Dataset& dataset);

// Fixed-point rendering with at most six decimals and no exponent; integral
// values print bare.
std::string format_real(double value);

}  // namespace dialx
