#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dialx/error.hpp"
#include "dialx/trace.hpp"

namespace testing {

// Error code thrown by `fn`, or nullopt when it returns normally.
inline std::optional<dialx::ErrorCode> error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const dialx::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Event with polarity and intensity set; `extra` overrides or adds attributes.
inline dialx::Event event(dialx::Timestamp t,
                          std::initializer_list<std::pair<const char*, double>> extra = {},
                          std::string author = "a") {
  dialx::Event e;
  e.timestamp = t;
  e.author_id = std::move(author);
  e.attributes["polarity"] = 0.0;
  e.attributes["intensity"] = 0.0;
  for (const auto& [name, value] : extra) e.attributes[name] = value;
  return e;
}

// Events carrying the full default schema with neutral values.
inline dialx::Event full_event(dialx::Timestamp t,
                               std::initializer_list<std::pair<const char*, double>> extra = {}) {
  auto e = event(t, {{"cat_aggression", 0.0},
                     {"cat_domestic_work", 0.0},
                     {"cat_family", 0.0},
                     {"cat_medical_emergency", 0.0},
                     {"cat_office", 0.0},
                     {"thank_count", 0.0},
                     {"sorry_count", 0.0}});
  for (const auto& [name, value] : extra) e.attributes[name] = value;
  return e;
}

inline std::vector<std::string> full_schema() {
  return {"polarity",   "intensity",           "cat_aggression", "cat_domestic_work",
          "cat_family", "cat_medical_emergency", "cat_office",   "thank_count",
          "sorry_count"};
}

}  // namespace testing
