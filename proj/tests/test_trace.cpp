#include <doctest.h>

#include <random>
#include <sstream>

#include "dialx/synthetic.hpp"
#include "dialx/trace.hpp"
#include "helpers.hpp"

using namespace dialx;
using testing::error_code;
using testing::event;

namespace {

Dataset load(const std::string& csv) {
  std::istringstream in(csv);
  return load_traces(in);
}

const std::string kHeader = "dialogue_id,timestamp,author_id,polarity,intensity,outcome\n";

}  // namespace

TEST_CASE("validate_trace sorts events by timestamp") {
  auto trace = validate_trace({event(30), event(10), event(20)}, "d", Outcome::Positive);
  REQUIRE(trace.events.size() == 3);
  CHECK(trace.events[0].timestamp == 10);
  CHECK(trace.events[1].timestamp == 20);
  CHECK(trace.events[2].timestamp == 30);
}

TEST_CASE("validate_trace keeps input order for equal timestamps") {
  auto trace = validate_trace({event(5, {}, "b0"), event(1), event(5, {}, "b1"), event(5, {}, "b2")},
                              "d", Outcome::Negative);
  CHECK(trace.events[1].author_id == "b0");
  CHECK(trace.events[2].author_id == "b1");
  CHECK(trace.events[3].author_id == "b2");
}

TEST_CASE("validate_trace rejects bad events") {
  CHECK(error_code([] { validate_trace({}, "d", Outcome::Positive); }) == ErrorCode::EmptyTrace);
  CHECK(error_code([] { validate_trace({event(0, {{"polarity", 7.0}})}, "d", Outcome::Positive); }) ==
        ErrorCode::RangeViolation);
  CHECK(error_code([] { validate_trace({event(0, {{"polarity", -5.01}})}, "d", Outcome::Positive); }) ==
        ErrorCode::RangeViolation);
  CHECK(error_code([] { validate_trace({event(0, {{"intensity", 1.5}})}, "d", Outcome::Positive); }) ==
        ErrorCode::RangeViolation);
  CHECK(error_code([] { validate_trace({event(0, {{"cat_office", 2.01}})}, "d", Outcome::Positive); }) ==
        ErrorCode::RangeViolation);
  CHECK(error_code([] { validate_trace({event(0, {{"thank_count", 1.5}})}, "d", Outcome::Positive); }) ==
        ErrorCode::RangeViolation);
  CHECK(error_code([] { validate_trace({event(0, {{"thank_count", -1}})}, "d", Outcome::Positive); }) ==
        ErrorCode::RangeViolation);
  CHECK(error_code([] {
          validate_trace({event(0, {{"cat_office", 1}}), event(1)}, "d", Outcome::Positive);
        }) == ErrorCode::SchemaMismatch);
  CHECK(error_code([] {
          Event e;
          e.attributes["polarity"] = 0;
          validate_trace({e}, "d", Outcome::Positive);
        }) == ErrorCode::SchemaMismatch);
}

TEST_CASE("validate_trace accepts domain endpoints") {
  auto trace = validate_trace({event(0, {{"polarity", -5}, {"intensity", 1}, {"cat_x", 2}}),
                               event(1, {{"polarity", 5}, {"intensity", 0}, {"cat_x", 0}})},
                              "d", Outcome::Positive);
  CHECK(trace.events.size() == 2);
}

TEST_CASE("load_traces groups rows by dialogue") {
  auto ds = load(kHeader + "a,10,u1,1.5,0.2,1\na,20,u2,-1,0.1,1\n");
  REQUIRE(ds.traces.size() == 1);
  CHECK(ds.traces[0].events.size() == 2);
  CHECK(ds.traces[0].outcome == Outcome::Positive);
  CHECK(ds.schema == std::vector<std::string>{"polarity", "intensity"});
  CHECK(ds.traces[0].events[0].attributes.at("polarity") == 1.5);
}

TEST_CASE("load_traces keeps extra numeric columns in file order") {
  auto ds = load("dialogue_id,timestamp,author_id,polarity,likes,intensity,outcome\n"
                 "a,1,u,0,12,0.5,0\n");
  CHECK(ds.schema == std::vector<std::string>{"polarity", "likes", "intensity"});
  CHECK(ds.traces[0].events[0].attributes.at("likes") == 12);
}

TEST_CASE("load_traces rejects malformed input") {
  CHECK(error_code([] { load(kHeader + "a,1,u,0,0,2\n"); }) == ErrorCode::MalformedCsv);
  CHECK(error_code([] { load(kHeader + "a,1,u,0,0\n"); }) == ErrorCode::MalformedCsv);
  CHECK(error_code([] { load(kHeader + "a,1,u,zero,0,1\n"); }) == ErrorCode::MalformedCsv);
  CHECK(error_code([] { load(kHeader + "a,noon,u,0,0,1\n"); }) == ErrorCode::MalformedCsv);
  CHECK(error_code([] { load(kHeader + "a,1,u,0,0,1\na,2,u,0,0,0\n"); }) ==
        ErrorCode::InconsistentOutcome);
  CHECK(error_code([] { load(""); }) == ErrorCode::MalformedCsv);
  CHECK(error_code([] { load("dialogue_id,timestamp,outcome\n"); }) == ErrorCode::MalformedCsv);
}

TEST_CASE("load_traces drops sub-second precision") {
  auto ds = load(kHeader + "a,10.9,u,0,0,1\n");
  CHECK(ds.traces[0].events[0].timestamp == 10);
}

TEST_CASE("load_traces reads 229 rows across 10 dialogues") {
  std::string csv = kHeader;
  std::size_t rows = 0;
  for (int d = 0; d < 10; ++d) {
    const int count = d < 9 ? 23 : 229 - 9 * 23;
    for (int r = 0; r < count; ++r, ++rows) {
      csv += "blog" + std::to_string(d) + "," + std::to_string(1000 * r) + ",u" + std::to_string(r % 3) +
             ",0.5,0.25," + std::to_string(d % 2) + "\n";
    }
  }
  REQUIRE(rows == 229);
  auto ds = load(csv);
  CHECK(ds.traces.size() == 10);
  CHECK(ds.event_count() == 229);
}

TEST_CASE("write_traces on an empty dataset is the header only") {
  Dataset ds;
  ds.schema = testing::full_schema();
  CHECK(write_traces(ds) ==
        "dialogue_id,timestamp,author_id,polarity,intensity,cat_aggression,cat_domestic_work,"
        "cat_family,cat_medical_emergency,cat_office,thank_count,sorry_count,outcome\n");
}

TEST_CASE("write_traces serializes reals without exponent") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(1e-7) == "0");
  CHECK(format_real(-4.5) == "-4.5");
  CHECK(format_real(0.123456) == "0.123456");
  CHECK(format_real(1234567.0) == "1234567");
}

TEST_CASE("write then load is the identity") {
  synthetic::Rng rng(11);
  for (int round = 0; round < 25; ++round) {
    auto ds = synthetic::random_dataset(rng, 1 + round % 6, {1, 10, 5000});
    auto csv = write_traces(ds);
    CHECK(load(csv) == ds);
    CHECK(write_traces(ds) == csv);
  }
}

TEST_CASE("quoted fields survive the round trip") {
  auto trace = validate_trace({event(1, {}, "smith, \"jr\""), event(2, {}, "line\nbreak")},
                              "id,with,commas", Outcome::Negative);
  auto ds = make_dataset({trace}, {"polarity", "intensity"});
  auto csv = write_traces(ds);
  CHECK(load(csv) == ds);
}

TEST_CASE("make_dataset rejects duplicate ids and schema drift") {
  auto a = validate_trace({event(1)}, "a", Outcome::Positive);
  CHECK(error_code([&] { make_dataset({a, a}, {"polarity", "intensity"}); }) ==
        ErrorCode::DuplicateDialogue);
  CHECK(error_code([&] { make_dataset({a}, {"polarity", "intensity", "likes"}); }) ==
        ErrorCode::SchemaMismatch);
}
