#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dialx/predicates.hpp"
#include "dialx/rule.hpp"
#include "dialx/trace.hpp"

// Seeded generators for property tests, benchmarks and acceptance runs.
namespace dialx::synthetic {

using Rng = std::mt19937_64;

// Attribute schema of the built-in lexicons.
std::vector<std::string> default_schema();

struct TraceShape {
  std::size_t min_events = 1;
  std::size_t max_events = 12;
  // Gap between consecutive events is drawn from [0, max_gap]; zero gaps
  // produce timestamp ties.
  std::int64_t max_gap = 20;
};

// Attribute values are drawn with extra mass on the default bin boundaries.
Event random_event(Rng& rng, const std::vector<std::string>& schema, Timestamp timestamp);
DialogueTrace random_trace(Rng& rng, const std::vector<std::string>& schema,
                           const TraceShape& shape, std::string dialogue_id);
Dataset random_dataset(Rng& rng, std::size_t traces, const TraceShape& shape);

struct RuleShape {
  std::size_t max_buckets = 3;
  std::size_t max_literals_per_bucket = 2;
  std::int64_t max_bound = 40;  // interval bounds drawn from [0, max_bound]
  double empty_bucket_rate = 0.15;
};

// Random rule over the event predicates of `predicates`, effect drawn from
// its trace predicates.
TemporalRule random_rule(Rng& rng, const PredicateSet& predicates, const RuleShape& shape);

struct PlantSpec {
  std::size_t traces = 150;
  double planted_fraction = 0.4;
  double label_noise = 0.1;
  std::int64_t k = 10000;
  std::int64_t template_span = 30000;  // n * k of the miner run
  std::uint64_t seed = 7;
};

// Traces where `first ##[0:k] second` occurs get the negative outcome and all
// others the positive one before noise. Decoy traces contain the two events
// in the wrong order, only one of them, or too far apart. Exactly
// round(label_noise * traces) labels are then flipped.
struct PlantedData {
  Dataset dataset;
  TemporalRule rule;
  std::vector<std::size_t> planted;  // indices of traces the planted rule matches
  std::vector<std::size_t> flipped;
};

PlantedData plant_rule(const PlantSpec& spec);

}  // namespace dialx::synthetic
