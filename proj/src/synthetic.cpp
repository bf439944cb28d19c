#include "dialx/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "dialx/featurizer.hpp"

namespace dialx::synthetic {

namespace {

double uniform_real(Rng& rng, double lo, double hi, double step) {
  const auto steps = static_cast<std::int64_t>(std::llround((hi - lo) / step));
  return lo + static_cast<double>(std::uniform_int_distribution<std::int64_t>(0, steps)(rng)) * step;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& options) {
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

std::vector<std::string> default_schema() { return feature_schema(builtin_lexicons()); }

Event random_event(Rng& rng, const std::vector<std::string>& schema, Timestamp timestamp) {
  static const std::vector<double> polarity_edges{-5.0, -1.0, 0.0, 2.5, 4.0, 5.0};
  static const std::vector<double> category_edges{0.0, 1.0, 2.0};
  Event event;
  event.timestamp = timestamp;
  event.author_id = "u" + std::to_string(std::uniform_int_distribution<int>(1, 4)(rng));
  for (const auto& name : schema) {
    double value = 0.0;
    if (name == kPolarity) {
      value = chance(rng, 0.5) ? pick(rng, polarity_edges) : uniform_real(rng, -5.0, 5.0, 0.001);
    } else if (name == kIntensity) {
      value = uniform_real(rng, 0.0, 1.0, 0.01);
    } else if (name.starts_with(kCategoryPrefix)) {
      value = chance(rng, 0.6) ? pick(rng, category_edges) : uniform_real(rng, 0.0, 2.0, 0.01);
    } else if (name.ends_with(kCountSuffix)) {
      value = static_cast<double>(std::uniform_int_distribution<int>(0, 3)(rng));
    } else {
      value = uniform_real(rng, 0.0, 100.0, 0.5);
    }
    event.attributes.emplace(name, value);
  }
  return event;
}

DialogueTrace random_trace(Rng& rng, const std::vector<std::string>& schema,
                           const TraceShape& shape, std::string dialogue_id) {
  const auto count =
      std::uniform_int_distribution<std::size_t>(shape.min_events, shape.max_events)(rng);
  std::vector<Event> events;
  Timestamp t = std::uniform_int_distribution<Timestamp>(0, 1000)(rng);
  for (std::size_t i = 0; i < count; ++i) {
    events.push_back(random_event(rng, schema, t));
    t += std::uniform_int_distribution<std::int64_t>(0, shape.max_gap)(rng);
  }
  const auto outcome = chance(rng, 0.5) ? Outcome::Positive : Outcome::Negative;
  return validate_trace(std::move(events), std::move(dialogue_id), outcome);
}

Dataset random_dataset(Rng& rng, std::size_t traces, const TraceShape& shape) {
  const auto schema = default_schema();
  std::vector<DialogueTrace> out;
  for (std::size_t i = 0; i < traces; ++i) {
    out.push_back(random_trace(rng, schema, shape, "d" + std::to_string(i)));
  }
  return make_dataset(std::move(out), schema);
}

TemporalRule random_rule(Rng& rng, const PredicateSet& predicates, const RuleShape& shape) {
  const auto events = predicates.event_predicates();
  const auto traces = predicates.trace_predicates();
  TemporalRule rule;
  rule.buckets.clear();
  const auto buckets = std::uniform_int_distribution<std::size_t>(1, shape.max_buckets)(rng);
  for (std::size_t b = 0; b < buckets; ++b) {
    Bucket bucket;
    if (!chance(rng, shape.empty_bucket_rate)) {
      const auto literals =
          std::uniform_int_distribution<std::size_t>(1, shape.max_literals_per_bucket)(rng);
      for (std::size_t l = 0; l < literals; ++l) {
        const auto& name = predicates[pick(rng, events)].name;
        if (!bucket.contains(name)) bucket.add({name, chance(rng, 0.4)});
      }
    }
    rule.buckets.push_back(std::move(bucket));
    if (b + 1 < buckets) {
      auto lo = std::uniform_int_distribution<std::int64_t>(0, shape.max_bound)(rng);
      auto hi = std::uniform_int_distribution<std::int64_t>(0, shape.max_bound)(rng);
      if (lo > hi) std::swap(lo, hi);
      rule.intervals.push_back({lo, hi});
    }
  }
  rule.effect = predicates[pick(rng, traces)].name;
  return rule;
}

PlantedData plant_rule(const PlantSpec& spec) {
  static const std::vector<double> low_values{0.0, 0.5, 1.0, 1.5};
  const std::string first = "cat_office";
  const std::string second = "cat_family";
  Rng rng(spec.seed);
  const auto schema = default_schema();

  PlantedData out;
  out.rule = parse_rule("OFFICE_HIGH ##[0:" + std::to_string(spec.k) +
                        "] FAMILY_HIGH |-> SENTIMENT_LOW");

  auto filler = [&](Timestamp t) {
    auto event = random_event(rng, schema, t);
    event.attributes[first] = pick(rng, low_values);
    event.attributes[second] = pick(rng, low_values);
    return event;
  };
  auto special = [&](Timestamp t, const std::string& attribute) {
    auto event = filler(t);
    event.attributes[attribute] = 2.0;
    return event;
  };
  auto between = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };

  const auto planted_count =
      static_cast<std::size_t>(std::llround(spec.planted_fraction * static_cast<double>(spec.traces)));
  std::vector<std::size_t> kinds(spec.traces);
  for (std::size_t i = 0; i < spec.traces; ++i) {
    kinds[i] = i < planted_count ? 0 : 1 + (i - planted_count) % 4;
  }
  std::shuffle(kinds.begin(), kinds.end(), rng);

  std::vector<DialogueTrace> traces;
  for (std::size_t i = 0; i < spec.traces; ++i) {
    // Special events first, then fillers around and between them at the same
    // density everywhere, so only the planted pattern separates the kinds.
    std::vector<Event> events;
    const Timestamp start = between(0, 20000);
    switch (kinds[i]) {
      case 0:  // planted order and gap
        events.push_back(special(start, first));
        events.push_back(special(start + between(500, spec.k - 500), second));
        break;
      case 1:  // reversed
        events.push_back(special(start, second));
        events.push_back(special(start + between(500, 2 * spec.k), first));
        break;
      case 2:
        events.push_back(special(start, first));
        break;
      case 3:
        events.push_back(special(start, second));
        break;
      default:  // right order, beyond the template span
        events.push_back(special(start, first));
        events.push_back(special(start + spec.template_span + between(5000, 15000), second));
        break;
    }
    const Timestamp last = events.back().timestamp;
    Timestamp t = start - between(3, 5) * 3500;
    const Timestamp end = last + between(3, 5) * 3500;
    while (t <= end) {
      events.push_back(filler(t));
      t += between(1000, 6000);
    }
    const auto outcome = kinds[i] == 0 ? Outcome::Negative : Outcome::Positive;
    if (kinds[i] == 0) out.planted.push_back(i);
    traces.push_back(validate_trace(std::move(events), "p" + std::to_string(i), outcome));
  }

  std::vector<std::size_t> order(spec.traces);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const auto noisy =
      static_cast<std::size_t>(std::llround(spec.label_noise * static_cast<double>(spec.traces)));
  out.flipped.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(noisy));
  std::sort(out.flipped.begin(), out.flipped.end());
  for (auto i : out.flipped) {
    auto& trace = traces[i];
    trace.outcome = trace.outcome == Outcome::Positive ? Outcome::Negative : Outcome::Positive;
  }
  out.dataset = make_dataset(std::move(traces), schema);
  return out;
}

}  // namespace dialx::synthetic
