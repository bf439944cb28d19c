// Serial reference versus OpenMP kernels on synthetic data.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "dialx/matching.hpp"
#include "dialx/miner.hpp"
#include "dialx/synthetic.hpp"

using namespace dialx;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void report(const char* kernel, double serial, double parallel, bool equal) {
  std::printf("%-16s %10.4f %10.4f %8.2fx  %s\n", kernel, serial, parallel, serial / parallel,
              equal ? "equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialx kernel benchmark"};
  std::size_t traces = 2000;
  std::size_t events = 60;
  std::size_t mine_traces = 150;
  int reps = 3;
  app.add_option("--traces", traces, "Traces for rule evaluation")->capture_default_str();
  app.add_option("--events", events, "Maximum events per trace")->capture_default_str();
  app.add_option("--mine-traces", mine_traces, "Traces for the planted mining run")->capture_default_str();
  app.add_option("--reps", reps, "Repetitions (best time reported)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  synthetic::Rng rng(99);
  auto ds = synthetic::random_dataset(rng, traces, {events / 2, events, 4000});
  auto preds = compile_predicates(default_predicate_config(), ds.schema);
  DatasetTruth truth(ds, preds);
  auto rule = compile_rule(
      parse_rule("OFFICE_LOW ##[0:10000] !FAMILY_ABSENT ##[0:20000] SENTIMENT_LOW_POS |-> SENTIMENT_HIGH"), preds);

  std::printf("threads=%d traces=%zu events<=%zu\n", omp_get_max_threads(), traces, events);
  std::printf("%-16s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");

  RuleMetrics ms, mp;
  double s = best_of(reps, [&] { ms = evaluate_rule_serial(rule, truth); });
  double p = best_of(reps, [&] { mp = evaluate_rule(rule, truth); });
  report("evaluate_rule", s, p, ms == mp);

  std::vector<std::size_t> ts, tp;
  s = best_of(reps, [&] { ts = matched_traces_serial(rule, truth); });
  p = best_of(reps, [&] { tp = matched_traces(rule, truth); });
  report("matched_traces", s, p, ts == tp);

  synthetic::PlantSpec spec;
  spec.traces = mine_traces;
  auto planted = synthetic::plant_rule(spec);
  MinerConfig config;
  config.target_effect = planted.rule.effect;
  std::vector<MinedRule> rs, rp;
  config.parallel = false;
  s = best_of(1, [&] { rs = mine(planted.dataset, config, preds); });
  config.parallel = true;
  p = best_of(1, [&] { rp = mine(planted.dataset, config, preds); });
  bool same = rs.size() == rp.size();
  for (std::size_t i = 0; same && i < rs.size(); ++i) same = rs[i].rule == rp[i].rule && rs[i].metrics == rp[i].metrics;
  report("mine", s, p, same);
  return 0;
}
