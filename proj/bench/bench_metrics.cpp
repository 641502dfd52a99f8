// Serial vs OpenMP metric snapshot on a large synthetic ledger.
// Run: ./bench_metrics

#include <benchmark/benchmark.h>

#include "fastrec/data_io.hpp"
#include "fastrec/metrics.hpp"
#include "fastrec/simulator.hpp"
#include "fastrec/strategies.hpp"

using namespace fastrec;

namespace {

struct Fixture {
  Dataset ds;
  FairnessLedger ledger;
  RoundOutcome outcome;

  explicit Fixture(int n_users) {
    SyntheticSpec spec;
    spec.regime = Regime::Popular;
    spec.n_users = n_users;
    spec.n_services = std::max(50, n_users / 16);  // keeps the demand bands feasible
    spec.seed = 7;
    ds = generate_synthetic(spec);
    ScenarioConfig config;
    config.strategy = "f-fast";
    config.rounds = 10;
    run_scenario(config, ds, &ledger);
    std::vector<int> users(n_users);
    for (int u = 0; u < n_users; ++u) users[u] = u;
    RoundContext ctx{ds.lists, ds.catalog, ds.ratings, ledger, users};
    outcome = f_fast_round(ctx);
  }
};

Fixture& fixture(int n_users) {
  static Fixture f8k(n_users);
  return f8k;
}

void snapshot_serial(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto snap = compute_snapshot_serial(f.ledger, f.ds.lists, f.ds.ratings,
                                        f.outcome);
    benchmark::DoNotOptimize(snap.fairness_variance);
  }
}

void snapshot_parallel(benchmark::State& state) {
  auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto snap = compute_snapshot_parallel(f.ledger, f.ds.lists, f.ds.ratings,
                                          f.outcome);
    benchmark::DoNotOptimize(snap.fairness_variance);
  }
}

}  // namespace

BENCHMARK(snapshot_serial)->Arg(8000);
BENCHMARK(snapshot_parallel)->Arg(8000);

BENCHMARK_MAIN();
