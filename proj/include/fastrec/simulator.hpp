#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fastrec/core.hpp"
#include "fastrec/data_io.hpp"
#include "fastrec/metrics.hpp"

namespace fastrec {

enum class Participation { Fixed, Bernoulli, Trace };

struct ScenarioConfig {
  std::string strategy = "f-fast";  // f-fast|d-fast|quality-max|exact|random
  int rounds = 100;
  Participation participation = Participation::Fixed;
  double fraction = 1.0;            // bernoulli only
  ParticipationTrace trace;         // trace only
  std::uint64_t seed = 0;
  int metric_cadence = 1;
  int exact_guard = 20;
  // The injected user sits in the dataset but is excluded from every round
  // up to and including inject_round.
  std::optional<int> inject_user;
  std::optional<int> inject_round;
  std::optional<int> track_user;
};

struct MetricsRow {
  int round = 0;
  double variance = 0.0;
  double total_quality = 0.0;
  double mean_quality = 0.0;
  std::optional<double> tracked_fairness;
};

struct MetricsLog {
  std::string strategy;
  bool has_tracked = false;
  std::vector<MetricsRow> rows;

  std::string to_csv() const;
};
MetricsLog parse_metrics_log(const std::string& csv);

bool known_strategy(const std::string& name);

/// Invoked after each committed round with the up-to-date ledger.
using RoundObserver =
    std::function<void(int round, const FairnessLedger&, const RoundOutcome&)>;

/// Runs one multi-round scenario. The ledger argument is optional scaffolding
/// for callers that want to inspect final state; pass nullptr otherwise.
MetricsLog run_scenario(const ScenarioConfig& config, const Dataset& dataset,
                        FairnessLedger* final_ledger = nullptr,
                        const RoundObserver& observer = {});

/// Commits one round into the ledger: participation for every participant,
/// appearance counts for output-top-window services that belong to the
/// user's original top window (fillers never count), then recomputes the
/// stored fairness values from scratch.
void commit_round(FairnessLedger& ledger, const OriginalLists& lists,
                  const RoundOutcome& outcome);

}  // namespace fastrec
