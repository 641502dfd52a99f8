#include "fastrec/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "fastrec/strategies.hpp"

namespace fastrec {

bool known_strategy(const std::string& name) {
  return name == "f-fast" || name == "d-fast" || name == "quality-max" ||
         name == "exact" || name == "random";
}

void commit_round(FairnessLedger& ledger, const OriginalLists& lists,
                  const RoundOutcome& outcome) {
  ++ledger.round;
  for (size_t k = 0; k < outcome.users.size(); ++k) {
    const int u = outcome.users[k];
    ++ledger.participation[u];
    const int window = std::min<int>(lists.topn,
                                     static_cast<int>(outcome.lists[k].size()));
    for (int pos = 0; pos < window; ++pos) {
      const int j = outcome.lists[k][pos];
      if (lists.in_top_window(u, j)) ++ledger.appearances[u][j];
    }
  }
  // Stored fairness is always the from-scratch value; incremental shortcuts
  // would have to be revalidated against this anyway.
  const std::vector<double> p = service_probabilities(ledger, lists);
  for (int u = 0; u < ledger.user_count(); ++u) {
    if (ledger.participation[u] > 0) {
      double f = 0.0;
      const double part = static_cast<double>(ledger.participation[u]);
      for (int j : lists.top[u]) {
        if (p[j] <= 0.0) continue;
        const double p_ij = ledger.appearance_count(u, j) / part;
        f += (p_ij - p[j]) / p[j];
      }
      ledger.stored_fairness[u] = f;
    }
  }
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string MetricsLog::to_csv() const {
  std::string out = "round,strategy,variance,total_quality,mean_quality";
  if (has_tracked) out += ",tracked_user_F";
  out += "\n";
  for (const auto& row : rows) {
    out += std::to_string(row.round) + "," + strategy + "," +
           format_double(row.variance) + "," +
           format_double(row.total_quality) + "," +
           format_double(row.mean_quality);
    if (has_tracked) {
      out += ",";
      if (row.tracked_fairness) out += format_double(*row.tracked_fairness);
    }
    out += "\n";
  }
  return out;
}

MetricsLog parse_metrics_log(const std::string& csv) {
  MetricsLog log;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty metrics log");
  log.has_tracked = line.find("tracked_user_F") != std::string::npos;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        f.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    f.push_back(cur);
    if (f.size() < 5) {
      throw DataError("metrics log line " + std::to_string(lineno) +
                      ": expected >= 5 fields");
    }
    MetricsRow row;
    row.round = std::stoi(f[0]);
    log.strategy = f[1];
    row.variance = std::stod(f[2]);
    row.total_quality = std::stod(f[3]);
    row.mean_quality = std::stod(f[4]);
    if (f.size() >= 6 && !f[5].empty()) row.tracked_fairness = std::stod(f[5]);
    log.rows.push_back(row);
  }
  return log;
}

MetricsLog run_scenario(const ScenarioConfig& config, const Dataset& dataset,
                        FairnessLedger* final_ledger,
                        const RoundObserver& observer) {
  if (!known_strategy(config.strategy)) {
    throw DataError("unknown strategy '" + config.strategy + "'");
  }
  const int n_users = dataset.ratings.user_count();
  if (config.inject_user &&
      (*config.inject_user < 0 || *config.inject_user >= n_users)) {
    throw DataError("injected user index out of range");
  }

  // Participation and allocation randomness are decoupled so that two
  // strategies run with the same seed see identical participant sets.
  std::mt19937_64 participation_rng(config.seed * 0x9e3779b97f4a7c15ull + 1);
  std::mt19937_64 strategy_rng(config.seed * 0xbf58476d1ce4e5b9ull + 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FairnessLedger ledger(n_users);
  MetricsLog log;
  log.strategy = config.strategy;
  log.has_tracked = config.track_user.has_value();

  for (int t = 1; t <= config.rounds; ++t) {
    std::vector<int> participants;
    switch (config.participation) {
      case Participation::Fixed:
        for (int u = 0; u < n_users; ++u) participants.push_back(u);
        break;
      case Participation::Bernoulli:
        for (int u = 0; u < n_users; ++u) {
          if (unit(participation_rng) < config.fraction) {
            participants.push_back(u);
          }
        }
        break;
      case Participation::Trace:
        if (t <= static_cast<int>(config.trace.size())) {
          participants = config.trace[t - 1];
        }
        break;
    }
    if (config.inject_user && t <= config.inject_round.value_or(0)) {
      std::erase(participants, *config.inject_user);
    }

    RoundContext ctx{dataset.lists, dataset.catalog, dataset.ratings, ledger,
                     participants};
    RoundOutcome outcome;
    if (config.strategy == "f-fast") {
      outcome = f_fast_round(ctx);
    } else if (config.strategy == "d-fast") {
      const DFastAdjustment adj = d_fast_prepare(ledger, participants);
      outcome = f_fast_round(ctx, &adj.adjusted, &adj.shift);
    } else if (config.strategy == "quality-max") {
      outcome = quality_max_round(ctx);
    } else if (config.strategy == "exact") {
      outcome = exhaustive_opt_round(ctx, config.exact_guard);
    } else {
      outcome = random_round(ctx, strategy_rng);
    }

    commit_round(ledger, dataset.lists, outcome);

    // Round-average bookkeeping for the dynamic-set baseline shift.
    if (!participants.empty()) {
      double avg = 0.0;
      for (int u : participants) avg += ledger.stored_fairness[u];
      avg /= static_cast<double>(participants.size());
      for (int u : participants) ledger.avg_at_last_round[u] = avg;
      ledger.round_avg_history.push_back(avg);
    } else {
      ledger.round_avg_history.push_back(0.0);
    }

    if (observer) observer(t, ledger, outcome);

    if (t % config.metric_cadence == 0 || t == config.rounds) {
      const MetricsSnapshot snap =
          compute_snapshot_parallel(ledger, dataset.lists, dataset.ratings,
                                    outcome);
      MetricsRow row;
      row.round = t;
      row.variance = snap.variance_defined ? snap.fairness_variance : 0.0;
      row.total_quality = snap.total_quality;
      row.mean_quality = snap.mean_quality;
      if (config.track_user && snap.defined[*config.track_user]) {
        row.tracked_fairness = snap.fairness[*config.track_user];
      }
      log.rows.push_back(row);
    }
  }
  if (final_ledger) *final_ledger = ledger;
  return log;
}

}  // namespace fastrec
