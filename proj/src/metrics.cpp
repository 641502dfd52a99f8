#include "fastrec/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fastrec {

int in_tn(int service, std::span<const int> list, int n) {
  const int len = std::min<int>(n, static_cast<int>(list.size()));
  for (int k = 0; k < len; ++k) {
    if (list[k] == service) return 1;
  }
  return 0;
}

std::optional<double> overall_appearance_probability(
    const FairnessLedger& ledger, std::span<const int> demand_set,
    int service) {
  long long appeared = 0, slots = 0;
  for (int u : demand_set) {
    appeared += ledger.appearance_count(u, service);
    slots += ledger.participation[u];
  }
  if (slots == 0) return std::nullopt;
  return static_cast<double>(appeared) / static_cast<double>(slots);
}

std::optional<double> actual_appearance_probability(
    const FairnessLedger& ledger, int user, int service) {
  if (ledger.participation[user] == 0) return std::nullopt;
  return static_cast<double>(ledger.appearance_count(user, service)) /
         static_cast<double>(ledger.participation[user]);
}

double service_fairness_degree(double p_ij, double p_j) {
  if (p_j <= 0.0) return 0.0;
  return (p_ij - p_j) / p_j;
}

std::vector<double> service_probabilities(const FairnessLedger& ledger,
                                          const OriginalLists& lists) {
  std::vector<double> p(lists.demand.size(), 0.0);
  for (int j = 0; j < static_cast<int>(lists.demand.size()); ++j) {
    if (auto pj = overall_appearance_probability(ledger, lists.demand[j], j)) {
      p[j] = *pj;
    }
  }
  return p;
}

namespace {

double fairness_from_probs(const FairnessLedger& ledger, int user,
                           const OriginalLists& lists,
                           const std::vector<double>& p) {
  const double part = static_cast<double>(ledger.participation[user]);
  double f = 0.0;
  for (int j : lists.top[user]) {
    if (p[j] <= 0.0) continue;
    double p_ij = static_cast<double>(ledger.appearance_count(user, j)) / part;
    f += (p_ij - p[j]) / p[j];
  }
  return f;
}

}  // namespace

std::optional<double> top_n_fairness(const FairnessLedger& ledger, int user,
                                     const OriginalLists& lists) {
  if (ledger.participation[user] == 0) return std::nullopt;
  return fairness_from_probs(ledger, user, lists,
                             service_probabilities(ledger, lists));
}

std::optional<double> fairness_variance(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return var / static_cast<double>(values.size());
}

double list_quality(int user, std::span<const int> output_list,
                    const OriginalLists& lists, const RatingMatrix& ratings) {
  if (lists.top[user].empty()) return 0.0;
  const double top_rating = ratings.rating(user, lists.top[user][0]);
  const int n = std::min<int>(lists.topn, static_cast<int>(output_list.size()));
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    int s = output_list[k];
    auto it = lists.position[user].find(s);
    if (it == lists.position[user].end()) continue;  // filler, not counted
    sum += ratings.rating(user, s) / std::log2(it->second + 1.0);
  }
  return sum / top_rating;
}

namespace {

MetricsSnapshot compute_snapshot_impl(const FairnessLedger& ledger,
                                      const OriginalLists& lists,
                                      const RatingMatrix& ratings,
                                      const RoundOutcome& outcome,
                                      bool parallel) {
  const int n_users = ledger.user_count();
  MetricsSnapshot snap;
  snap.fairness.assign(n_users, 0.0);
  snap.defined.assign(n_users, 0);
  snap.quality.assign(n_users, 0.0);

  const std::vector<double> p = service_probabilities(ledger, lists);

#pragma omp parallel for schedule(static) if (parallel)
  for (int u = 0; u < n_users; ++u) {
    if (ledger.participation[u] > 0) {
      snap.defined[u] = 1;
      snap.fairness[u] = fairness_from_probs(ledger, u, lists, p);
    }
  }
  const int n_out = static_cast<int>(outcome.users.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k < n_out; ++k) {
    snap.quality[outcome.users[k]] =
        list_quality(outcome.users[k], outcome.lists[k], lists, ratings);
  }

  // Serial reductions: identical results regardless of thread count.
  std::vector<double> defined_f;
  defined_f.reserve(n_users);
  for (int u = 0; u < n_users; ++u) {
    if (snap.defined[u]) defined_f.push_back(snap.fairness[u]);
  }
  if (auto v = fairness_variance(defined_f)) {
    snap.fairness_variance = *v;
    snap.variance_defined = true;
  }
  for (int u : outcome.users) snap.total_quality += snap.quality[u];
  snap.mean_quality =
      outcome.users.empty() ? 0.0 : snap.total_quality / outcome.users.size();
  return snap;
}

}  // namespace

MetricsSnapshot compute_snapshot_serial(const FairnessLedger& ledger,
                                        const OriginalLists& lists,
                                        const RatingMatrix& ratings,
                                        const RoundOutcome& outcome) {
  return compute_snapshot_impl(ledger, lists, ratings, outcome, false);
}

MetricsSnapshot compute_snapshot_parallel(const FairnessLedger& ledger,
                                          const OriginalLists& lists,
                                          const RatingMatrix& ratings,
                                          const RoundOutcome& outcome) {
  return compute_snapshot_impl(ledger, lists, ratings, outcome, true);
}

}  // namespace fastrec
