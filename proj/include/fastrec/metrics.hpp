#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fastrec/core.hpp"

namespace fastrec {

/// Per-round measurement snapshot: Top-N Fairness per user, its population
/// variance, and the quality of each outputted list.
struct MetricsSnapshot {
  std::vector<double> fairness;       // per user; valid iff defined[u]
  std::vector<char> defined;          // participation > 0
  double fairness_variance = 0.0;     // over defined users
  bool variance_defined = false;
  std::vector<double> quality;        // per user; 0 for non-participants
  double total_quality = 0.0;         // sum over this round's participants
  double mean_quality = 0.0;
};

/// 1 iff the service occurs among the first n entries of the list.
int in_tn(int service, std::span<const int> list, int n);

/// p_j^T: appearance slots over participation slots across the demand set.
/// Empty history -> nullopt ("undefined probability").
std::optional<double> overall_appearance_probability(
    const FairnessLedger& ledger, std::span<const int> demand_set, int service);

/// p_{i,j}^T for one user. Zero participation -> nullopt.
std::optional<double> actual_appearance_probability(const FairnessLedger& ledger,
                                                    int user, int service);

/// F_{i,j}^T = (p_ij - p_j) / p_j; defined as 0 when p_j <= 0 so that
/// never-shown services stay metric-neutral.
double service_fairness_degree(double p_ij, double p_j);

/// All p_j in one pass; undefined or zero probabilities come back as 0,
/// which every consumer treats as neutral.
std::vector<double> service_probabilities(const FairnessLedger& ledger,
                                          const OriginalLists& lists);

/// F_i^T summed over the user's top window. Zero participation -> nullopt.
std::optional<double> top_n_fairness(const FairnessLedger& ledger, int user,
                                     const OriginalLists& lists);

/// Population variance over the given values; nullopt when empty.
std::optional<double> fairness_variance(std::span<const double> values);

/// q_i^T per Definition 5: position-discounted, top-rating-normalized sum
/// over services retained from the user's original top window.
double list_quality(int user, std::span<const int> output_list,
                    const OriginalLists& lists, const RatingMatrix& ratings);

/// Full snapshot for one round. `outcome` supplies the lists whose quality is
/// measured. Serial reference implementation.
MetricsSnapshot compute_snapshot_serial(const FairnessLedger& ledger,
                                        const OriginalLists& lists,
                                        const RatingMatrix& ratings,
                                        const RoundOutcome& outcome);

/// OpenMP variant; per-user work is parallel, reductions stay serial so the
/// result is bit-identical to compute_snapshot_serial.
MetricsSnapshot compute_snapshot_parallel(const FairnessLedger& ledger,
                                          const OriginalLists& lists,
                                          const RatingMatrix& ratings,
                                          const RoundOutcome& outcome);

}  // namespace fastrec
