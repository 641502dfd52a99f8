#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "fastrec/core.hpp"

namespace fastrec {

/// Everything a strategy may read when producing one round of lists.
/// Participants are ascending user indices.
struct RoundContext {
  const OriginalLists& lists;
  const ServiceCatalog& catalog;
  const RatingMatrix& ratings;
  const FairnessLedger& ledger;
  std::span<const int> participants;
};

/// Working fairness of one user mid-round: every term re-evaluated with the
/// current partial round counted as participated (denominator + 1) and this
/// round's placements so far in the numerator. Overall probabilities are
/// frozen at the previous round's values (p_prev, 0 == neutral).
double interim_fairness(const OriginalLists& lists, const FairnessLedger& ledger,
                        std::span<const double> p_prev, int user,
                        std::span<const int> placed_this_round);

/// Lowest-fairness-first greedy allocation. When `adjusted` / `baseline_shift`
/// are given (dynamic-set mode) they replace the ledger's stored fairness as
/// the starting values, and the shift is re-applied after each interim update.
RoundOutcome f_fast_round(const RoundContext& ctx,
                          const std::vector<double>* adjusted = nullptr,
                          const std::vector<double>* baseline_shift = nullptr);

/// Baseline-shift preparation for a dynamic user set: per participant,
/// adjusted F_i = stored F_i + (avg at the user's last participated round -
/// mean stored F over this round's participants). Returns the adjusted values
/// (indexed per user) and the shift itself.
struct DFastAdjustment {
  std::vector<double> adjusted;
  std::vector<double> shift;
  double avg_now = 0.0;
};
DFastAdjustment d_fast_prepare(const FairnessLedger& ledger,
                               std::span<const int> participants);

/// Per-service greedy: each service independently keeps the min(c_j, demand)
/// participants with the highest marginal quality contribution.
RoundOutcome quality_max_round(const RoundContext& ctx);

/// Exact quality maximization by exhaustive search over capacity-feasible
/// placement subsets. Refuses instances with more than `max_vars` placement
/// variables.
RoundOutcome exhaustive_opt_round(const RoundContext& ctx, int max_vars = 20);

/// Per-service uniform selection of min(c_j, demand) participants.
RoundOutcome random_round(const RoundContext& ctx, std::mt19937_64& rng);

/// Total quality of an outcome (sum of per-user list qualities).
double outcome_quality(const RoundContext& ctx, const RoundOutcome& outcome);

}  // namespace fastrec
