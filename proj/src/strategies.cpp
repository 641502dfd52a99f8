#include "fastrec/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fastrec/metrics.hpp"

namespace fastrec {

namespace {

// Builds the outcome from per-user won services (any order), preserving the
// original top-window order and filling trailing slots from positions > N of
// the full list. Fillers consume no capacity.
RoundOutcome assemble(const RoundContext& ctx,
                      const std::vector<std::vector<int>>& won,
                      std::vector<int> consumed) {
  RoundOutcome out;
  out.consumed = std::move(consumed);
  out.users.assign(ctx.participants.begin(), ctx.participants.end());
  out.lists.resize(out.users.size());
  for (size_t k = 0; k < out.users.size(); ++k) {
    const int u = out.users[k];
    const auto& top = ctx.lists.top[u];
    auto& list = out.lists[k];
    for (int j : top) {
      if (std::find(won[u].begin(), won[u].end(), j) != won[u].end()) {
        list.push_back(j);
      }
    }
    const auto& full = ctx.lists.full[u];
    for (size_t pos = top.size();
         pos < full.size() && list.size() < top.size(); ++pos) {
      list.push_back(full[pos]);
    }
  }
  return out;
}

// demand[j] and participants are both ascending; winners are chosen among
// the intersection.
std::vector<int> participating_demanders(const RoundContext& ctx, int j) {
  std::vector<int> out;
  std::set_intersection(ctx.lists.demand[j].begin(), ctx.lists.demand[j].end(),
                        ctx.participants.begin(), ctx.participants.end(),
                        std::back_inserter(out));
  return out;
}

double quality_contribution(const RoundContext& ctx, int u, int j) {
  const auto& top = ctx.lists.top[u];
  const double top_rating = ctx.ratings.rating(u, top[0]);
  const int pos = ctx.lists.position[u].at(j);
  return ctx.ratings.rating(u, j) / (std::log2(pos + 1.0) * top_rating);
}

}  // namespace

double interim_fairness(const OriginalLists& lists, const FairnessLedger& ledger,
                        std::span<const double> p_prev, int user,
                        std::span<const int> placed_this_round) {
  const double part = static_cast<double>(ledger.participation[user]) + 1.0;
  double f = 0.0;
  for (int j : lists.top[user]) {
    if (p_prev[j] <= 0.0) continue;
    long long count = ledger.appearance_count(user, j);
    if (std::find(placed_this_round.begin(), placed_this_round.end(), j) !=
        placed_this_round.end()) {
      ++count;
    }
    const double p_ij = static_cast<double>(count) / part;
    f += (p_ij - p_prev[j]) / p_prev[j];
  }
  return f;
}

RoundOutcome f_fast_round(const RoundContext& ctx,
                          const std::vector<double>* adjusted,
                          const std::vector<double>* baseline_shift) {
  const int m = ctx.catalog.size();
  std::vector<int> remaining(m);
  long long total_remaining = 0;
  for (int j = 0; j < m; ++j) {
    remaining[j] = ctx.catalog.capacity(j);
    total_remaining += remaining[j];
  }
  const std::vector<double> p_prev =
      service_probabilities(ctx.ledger, ctx.lists);

  std::vector<int> active(ctx.participants.begin(), ctx.participants.end());
  std::vector<double> working(ctx.ledger.user_count(), 0.0);
  std::vector<int> next_pos(ctx.ledger.user_count(), 0);
  std::vector<std::vector<int>> placed(ctx.ledger.user_count());
  for (int u : active) {
    working[u] = adjusted ? (*adjusted)[u] : ctx.ledger.stored_fairness[u];
  }
  std::erase_if(active, [&](int u) { return ctx.lists.top[u].empty(); });

  std::vector<int> consumed(m, 0);
  while (!active.empty() && total_remaining > 0) {
    // Selection sequence matches the sort-each-step reference: lowest
    // working fairness, ties by lowest user index.
    int best = -1;
    for (int u : active) {
      if (best < 0 || working[u] < working[best] ||
          (working[u] == working[best] && u < best)) {
        best = u;
      }
    }
    const int u = best;
    const int j = ctx.lists.top[u][next_pos[u]++];
    if (remaining[j] > 0) {
      --remaining[j];
      --total_remaining;
      ++consumed[j];
      placed[u].push_back(j);
      working[u] = interim_fairness(ctx.lists, ctx.ledger, p_prev, u, placed[u]);
      if (baseline_shift) working[u] += (*baseline_shift)[u];
    }
    if (next_pos[u] >= ctx.lists.top_len(u)) {
      std::erase(active, u);
    }
  }
  return assemble(ctx, placed, std::move(consumed));
}

DFastAdjustment d_fast_prepare(const FairnessLedger& ledger,
                               std::span<const int> participants) {
  DFastAdjustment adj;
  adj.adjusted.assign(ledger.user_count(), 0.0);
  adj.shift.assign(ledger.user_count(), 0.0);
  if (participants.empty()) return adj;
  double sum = 0.0;
  for (int u : participants) {
    // New users carry stored fairness 0 by construction.
    sum += ledger.stored_fairness[u];
  }
  adj.avg_now = sum / static_cast<double>(participants.size());
  for (int u : participants) {
    adj.shift[u] = ledger.avg_at_last_round[u] - adj.avg_now;
    adj.adjusted[u] = ledger.stored_fairness[u] + adj.shift[u];
  }
  return adj;
}

RoundOutcome quality_max_round(const RoundContext& ctx) {
  const int m = ctx.catalog.size();
  std::vector<std::vector<int>> won(ctx.ledger.user_count());
  std::vector<int> consumed(m, 0);
  for (int j = 0; j < m; ++j) {
    std::vector<int> cand = participating_demanders(ctx, j);
    if (cand.empty()) continue;
    const int k = std::min<int>(ctx.catalog.capacity(j),
                                static_cast<int>(cand.size()));
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
      return quality_contribution(ctx, a, j) > quality_contribution(ctx, b, j);
    });
    for (int t = 0; t < k; ++t) won[cand[t]].push_back(j);
    consumed[j] = k;
  }
  return assemble(ctx, won, std::move(consumed));
}

RoundOutcome exhaustive_opt_round(const RoundContext& ctx, int max_vars) {
  struct Var {
    int user, service;
    double weight;
  };
  std::vector<Var> vars;
  for (int u : ctx.participants) {
    for (int j : ctx.lists.top[u]) {
      vars.push_back({u, j, quality_contribution(ctx, u, j)});
    }
  }
  if (static_cast<int>(vars.size()) > max_vars) {
    throw GuardError("exact search refused: " + std::to_string(vars.size()) +
                     " placement variables exceed the size guard of " +
                     std::to_string(max_vars));
  }

  const int k = static_cast<int>(vars.size());
  std::vector<int> remaining(ctx.catalog.size());
  for (int j = 0; j < ctx.catalog.size(); ++j) {
    remaining[j] = ctx.catalog.capacity(j);
  }
  std::vector<char> chosen(k, 0), best_chosen(k, 0);
  double best = -1.0;
  // Include-branch first with strict improvement: the optimum with the
  // lexicographically largest selection vector wins ties.
  auto dfs = [&](auto&& self, int i, double value) -> void {
    if (i == k) {
      if (value > best) {
        best = value;
        best_chosen = chosen;
      }
      return;
    }
    if (remaining[vars[i].service] > 0) {
      --remaining[vars[i].service];
      chosen[i] = 1;
      self(self, i + 1, value + vars[i].weight);
      chosen[i] = 0;
      ++remaining[vars[i].service];
    }
    self(self, i + 1, value);
  };
  dfs(dfs, 0, 0.0);

  std::vector<std::vector<int>> won(ctx.ledger.user_count());
  std::vector<int> consumed(ctx.catalog.size(), 0);
  for (int i = 0; i < k; ++i) {
    if (best_chosen[i]) {
      won[vars[i].user].push_back(vars[i].service);
      ++consumed[vars[i].service];
    }
  }
  return assemble(ctx, won, std::move(consumed));
}

RoundOutcome random_round(const RoundContext& ctx, std::mt19937_64& rng) {
  const int m = ctx.catalog.size();
  std::vector<std::vector<int>> won(ctx.ledger.user_count());
  std::vector<int> consumed(m, 0);
  for (int j = 0; j < m; ++j) {
    std::vector<int> cand = participating_demanders(ctx, j);
    if (cand.empty()) continue;
    const int k = std::min<int>(ctx.catalog.capacity(j),
                                static_cast<int>(cand.size()));
    // Partial Fisher-Yates; avoids implementation-defined std::sample order.
    for (int t = 0; t < k; ++t) {
      const size_t pick =
          t + static_cast<size_t>(rng() % (cand.size() - t));
      std::swap(cand[t], cand[pick]);
      won[cand[t]].push_back(j);
    }
    consumed[j] = k;
  }
  return assemble(ctx, won, std::move(consumed));
}

double outcome_quality(const RoundContext& ctx, const RoundOutcome& outcome) {
  double total = 0.0;
  for (size_t k = 0; k < outcome.users.size(); ++k) {
    total += list_quality(outcome.users[k], outcome.lists[k], ctx.lists,
                          ctx.ratings);
  }
  return total;
}

}  // namespace fastrec
