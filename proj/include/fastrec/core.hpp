#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "fastrec/errors.hpp"

namespace fastrec {

// External identifiers are integers; internally everything is a dense index.
// Indices are assigned in ascending id order, so ascending index == ascending
// id and all deterministic tie-breaks can use indices directly.
using UserId = std::int64_t;
using ServiceId = std::int64_t;

/// Services with their per-round capacity constraints.
class ServiceCatalog {
 public:
  static ServiceCatalog from_entries(
      std::vector<std::pair<ServiceId, int>> entries);

  int size() const { return static_cast<int>(ids_.size()); }
  ServiceId id(int j) const { return ids_[j]; }
  int capacity(int j) const { return capacity_[j]; }
  // -1 if unknown.
  int index_of(ServiceId id) const;

 private:
  std::vector<ServiceId> ids_;  // ascending
  std::vector<int> capacity_;
  std::unordered_map<ServiceId, int> index_;
};

/// Predicted relevance scores from the upstream recommender, r_{i,j} > 0.
class RatingMatrix {
 public:
  // entries: (user_id, service index, rating). Ratings must be > 0.
  static RatingMatrix from_entries(
      std::vector<std::tuple<UserId, int, double>> entries);

  int user_count() const { return static_cast<int>(user_ids_.size()); }
  UserId user_id(int u) const { return user_ids_[u]; }
  int user_index(UserId id) const;

  // 0.0 if the user has no rating for the service.
  double rating(int u, int service) const;
  const std::unordered_map<int, double>& ratings_of(int u) const {
    return by_user_[u];
  }

 private:
  std::vector<UserId> user_ids_;  // ascending
  std::unordered_map<UserId, int> index_;
  std::vector<std::unordered_map<int, double>> by_user_;
};

/// Per-user original rankings, their top-N prefixes, and the per-service
/// demand sets derived from them.
struct OriginalLists {
  int topn = 0;
  // Per user, service indices sorted by descending rating, ties by
  // ascending service id.
  std::vector<std::vector<int>> full;
  // Per user, the first min(topn, |full|) entries of full.
  std::vector<std::vector<int>> top;
  // Per service, ascending user indices whose top window contains it.
  std::vector<std::vector<int>> demand;
  // Per user, service index -> 1-based rank within the top window.
  std::vector<std::unordered_map<int, int>> position;

  int top_len(int u) const { return static_cast<int>(top[u].size()); }
  bool in_top_window(int u, int service) const {
    return position[u].contains(service);
  }
};

/// Sorts every user's rated services and derives top windows, demand sets
/// and positions. Rejects users with zero rated services.
OriginalLists build_original_lists(const RatingMatrix& ratings,
                                   const ServiceCatalog& catalog, int n);

/// Appearance and participation counters accumulated across rounds, plus the
/// baseline bookkeeping used by the dynamic-set strategy.
struct FairnessLedger {
  int round = 0;  // number of completed rounds, T
  std::vector<long long> participation;  // per user
  // Per user: service index -> rounds the service appeared in the output
  // top window. Only services inside the user's top window are tracked.
  std::vector<std::unordered_map<int, long long>> appearances;
  // Cached F_i after the last completed round; meaningful only when
  // participation[u] > 0.
  std::vector<double> stored_fairness;
  // Dynamic-set baselines: the round-average fairness recorded at each
  // user's last participated round, and the per-round average history.
  std::vector<double> avg_at_last_round;
  std::vector<double> round_avg_history;

  explicit FairnessLedger(int n_users = 0)
      : participation(n_users, 0),
        appearances(n_users),
        stored_fairness(n_users, 0.0),
        avg_at_last_round(n_users, 0.0) {}

  int user_count() const { return static_cast<int>(participation.size()); }
  void add_user() {
    participation.push_back(0);
    appearances.emplace_back();
    stored_fairness.push_back(0.0);
    avg_at_last_round.push_back(0.0);
  }
  long long appearance_count(int u, int service) const {
    auto it = appearances[u].find(service);
    return it == appearances[u].end() ? 0 : it->second;
  }
};

/// One round's output lists plus per-service capacity consumption.
struct RoundOutcome {
  std::vector<int> users;                // participating user indices, ascending
  std::vector<std::vector<int>> lists;   // parallel to users
  std::vector<int> consumed;             // per service
};

/// Per round, the set of participating user indices.
using ParticipationTrace = std::vector<std::vector<int>>;

}  // namespace fastrec
