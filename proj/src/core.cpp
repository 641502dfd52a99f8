#include "fastrec/core.hpp"

#include <algorithm>
#include <sstream>

namespace fastrec {

ServiceCatalog ServiceCatalog::from_entries(
    std::vector<std::pair<ServiceId, int>> entries) {
  std::sort(entries.begin(), entries.end());
  ServiceCatalog c;
  for (const auto& [id, cap] : entries) {
    if (cap < 1) {
      throw DataError("service " + std::to_string(id) +
                      ": capacity must be >= 1, got " + std::to_string(cap));
    }
    if (!c.index_.emplace(id, static_cast<int>(c.ids_.size())).second) {
      throw DataError("duplicate service id " + std::to_string(id));
    }
    c.ids_.push_back(id);
    c.capacity_.push_back(cap);
  }
  return c;
}

int ServiceCatalog::index_of(ServiceId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

RatingMatrix RatingMatrix::from_entries(
    std::vector<std::tuple<UserId, int, double>> entries) {
  RatingMatrix m;
  std::vector<UserId> ids;
  ids.reserve(entries.size());
  for (const auto& [uid, s, r] : entries) ids.push_back(uid);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  m.user_ids_ = std::move(ids);
  m.by_user_.resize(m.user_ids_.size());
  for (int u = 0; u < static_cast<int>(m.user_ids_.size()); ++u) {
    m.index_.emplace(m.user_ids_[u], u);
  }
  for (const auto& [uid, s, r] : entries) {
    if (r <= 0.0) {
      throw DataError("rating for user " + std::to_string(uid) +
                      " must be > 0");
    }
    int u = m.index_.at(uid);
    if (!m.by_user_[u].emplace(s, r).second) {
      throw DataError("duplicate rating for user " + std::to_string(uid) +
                      ", service index " + std::to_string(s));
    }
  }
  return m;
}

int RatingMatrix::user_index(UserId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

double RatingMatrix::rating(int u, int service) const {
  auto it = by_user_[u].find(service);
  return it == by_user_[u].end() ? 0.0 : it->second;
}

OriginalLists build_original_lists(const RatingMatrix& ratings,
                                   const ServiceCatalog& catalog, int n) {
  if (n < 1) throw DataError("topn must be >= 1");
  const int n_users = ratings.user_count();
  OriginalLists lists;
  lists.topn = n;
  lists.full.resize(n_users);
  lists.top.resize(n_users);
  lists.position.resize(n_users);
  lists.demand.resize(catalog.size());

  std::ostringstream empty_users;
  int empty_count = 0;
  for (int u = 0; u < n_users; ++u) {
    const auto& rated = ratings.ratings_of(u);
    if (rated.empty()) {
      if (empty_count++) empty_users << ", ";
      empty_users << ratings.user_id(u);
      continue;
    }
    auto& full = lists.full[u];
    full.reserve(rated.size());
    for (const auto& [s, r] : rated) full.push_back(s);
    // Descending rating, ties by ascending service id (== ascending index).
    std::sort(full.begin(), full.end(), [&](int a, int b) {
      double ra = ratings.rating(u, a), rb = ratings.rating(u, b);
      if (ra != rb) return ra > rb;
      return a < b;
    });
    const int len = std::min<int>(n, static_cast<int>(full.size()));
    lists.top[u].assign(full.begin(), full.begin() + len);
    for (int k = 0; k < len; ++k) {
      lists.position[u].emplace(full[k], k + 1);
      lists.demand[full[k]].push_back(u);
    }
  }
  if (empty_count > 0) {
    throw DataError("users with zero rated services: " + empty_users.str());
  }
  return lists;
}

}  // namespace fastrec
