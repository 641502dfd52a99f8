#include "fastrec/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace fastrec {

Regime parse_regime(const std::string& name) {
  if (name == "very-popular") return Regime::VeryPopular;
  if (name == "popular") return Regime::Popular;
  if (name == "ordinary") return Regime::Ordinary;
  if (name == "unpopular") return Regime::Unpopular;
  throw DataError("unknown regime '" + name +
                  "' (expected very-popular|popular|ordinary|unpopular)");
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::VeryPopular: return "very-popular";
    case Regime::Popular: return "popular";
    case Regime::Ordinary: return "ordinary";
    case Regime::Unpopular: return "unpopular";
  }
  return "?";
}

DemandBand regime_band(Regime r, int capacity) {
  const double c = capacity;
  switch (r) {
    case Regime::VeryPopular:  // |U_j| > 2c; we cap the draw at 3c
      return {2 * capacity + 1, 3 * capacity};
    case Regime::Popular:  // |U_j|/c in (1, 2]
      return {capacity + 1, 2 * capacity};
    case Regime::Ordinary:  // |U_j|/c in [0.9, 1.0)
      return {static_cast<int>(std::ceil(0.9 * c)), capacity - 1};
    case Regime::Unpopular:  // |U_j|/c < 0.9; floor at c/2
      return {std::max(1, static_cast<int>(std::ceil(0.5 * c))),
              static_cast<int>(std::ceil(0.9 * c)) - 1};
  }
  return {0, 0};
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_users < 1 || spec.n_services < 1 || spec.topn < 1 ||
      spec.cap_lo < 1 || spec.cap_hi < spec.cap_lo) {
    throw DataError("invalid synthetic spec");
  }
  std::mt19937_64 rng(spec.seed);
  const int m = spec.n_services;
  const int n = spec.n_users;

  std::vector<std::pair<ServiceId, int>> cap_entries;
  std::vector<int> capacity(m);
  std::uniform_int_distribution<int> cap_dist(spec.cap_lo, spec.cap_hi);
  for (int j = 0; j < m; ++j) {
    capacity[j] = cap_dist(rng);
    cap_entries.emplace_back(j, capacity[j]);
  }

  // Per-service demand-set size targets inside the regime band, summing to
  // the total number of top-window slots.
  std::vector<int> lo(m), hi(m), target(m);
  long long sum_lo = 0, sum_hi = 0;
  for (int j = 0; j < m; ++j) {
    const DemandBand band = regime_band(spec.regime, capacity[j]);
    lo[j] = band.lo;
    hi[j] = std::min(band.hi, n);
    if (lo[j] > hi[j]) {
      throw GuardError("regime " + regime_name(spec.regime) +
                       ": empty demand band for capacity " +
                       std::to_string(capacity[j]));
    }
    sum_lo += lo[j];
    sum_hi += hi[j];
  }
  const long long total = static_cast<long long>(n) * spec.topn;
  if (total < sum_lo || total > sum_hi) {
    std::ostringstream msg;
    msg << "infeasible spec: " << n << " users x topn " << spec.topn << " = "
        << total << " demand slots, but regime " << regime_name(spec.regime)
        << " bands admit [" << sum_lo << ", " << sum_hi << "]";
    throw GuardError(msg.str());
  }
  long long sum = 0;
  for (int j = 0; j < m; ++j) {
    target[j] = std::uniform_int_distribution<int>(lo[j], hi[j])(rng);
    sum += target[j];
  }
  for (int j = 0; sum != total; j = (j + 1) % m) {
    if (sum < total && target[j] < hi[j]) {
      ++target[j];
      ++sum;
    } else if (sum > total && target[j] > lo[j]) {
      --target[j];
      --sum;
    }
  }

  // Assign each user topn distinct services, exactly target[j] users per
  // service. Largest-remaining-first is always feasible here; the random key
  // only breaks ties.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> remaining = target;
  std::vector<std::vector<int>> plan(n);
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  for (int u : order) {
    std::vector<std::uint64_t> key(m);
    for (int j = 0; j < m; ++j) key[j] = rng();
    std::sort(pool.begin(), pool.end(), [&](int a, int b) {
      if (remaining[a] != remaining[b]) return remaining[a] > remaining[b];
      return key[a] < key[b];
    });
    for (int k = 0; k < spec.topn; ++k) {
      if (remaining[pool[k]] <= 0) {
        throw GuardError("demand plan infeasible (ran out of services)");
      }
      plan[u].push_back(pool[k]);
      --remaining[pool[k]];
    }
  }

  // Ratings: planned services strictly above 3.0 in a random order, extra
  // filler services strictly below it. Gaps always exceed the jitter, so the
  // rebuilt top window reproduces the plan with no ties.
  std::vector<std::tuple<UserId, int, double>> entries;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int u = 0; u < n; ++u) {
    std::shuffle(plan[u].begin(), plan[u].end(), rng);
    const double step = 1.5 / spec.topn;
    for (int k = 0; k < spec.topn; ++k) {
      const double r = 5.0 - k * step - unit(rng) * step * 0.49;
      entries.emplace_back(u, plan[u][k], r);
    }
    std::vector<int> others;
    for (int j = 0; j < m; ++j) {
      if (std::find(plan[u].begin(), plan[u].end(), j) == plan[u].end()) {
        others.push_back(j);
      }
    }
    std::shuffle(others.begin(), others.end(), rng);
    const int extra = std::min<int>(spec.extra_rated,
                                    static_cast<int>(others.size()));
    const double estep = extra > 0 ? 1.5 / extra : 0.0;
    for (int k = 0; k < extra; ++k) {
      const double r = 2.9 - k * estep - unit(rng) * estep * 0.49;
      entries.emplace_back(u, others[k], r);
    }
  }

  Dataset ds{ServiceCatalog::from_entries(std::move(cap_entries)),
             RatingMatrix::from_entries(std::move(entries)), {}};
  ds.lists = build_original_lists(ds.ratings, ds.catalog, spec.topn);
  for (int j = 0; j < m; ++j) {
    if (static_cast<int>(ds.lists.demand[j].size()) != target[j]) {
      throw GuardError("internal: demand plan not reproduced for service " +
                       std::to_string(j));
    }
  }
  return ds;
}

std::string format_services(const ServiceCatalog& catalog) {
  std::string out = "service_id,capacity\n";
  for (int j = 0; j < catalog.size(); ++j) {
    out += std::to_string(catalog.id(j)) + "," +
           std::to_string(catalog.capacity(j)) + "\n";
  }
  return out;
}

std::string format_ratings(const RatingMatrix& ratings,
                           const ServiceCatalog& catalog) {
  std::string out = "user_id,service_id,rating\n";
  char buf[64];
  for (int u = 0; u < ratings.user_count(); ++u) {
    // Deterministic row order: ascending service index per user.
    std::vector<std::pair<int, double>> rows(ratings.ratings_of(u).begin(),
                                             ratings.ratings_of(u).end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [j, r] : rows) {
      std::snprintf(buf, sizeof buf, "%lld,%lld,%.12g\n",
                    static_cast<long long>(ratings.user_id(u)),
                    static_cast<long long>(catalog.id(j)), r);
      out += buf;
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

long long parse_int(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": not an integer: '" + s + "'");
  }
}

double parse_real(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": not a number: '" + s + "'");
  }
}

}  // namespace

ServiceCatalog load_services(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::pair<ServiceId, int>> entries;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    auto f = split_csv(line);
    if (f.size() != 2) throw DataError(where + ": expected 2 fields");
    const long long cap = parse_int(f[1], where);
    if (cap < 1) throw DataError(where + ": capacity must be >= 1");
    entries.emplace_back(parse_int(f[0], where), static_cast<int>(cap));
  }
  return ServiceCatalog::from_entries(std::move(entries));
}

RatingMatrix load_ratings(const std::filesystem::path& path,
                          const ServiceCatalog& catalog) {
  auto in = open_or_throw(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::tuple<UserId, int, double>> entries;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    auto f = split_csv(line);
    if (f.size() != 3) throw DataError(where + ": expected 3 fields");
    const UserId uid = parse_int(f[0], where);
    const ServiceId sid = parse_int(f[1], where);
    const double r = parse_real(f[2], where);
    if (r <= 0.0) throw DataError(where + ": rating must be > 0");
    const int j = catalog.index_of(sid);
    if (j < 0) throw DataError(where + ": unknown service id " +
                               std::to_string(sid));
    entries.emplace_back(uid, j, r);
  }
  return RatingMatrix::from_entries(std::move(entries));
}

ParticipationTrace load_trace(const std::filesystem::path& path, int rounds,
                              const RatingMatrix& ratings) {
  auto in = open_or_throw(path);
  std::string line;
  std::getline(in, line);
  ParticipationTrace trace(rounds);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    auto f = split_csv(line);
    if (f.size() != 2) throw DataError(where + ": expected 2 fields");
    const long long round = parse_int(f[0], where);
    const UserId uid = parse_int(f[1], where);
    if (round < 1) throw DataError(where + ": round must be >= 1");
    const int u = ratings.user_index(uid);
    if (u < 0) throw DataError(where + ": unknown user id " +
                               std::to_string(uid));
    if (round <= rounds) trace[round - 1].push_back(u);
  }
  for (auto& row : trace) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return trace;
}

int apply_conversion_rate(int raw_capacity, double conversion_rate) {
  if (!(conversion_rate > 0.0 && conversion_rate <= 1.0)) {
    throw DataError("conversion rate must be in (0, 1]");
  }
  // Nudge below the true quotient absorbs representation error, e.g.
  // 10 / 0.1 evaluating just above 100.
  return static_cast<int>(
      std::ceil(raw_capacity / conversion_rate - 1e-9));
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace fastrec
