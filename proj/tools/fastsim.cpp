#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastrec/data_io.hpp"
#include "fastrec/report.hpp"
#include "fastrec/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("FASTSIM_OUT")) return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fastrec::DataError("cannot write " + path.string());
  out << content;
}

std::string hex_hash(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int cmd_generate(const fs::path& out_dir, const std::string& regime,
                 int users, int services, int topn, int cap_lo, int cap_hi,
                 int extra_rated, std::uint64_t seed) {
  fastrec::SyntheticSpec spec;
  spec.regime = fastrec::parse_regime(regime);
  spec.n_users = users;
  spec.n_services = services;
  spec.topn = topn;
  spec.cap_lo = cap_lo;
  spec.cap_hi = cap_hi;
  spec.extra_rated = extra_rated;
  spec.seed = seed;

  const fastrec::Dataset ds = fastrec::generate_synthetic(spec);
  const fs::path ratings_path = out_dir / "ratings.csv";
  const fs::path services_path = out_dir / "services.csv";
  write_file(services_path, fastrec::format_services(ds.catalog));
  write_file(ratings_path, fastrec::format_ratings(ds.ratings, ds.catalog));

  json manifest = {
      {"command", "generate"},
      {"config",
       {{"regime", regime},
        {"users", users},
        {"services", services},
        {"topn", topn},
        {"capacity_range", {cap_lo, cap_hi}},
        {"extra_rated", extra_rated}}},
      {"seed", seed},
      {"artifacts",
       {{"ratings", ratings_path.string()},
        {"services", services_path.string()}}},
      {"fingerprints",
       {{"ratings", hex_hash(fastrec::fnv1a_file(ratings_path))},
        {"services", hex_hash(fastrec::fnv1a_file(services_path))}}},
  };
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << ratings_path.string() << ", "
            << services_path.string() << ", "
            << (out_dir / "manifest.json").string() << "\n";
  return 0;
}

int cmd_run(const fs::path& ratings_path, const fs::path& services_path,
            const fs::path& out_path, fastrec::ScenarioConfig config,
            const std::string& participation, int topn,
            std::int64_t track_user_id, std::int64_t inject_user_id) {
  fastrec::Dataset ds;
  ds.catalog = fastrec::load_services(services_path);
  ds.ratings = fastrec::load_ratings(ratings_path, ds.catalog);
  ds.lists = fastrec::build_original_lists(ds.ratings, ds.catalog, topn);

  if (participation == "fixed") {
    config.participation = fastrec::Participation::Fixed;
  } else if (participation.rfind("bernoulli:", 0) == 0) {
    config.participation = fastrec::Participation::Bernoulli;
    config.fraction = std::stod(participation.substr(10));
    if (!(config.fraction > 0.0 && config.fraction <= 1.0)) {
      throw fastrec::DataError("bernoulli fraction must be in (0, 1]");
    }
  } else if (participation.rfind("trace:", 0) == 0) {
    config.participation = fastrec::Participation::Trace;
    config.trace = fastrec::load_trace(participation.substr(6), config.rounds,
                                       ds.ratings);
  } else {
    throw fastrec::DataError("participation must be fixed, bernoulli:p or "
                             "trace:path");
  }
  auto resolve_user = [&](std::int64_t id, const char* what) {
    const int u = ds.ratings.user_index(id);
    if (u < 0) {
      throw fastrec::DataError(std::string(what) + ": unknown user id " +
                               std::to_string(id));
    }
    return u;
  };
  if (track_user_id >= 0) {
    config.track_user = resolve_user(track_user_id, "--track-user");
  }
  if (inject_user_id >= 0) {
    config.inject_user = resolve_user(inject_user_id, "--inject-user");
  }

  const fastrec::MetricsLog log = fastrec::run_scenario(config, ds);
  write_file(out_path, log.to_csv());

  json manifest = {
      {"command", "run"},
      {"config",
       {{"strategy", config.strategy},
        {"rounds", config.rounds},
        {"participation", participation},
        {"topn", topn},
        {"metric_cadence", config.metric_cadence}}},
      {"seed", config.seed},
      {"dataset_fingerprints",
       {{"ratings", hex_hash(fastrec::fnv1a_file(ratings_path))},
        {"services", hex_hash(fastrec::fnv1a_file(services_path))}}},
      {"artifacts", {{"metrics_log", out_path.string()}}},
  };
  const fs::path manifest_path =
      out_path.parent_path() / (out_path.stem().string() + ".manifest.json");
  write_file(manifest_path, manifest.dump(2) + "\n");
  std::cout << "wrote " << out_path.string() << "\n";
  return 0;
}

int cmd_report(const std::vector<fs::path>& log_paths,
               const std::vector<std::string>& charts,
               const fs::path& out_dir) {
  std::vector<fastrec::MetricsLog> logs;
  for (const auto& path : log_paths) {
    std::ifstream in(path);
    if (!in) throw fastrec::DataError("cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    logs.push_back(fastrec::parse_metrics_log(content));
  }
  const fastrec::Report report = fastrec::summarize_logs(logs);
  if (report.truncated) {
    std::cerr << "warning: logs have mismatched round counts; aligned on "
              << report.aligned_rounds << " rounds\n";
  }
  std::cout << fastrec::format_report_table(report);
  for (const auto& metric : charts) {
    const fs::path chart_path = out_dir / ("chart_" + metric + ".svg");
    write_file(chart_path, fastrec::render_chart_svg(logs, metric));
    std::cout << "wrote " << chart_path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-constrained fair re-ranking simulator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
  std::string regime;
  int users = 800, services = 50, topn = 5, cap_lo = 50, cap_hi = 100;
  int extra_rated = 10;
  std::uint64_t seed = 0;
  fs::path out_dir = default_out_dir();
  gen->add_option("--regime", regime,
                  "very-popular|popular|ordinary|unpopular")->required();
  gen->add_option("--users", users);
  gen->add_option("--services", services);
  gen->add_option("--topn", topn);
  gen->add_option("--cap-lo", cap_lo);
  gen->add_option("--cap-hi", cap_hi);
  gen->add_option("--extra-rated", extra_rated,
                  "low-rated filler services per user");
  gen->add_option("--seed", seed);
  gen->add_option("--out-dir", out_dir);

  // run
  auto* run = app.add_subcommand("run", "Run one multi-round scenario");
  fs::path ratings_path, services_path, out_path = "metrics.csv";
  fastrec::ScenarioConfig config;
  std::string participation = "fixed";
  int run_topn = 5;
  std::int64_t track_user_id = -1, inject_user_id = -1;
  int inject_round = -1;
  run->add_option("--ratings", ratings_path)->required();
  run->add_option("--services", services_path)->required();
  run->add_option("--strategy", config.strategy,
                  "f-fast|d-fast|quality-max|exact|random");
  run->add_option("--rounds", config.rounds);
  run->add_option("--participation", participation,
                  "fixed | bernoulli:p | trace:path");
  run->add_option("--topn", run_topn);
  run->add_option("--seed", config.seed);
  run->add_option("--cadence", config.metric_cadence);
  run->add_option("--exact-guard", config.exact_guard,
                  "max placement variables for --strategy exact");
  run->add_option("--track-user", track_user_id, "user id to trace F for");
  run->add_option("--inject-user", inject_user_id,
                  "user id held out until --inject-round");
  run->add_option("--inject-round", inject_round);
  run->add_option("--out", out_path);

  // report
  auto* rep = app.add_subcommand("report", "Summarize metric logs");
  std::vector<fs::path> log_paths;
  std::vector<std::string> charts;
  fs::path report_dir = default_out_dir();
  rep->add_option("logs", log_paths, "metric log files")->required();
  rep->add_option("--chart", charts,
                  "variance|total_quality|mean_quality|tracked_user_F");
  rep->add_option("--out-dir", report_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(out_dir, regime, users, services, topn, cap_lo,
                          cap_hi, extra_rated, seed);
    }
    if (run->parsed()) {
      if (inject_round >= 0) config.inject_round = inject_round;
      if (inject_user_id >= 0 && inject_round < 0) {
        throw fastrec::DataError("--inject-user requires --inject-round");
      }
      return cmd_run(ratings_path, services_path, out_path, config,
                     participation, run_topn, track_user_id, inject_user_id);
    }
    return cmd_report(log_paths, charts, report_dir);
  } catch (const fastrec::GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fastrec::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
