// dsasim: run, sweep, audit and route-dump front end.

#include "dsa/audit.hpp"
#include "dsa/config.hpp"
#include "dsa/engine.hpp"
#include "dsa/errors.hpp"
#include "dsa/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRunFailure = 2, kAuditViolation = 3 };

std::ofstream open_out(const fs::path &path) {
  std::ofstream os(path);
  if (!os)
    throw dsa::Error("cannot write " + path.string());
  return os;
}

void provenance(std::ostream &os, const dsa::RunConfig &cfg) {
  os << "# config_hash=" << dsa::config_hash(cfg) << " code_version=" << dsa::kCodeVersion
     << " seed=" << cfg.engine.seed << '\n';
}

dsa::RunConfig resolve_config(const std::string &path, std::optional<std::uint64_t> seed) {
  dsa::RunConfig cfg = path.empty() ? dsa::RunConfig{} : dsa::load_config(path);
  if (seed)
    cfg.engine.seed = *seed;
  cfg.validate();
  return cfg;
}

void write_run(const fs::path &dir, const dsa::RunResult &r, bool dump_q) {
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "events.csv");
    provenance(os, r.config);
    r.log.write_csv(os);
  }
  {
    auto os = open_out(dir / "metrics.csv");
    provenance(os, r.config);
    os << "config_hash,seed," << dsa::metrics_csv_header() << '\n';
    os << dsa::config_hash(r.config) << ',' << r.config.engine.seed << ','
       << dsa::metrics_csv_row(r.metrics) << '\n';
  }
  {
    auto os = open_out(dir / "timeseries.csv");
    provenance(os, r.config);
    os << "time_s,mdr,mean_latency_s\n";
    for (const auto &c : r.metrics.timeseries) {
      os << c.time << ',';
      if (c.mdr)
        os << *c.mdr;
      else
        os << "NA";
      os << ',';
      if (c.mean_latency_s)
        os << *c.mean_latency_s;
      else
        os << "NA";
      os << '\n';
    }
  }
  {
    auto os = open_out(dir / "scenario.json");
    r.scenario.write_json(os);
  }
  {
    auto os = open_out(dir / "trace.csv");
    provenance(os, r.config);
    dsa::write_trace_csv(os, r.trace);
  }
  {
    auto os = open_out(dir / "config.json");
    os << dsa::config_to_json(r.config).dump(2) << '\n';
  }
  if (r.routes) {
    auto os = open_out(dir / "routes.csv");
    provenance(os, r.config);
    r.routes->write_csv(os);
  }
  if (dump_q && !r.q_tables.empty()) {
    const fs::path qdir = dir / "qtables";
    fs::create_directories(qdir);
    char buf[96];
    for (std::size_t n = 0; n < r.q_tables.size(); ++n) {
      const auto &q = r.q_tables[n];
      auto os = open_out(qdir / ("node_" + std::to_string(n) + ".csv"));
      os << "state_index,action_index,q_value\n";
      for (int s = 0; s < q.num_states(); ++s)
        for (int a = 0; a < q.num_actions(); ++a) {
          if (q.at(s, a) == 0.0)
            continue;
          std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", s, a, q.at(s, a));
          os << buf;
        }
    }
  }
}

void print_metrics(const dsa::RunMetrics &m) {
  std::cout << "messages  " << m.delivered_messages << '/' << m.generated_messages << '\n';
  std::cout << "mdr       " << (m.mdr ? std::to_string(*m.mdr) : "NA") << '\n';
  std::cout << "latency_s " << (m.mean_latency_s ? std::to_string(*m.mean_latency_s) : "NA")
            << '\n';
  std::cout << "packets   generated=" << m.generated_packets
            << " delivered=" << m.delivered_packets << " ttl=" << m.dropped_ttl
            << " full=" << m.dropped_full << " in_flight=" << m.in_flight << '\n';
  std::cout << "bands    ";
  for (dsa::BandId b : dsa::kAllBands)
    std::cout << ' ' << dsa::band_name(b) << '=' << m.band_usage[dsa::band_index(b)];
  std::cout << '\n';
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multi-band cognitive radio network simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool dump_q = false;
  bool quiet = false;

  auto *run = app.add_subcommand("run", "Run one configuration");
  run->add_option("-c,--config", config_path, "JSON config (defaults if omitted)");
  run->add_option("--seed", seed, "Override the seed");
  run->add_option("-o,--out-dir", out_dir, "Output directory");
  run->add_flag("--q-tables", dump_q, "Dump per-node Q-tables");
  run->add_flag("-q,--quiet", quiet, "No summary on stdout");

  std::string sweep_path;
  std::optional<int> rounds;
  std::optional<int> workers;
  auto *sweep = app.add_subcommand("sweep", "Run a sweep spec");
  sweep->add_option("spec", sweep_path, "Sweep spec JSON")->required();
  sweep->add_option("--seed", seed, "Override the seed base");
  sweep->add_option("--rounds", rounds, "Override the number of rounds")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-j,--workers", workers, "Worker threads (0 = all cores)");
  sweep->add_option("-o,--out-dir", out_dir, "Output directory");

  std::string events_path;
  std::string scenario_path;
  auto *audit = app.add_subcommand("audit", "Check an event log against its scenario");
  audit->add_option("--events", events_path, "events.csv")->required();
  audit->add_option("--scenario", scenario_path, "scenario.json")->required();

  auto *routes = app.add_subcommand("routes", "Dump the baseline route table");
  routes->add_option("-c,--config", config_path, "JSON config (defaults if omitted)");
  routes->add_option("--seed", seed, "Override the seed");
  routes->add_option("-o,--out-dir", out_dir, "Output directory (stdout if empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  dsa::RunConfig cfg;
  dsa::SweepSpec spec;
  try {
    if (*run || *routes)
      cfg = resolve_config(config_path, seed);
    if (*sweep) {
      spec = dsa::load_sweep_spec(sweep_path);
      if (seed)
        spec.seed_base = *seed;
      if (rounds)
        spec.rounds = *rounds;
      if (workers)
        spec.workers = *workers;
      spec.validate();
    }
  } catch (const dsa::Error &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  if (*audit) {
    try {
      std::ifstream ev(events_path);
      std::ifstream sc(scenario_path);
      if (!ev || !sc) {
        std::cerr << "cannot open audit inputs\n";
        return kConfigError;
      }
      const auto log = dsa::EventLog::read_csv(ev);
      const auto scenario = dsa::Scenario::read_json(sc);
      const auto report = dsa::audit_all(log, scenario);
      for (const auto &v : report.violations)
        std::cout << "violation: " << v << '\n';
      std::cout << report.checked << " checks, " << report.violations.size()
                << " violations\n";
      return report.ok() ? kOk : kAuditViolation;
    } catch (const std::exception &e) {
      std::cerr << "audit failed: " << e.what() << '\n';
      return kRunFailure;
    }
  }

  try {
    if (*run) {
      auto result = dsa::run(cfg);
      write_run(out_dir, result, dump_q);
      if (!quiet)
        print_metrics(result.metrics);
      const auto report = dsa::audit_all(result.log, result.scenario);
      if (!report.ok()) {
        for (const auto &v : report.violations)
          std::cerr << "violation: " << v << '\n';
        return kAuditViolation;
      }
    } else if (*routes) {
      cfg.engine.algorithm = dsa::Algorithm::Ddsaar;
      const auto topo = dsa::deploy(cfg.deployment, cfg.bands, cfg.engine.seed);
      const auto positions = topo.positions();
      const auto graph = dsa::build_stb_static(positions, cfg.bands, cfg.radio,
                                               cfg.packet_size_bits(), cfg.engine.usable_bands);
      const auto table = dsa::RouteTable::build(graph, topo.sources(), topo.destinations());
      if (out_dir.empty()) {
        table.write_csv(std::cout);
      } else {
        fs::create_directories(out_dir);
        auto os = open_out(fs::path(out_dir) / "routes.csv");
        provenance(os, cfg);
        table.write_csv(os);
      }
    } else if (*sweep) {
      const auto result = dsa::run_sweep(spec);
      dsa::write_sweep_outputs(out_dir, spec, result);
      std::ifstream summary(fs::path(out_dir) / "summary.txt");
      std::cout << summary.rdbuf();
    }
  } catch (const dsa::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception &e) {
    std::cerr << "run failure: " << e.what() << '\n';
    return kRunFailure;
  }
  return kOk;
}
