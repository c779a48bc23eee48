#include "dsa/sweep.hpp"

#include "dsa/engine.hpp"
#include "dsa/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace dsa {

using nlohmann::json;

std::string Variant::label() const {
  std::string out(algorithm_name(algorithm));
  if (bands == BandSet::all())
    return out;
  for (BandId b : kAllBands)
    if (bands.contains(b))
      out += "-" + std::string(band_name(b));
  return out;
}

Variant Variant::parse(const std::string &label) {
  Variant v;
  std::stringstream ss(label);
  std::string part;
  std::getline(ss, part, '-');
  if (part == "bard")
    v.algorithm = Algorithm::Bard;
  else if (part == "ddsaar")
    v.algorithm = Algorithm::Ddsaar;
  else
    throw ConfigError("/algorithms", "unknown algorithm '" + label + "'");
  BandSet bands;
  while (std::getline(ss, part, '-')) {
    const auto b = parse_band(part);
    if (!b)
      throw ConfigError("/algorithms", "unknown band in '" + label + "'");
    bands.insert(*b);
  }
  if (!bands.empty())
    v.bands = bands;
  return v;
}

RunConfig Variant::apply(RunConfig config) const {
  config.engine.algorithm = algorithm;
  return restrict_to_band(std::move(config), bands);
}

std::string_view sweep_parameter_name(SweepParameter p) {
  switch (p) {
  case SweepParameter::SimTime: return "sim_time_checkpoints";
  case SweepParameter::NumPus: return "num_pus";
  case SweepParameter::NumSus: return "num_sus";
  case SweepParameter::PuConcentration: return "pu_concentration_band";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (values.empty())
    throw ConfigError("/values", "must not be empty");
  if (rounds < 1)
    throw ConfigError("/rounds", "must be at least 1");
  if (variants.empty())
    throw ConfigError("/algorithms", "must not be empty");
  base.validate();
}

SweepSpec sweep_spec_from_json(const json &doc) {
  if (!doc.is_object())
    throw ConfigError("/", "sweep spec must be an object");
  SweepSpec spec;
  for (const auto &[key, v] : doc.items()) {
    if (key == "varied_parameter") {
      const auto name = v.get<std::string>();
      if (name == "sim_time_checkpoints")
        spec.parameter = SweepParameter::SimTime;
      else if (name == "num_pus")
        spec.parameter = SweepParameter::NumPus;
      else if (name == "num_sus")
        spec.parameter = SweepParameter::NumSus;
      else if (name == "pu_concentration_band" || name == "pu_concentration")
        spec.parameter = SweepParameter::PuConcentration;
      else
        throw ConfigError("/varied_parameter", "unknown parameter '" + name + "'");
    } else if (key == "values") {
      if (!v.is_array())
        throw ConfigError("/values", "expected an array");
      for (const auto &x : v)
        spec.values.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    } else if (key == "algorithms") {
      spec.variants.clear();
      for (const auto &x : v)
        spec.variants.push_back(Variant::parse(x.get<std::string>()));
    } else if (key == "rounds") {
      spec.rounds = v.get<int>();
    } else if (key == "seed_base") {
      spec.seed_base = v.get<std::uint64_t>();
    } else if (key == "pu_counts") {
      spec.pu_counts = v.get<std::vector<int>>();
    } else if (key == "workers") {
      spec.workers = v.get<int>();
    } else if (key == "base_config") {
      try {
        spec.base = config_from_json(v);
      } catch (const ConfigError &e) {
        throw ConfigError("/base_config" + e.where(), e.detail());
      }
    } else {
      throw ConfigError("/" + key, "unknown key");
    }
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path.string(), "cannot open sweep spec");
  try {
    return sweep_spec_from_json(json::parse(in));
  } catch (const json::exception &e) {
    throw ConfigError(path.string(), e.what());
  }
}

namespace {

double number_value(const std::string &s, const char *what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ConfigError("/values", std::string("expected a number for ") + what + ", got '" + s +
                                     "'");
  }
}

} // namespace

std::vector<SweepPoint> expand_sweep(const SweepSpec &spec) {
  std::vector<SweepPoint> points;
  std::vector<int> counts = spec.pu_counts;
  if (spec.parameter != SweepParameter::PuConcentration || counts.empty())
    counts = {-1};
  for (const auto &variant : spec.variants) {
    for (const auto &value : spec.values) {
      for (int pus : counts) {
        for (int round = 0; round < spec.rounds; ++round) {
          RunConfig cfg = variant.apply(spec.base);
          switch (spec.parameter) {
          case SweepParameter::SimTime:
            cfg.engine.horizon_s = number_value(value, "sim_time_checkpoints");
            break;
          case SweepParameter::NumPus:
            cfg.deployment.num_pus = static_cast<int>(number_value(value, "num_pus"));
            break;
          case SweepParameter::NumSus:
            cfg.deployment.num_sus = static_cast<int>(number_value(value, "num_sus"));
            break;
          case SweepParameter::PuConcentration: {
            const auto b = parse_band(value);
            if (!b)
              throw ConfigError("/values", "unknown band '" + value + "'");
            cfg.deployment.pu_concentration = *b;
            if (pus >= 0)
              cfg.deployment.num_pus = pus;
            break;
          }
          }
          cfg.engine.seed = spec.seed_base + static_cast<std::uint64_t>(round);
          cfg.validate();
          points.push_back({variant, value, cfg.deployment.num_pus, round, std::move(cfg)});
        }
      }
    }
  }
  return points;
}

Stat summarize(const std::vector<std::optional<double>> &values) {
  Stat s;
  double sum = 0.0;
  for (const auto &v : values)
    if (v) {
      sum += *v;
      ++s.n;
    }
  if (s.n == 0)
    return s;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (const auto &v : values)
      if (v)
        ss += (*v - s.mean) * (*v - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord> &runs) {
  std::vector<AggregateRow> rows;
  std::size_t k = 0;
  while (k < runs.size()) {
    std::size_t end = k;
    const auto &p = runs[k].point;
    const auto label = p.variant.label();
    while (end < runs.size() && runs[end].point.variant.label() == label &&
           runs[end].point.value == p.value && runs[end].point.num_pus == p.num_pus)
      ++end;
    AggregateRow row;
    row.variant = label;
    row.value = p.value;
    row.num_pus = p.num_pus;
    row.rounds = static_cast<int>(end - k);
    std::vector<std::optional<double>> mdr, lat;
    std::array<std::vector<std::optional<double>>, kNumBands> usage;
    for (std::size_t r = k; r < end; ++r) {
      const auto &m = runs[r].metrics;
      mdr.push_back(m.mdr);
      lat.push_back(m.mean_latency_s);
      for (int b = 0; b < kNumBands; ++b)
        usage[b].push_back(m.band_usage[b]);
    }
    row.mdr = summarize(mdr);
    row.latency_s = summarize(lat);
    for (int b = 0; b < kNumBands; ++b)
      row.band_usage[b] = summarize(usage[b]);
    rows.push_back(std::move(row));
    k = end;
  }
  return rows;
}

SweepResult run_sweep(const SweepSpec &spec) {
  spec.validate();
  auto points = expand_sweep(spec);
  SweepResult result;
  result.runs.resize(points.size());

  unsigned workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = points.size();

  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= points.size() || failed.load())
        return;
      try {
        auto res = run(points[k].config);
        result.runs[k] = {points[k], config_hash(points[k].config), std::move(res.metrics)};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        failed = true;
        if (k < error_index) {
          error_index = k;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  for (auto &t : pool)
    t.join();

  if (error) {
    const auto &cfg = points[error_index].config;
    try {
      std::rethrow_exception(error);
    } catch (const std::exception &e) {
      throw RunFailure(config_hash(cfg), cfg.engine.seed, e.what());
    }
  }
  result.aggregates = aggregate(result.runs);
  return result;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string stat_cells(const Stat &s) {
  if (s.n == 0)
    return "NA,NA";
  return num(s.mean) + "," + num(s.std);
}

void provenance(std::ostream &os, const SweepSpec &spec) {
  os << "# config_hash=" << config_hash(spec.base) << " code_version=" << kCodeVersion
     << " seed_base=" << spec.seed_base << " rounds=" << spec.rounds
     << " varied_parameter=" << sweep_parameter_name(spec.parameter) << '\n';
}

} // namespace

void write_runs_csv(std::ostream &os, const SweepSpec &spec, const SweepResult &result) {
  provenance(os, spec);
  os << "config_hash,seed,algorithm,value,num_pus,round," << metrics_csv_header() << '\n';
  for (const auto &r : result.runs)
    os << r.config_hash << ',' << r.point.config.engine.seed << ',' << r.point.variant.label()
       << ',' << r.point.value << ',' << r.point.num_pus << ',' << r.point.round << ','
       << metrics_csv_row(r.metrics) << '\n';
}

void write_aggregate_csv(std::ostream &os, const SweepSpec &spec, const SweepResult &result) {
  provenance(os, spec);
  os << "algorithm,value,num_pus,rounds,mdr_mean,mdr_std,latency_mean_s,latency_std_s";
  for (BandId b : kAllBands)
    os << ",usage_" << band_name(b) << "_mean,usage_" << band_name(b) << "_std";
  os << '\n';
  for (const auto &row : result.aggregates) {
    os << row.variant << ',' << row.value << ',' << row.num_pus << ',' << row.rounds << ','
       << stat_cells(row.mdr) << ',' << stat_cells(row.latency_s);
    for (const auto &u : row.band_usage)
      os << ',' << stat_cells(u);
    os << '\n';
  }
}

void write_summary(std::ostream &os, const SweepSpec &spec, const SweepResult &result) {
  char buf[256];
  if (spec.parameter == SweepParameter::PuConcentration) {
    os << "Band usage (%) with all PUs concentrated in one band\n";
    std::snprintf(buf, sizeof buf, "%-14s %5s", "protocol", "PUs");
    os << buf;
    for (const auto &value : spec.values) {
      std::snprintf(buf, sizeof buf, " | all PUs in %-27s", value.c_str());
      os << buf;
    }
    os << '\n';
    std::snprintf(buf, sizeof buf, "%-14s %5s", "", "");
    os << buf;
    for (std::size_t v = 0; v < spec.values.size(); ++v) {
      os << " |";
      for (BandId b : kAllBands) {
        std::snprintf(buf, sizeof buf, " %9s", std::string(band_name(b)).c_str());
        os << buf;
      }
    }
    os << '\n';
    // One line per (variant, PU count), one block of cells per band value.
    for (const auto &variant : spec.variants) {
      std::vector<int> counts;
      for (const auto &row : result.aggregates)
        if (row.variant == variant.label() &&
            std::find(counts.begin(), counts.end(), row.num_pus) == counts.end())
          counts.push_back(row.num_pus);
      for (int pus : counts) {
        std::snprintf(buf, sizeof buf, "%-14s %5d", variant.label().c_str(), pus);
        os << buf;
        for (const auto &value : spec.values) {
          os << " |";
          const AggregateRow *match = nullptr;
          for (const auto &row : result.aggregates)
            if (row.variant == variant.label() && row.value == value && row.num_pus == pus)
              match = &row;
          for (int b = 0; b < kNumBands; ++b) {
            std::snprintf(buf, sizeof buf, " %9.2f",
                          match ? 100.0 * match->band_usage[b].mean : 0.0);
            os << buf;
          }
        }
        os << '\n';
      }
    }
    return;
  }

  os << "Mean over " << spec.rounds << " round(s), varying "
     << sweep_parameter_name(spec.parameter) << '\n';
  std::snprintf(buf, sizeof buf, "%-14s %10s %10s %10s %12s %12s\n", "protocol", "value", "MDR",
                "MDR std", "latency s", "latency std");
  os << buf;
  for (const auto &row : result.aggregates) {
    std::snprintf(buf, sizeof buf, "%-14s %10s %10.4f %10.4f %12.4f %12.4f\n",
                  row.variant.c_str(), row.value.c_str(), row.mdr.mean, row.mdr.std,
                  row.latency_s.mean, row.latency_s.std);
    os << buf;
  }
}

void write_sweep_outputs(const std::filesystem::path &dir, const SweepSpec &spec,
                         const SweepResult &result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "runs.csv");
    write_runs_csv(os, spec, result);
  }
  {
    std::ofstream os(dir / "aggregate.csv");
    write_aggregate_csv(os, spec, result);
  }
  {
    std::ofstream os(dir / "summary.txt");
    write_summary(os, spec, result);
  }
}

} // namespace dsa
