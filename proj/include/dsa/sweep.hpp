#pragma once

#include "dsa/config.hpp"
#include "dsa/errors.hpp"
#include "dsa/metrics.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dsa {

inline constexpr const char *kCodeVersion = "0.1.0";

/// An algorithm together with the bands its SUs may use, e.g. "bard",
/// "ddsaar" or the single-band variant "bard-TV".
struct Variant {
  Algorithm algorithm = Algorithm::Bard;
  BandSet bands = BandSet::all();

  std::string label() const;
  static Variant parse(const std::string &label);
  RunConfig apply(RunConfig config) const;
};

enum class SweepParameter : std::uint8_t { SimTime, NumPus, NumSus, PuConcentration };

std::string_view sweep_parameter_name(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::NumPus;
  /// Numbers for sim_time_checkpoints/num_pus/num_sus; band names for
  /// pu_concentration.
  std::vector<std::string> values;
  std::vector<Variant> variants{Variant{Algorithm::Bard}, Variant{Algorithm::Ddsaar}};
  int rounds = 20;
  std::uint64_t seed_base = 1;
  /// PU counts crossed with the concentration band (pu_concentration only).
  std::vector<int> pu_counts;
  RunConfig base;
  /// 0 means one worker per hardware thread.
  int workers = 0;

  void validate() const;
};

/// Unknown keys are rejected; `base_config` is a nested config document.
SweepSpec sweep_spec_from_json(const nlohmann::json &doc);
SweepSpec load_sweep_spec(const std::filesystem::path &path);

struct SweepPoint {
  Variant variant;
  std::string value;
  int num_pus = 0;
  int round = 0;
  RunConfig config;
};

/// Expands variants x values x rounds in (variant, value, round) order with
/// seeds seed_base + round.
std::vector<SweepPoint> expand_sweep(const SweepSpec &spec);

struct RunRecord {
  SweepPoint point;
  std::string config_hash;
  RunMetrics metrics;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;
  int n = 0;
};

/// Mean and sample standard deviation (0 for a single sample) of the present
/// values; n = 0 when none are present.
Stat summarize(const std::vector<std::optional<double>> &values);

struct AggregateRow {
  std::string variant;
  std::string value;
  int num_pus = 0;
  int rounds = 0;
  Stat mdr;
  Stat latency_s;
  std::array<Stat, kNumBands> band_usage;
};

struct SweepResult {
  std::vector<RunRecord> runs;
  std::vector<AggregateRow> aggregates;
};

/// Thrown when a constituent run fails; names the failing configuration.
class RunFailure : public Error {
public:
  RunFailure(std::string config_hash, std::uint64_t seed, const std::string &what)
      : Error("run failed (config " + config_hash + ", seed " + std::to_string(seed) +
              "): " + what),
        config_hash(std::move(config_hash)), seed(seed) {}
  std::string config_hash;
  std::uint64_t seed;
};

/// Runs every point on a bounded worker pool. Aggregation order is fixed by
/// expand_sweep(), independent of completion order.
SweepResult run_sweep(const SweepSpec &spec);

std::vector<AggregateRow> aggregate(const std::vector<RunRecord> &runs);

void write_runs_csv(std::ostream &os, const SweepSpec &spec, const SweepResult &result);
void write_aggregate_csv(std::ostream &os, const SweepSpec &spec, const SweepResult &result);
/// Plain-text tables; concentration sweeps use a per-band percentage layout.
void write_summary(std::ostream &os, const SweepSpec &spec, const SweepResult &result);

/// Writes runs.csv, aggregate.csv and summary.txt into `dir`.
void write_sweep_outputs(const std::filesystem::path &dir, const SweepSpec &spec,
                         const SweepResult &result);

} // namespace dsa
