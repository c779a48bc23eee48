#pragma once

#include "dsa/bard.hpp"
#include "dsa/radio.hpp"
#include "dsa/topology.hpp"
#include "dsa/traffic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dsa {

enum class Algorithm : std::uint8_t { Bard, Ddsaar };

std::string_view algorithm_name(Algorithm a);

struct EngineConfig {
  double horizon_s = 480.0;
  double timestep_s = 1.0;
  Algorithm algorithm = Algorithm::Bard;
  /// Bands the SUs may use. PUs always occupy the full catalog.
  BandSet usable_bands = BandSet::all();
  std::uint64_t seed = 1;
};

/// Fully resolved run configuration.
struct RunConfig {
  RadioParams radio;
  std::vector<BandProfile> bands = default_band_catalog(radio);
  DeploymentParams deployment;
  double pu_min_duration_s = 1.0;
  double pu_max_duration_s = 4.0;
  int queue_capacity = 200;
  TrafficParams traffic;
  RlParams rl;
  EngineConfig engine;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  double packet_size_bits() const { return traffic.packet_size_mbit * 1e6; }
};

/// Restricts the SUs of either algorithm to `bands`; BandSet::all() is the
/// identity.
RunConfig restrict_to_band(RunConfig config, BandSet bands);
RunConfig restrict_to_band(RunConfig config, BandId band);

/// Applies a JSON document over the defaults. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json &doc);
/// Parse errors report "line:column"; an empty document yields the defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path &path);

/// Canonical JSON of every resolved field, including derived band values.
nlohmann::json config_to_json(const RunConfig &config);
/// FNV-1a over the canonical JSON, excluding the seed.
std::string config_hash(const RunConfig &config);

} // namespace dsa
