#include "dsa/config.hpp"

#include "dsa/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dsa {

using nlohmann::json;

std::string_view algorithm_name(Algorithm a) {
  return a == Algorithm::Bard ? "bard" : "ddsaar";
}

void RunConfig::validate() const {
  try {
    radio.validate();
  } catch (const ParameterError &e) {
    throw ConfigError("/radio", e.what());
  }
  if (bands.empty())
    throw ConfigError("/bands", "catalog must not be empty");
  BandSet seen;
  for (const auto &b : bands) {
    try {
      b.validate();
    } catch (const ParameterError &e) {
      throw ConfigError("/bands", e.what());
    }
    if (seen.contains(b.id))
      throw ConfigError("/bands", "duplicate band " + std::string(band_name(b.id)));
    seen.insert(b.id);
  }
  if (deployment.pu_concentration && !seen.contains(*deployment.pu_concentration))
    throw ConfigError("/pu_concentration", "band is not in the catalog");
  BandSet usable;
  for (BandId b : kAllBands)
    if (engine.usable_bands.contains(b) && seen.contains(b))
      usable.insert(b);
  if (usable.empty())
    throw ConfigError("/band_restriction", "no usable band left in the catalog");
  if (deployment.num_sus < 0 || deployment.num_sources < 0 || deployment.num_destinations < 0 ||
      deployment.num_pus < 0)
    throw ConfigError("/num_sus", "counts must be non-negative");
  if (deployment.num_sources + deployment.num_destinations > deployment.num_sus)
    throw ConfigError("/num_sus", "sources + destinations exceed the number of SUs");
  if (deployment.num_sources > 0 && deployment.num_destinations == 0)
    throw ConfigError("/num_destinations", "sources need at least one destination");
  if (!(deployment.area_width_m > 0.0) || !(deployment.area_height_m > 0.0))
    throw ConfigError("/area_m", "dimensions must be positive");
  if (!(pu_min_duration_s > 0.0) || !(pu_max_duration_s >= pu_min_duration_s))
    throw ConfigError("/pu_duration_bounds_s", "needs 0 < min <= max");
  if (queue_capacity < 1)
    throw ConfigError("/queue_capacity", "must be at least 1");
  traffic.validate();
  rl.validate();
  if (!(engine.timestep_s > 0.0))
    throw ConfigError("/timestep_s", "must be positive");
  if (!(engine.horizon_s >= 0.0))
    throw ConfigError("/horizon_s", "must be non-negative");
  const double steps = engine.horizon_s / engine.timestep_s;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw ConfigError("/horizon_s", "must be an integer multiple of timestep_s");
}

RunConfig restrict_to_band(RunConfig config, BandSet bands) {
  config.engine.usable_bands = bands;
  return config;
}

RunConfig restrict_to_band(RunConfig config, BandId band) {
  return restrict_to_band(std::move(config), BandSet::only(band));
}

namespace {

/// Walks one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class ObjectReader {
public:
  ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  template <class T> void get(const char *key, T &out) {
    const auto it = obj_.find(key);
    if (it == obj_.end())
      return;
    used_.insert(key);
    try {
      out = it->template get<T>();
    } catch (const json::exception &e) {
      throw ConfigError(path_ + "/" + key, std::string("wrong type: ") + e.what());
    }
  }

  const json *child(const char *key) {
    const auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) {
      if (it != obj_.end())
        used_.insert(key);
      return nullptr;
    }
    used_.insert(key);
    return &*it;
  }

  std::string path(const char *key) const { return path_ + "/" + key; }

  void finish() const {
    for (const auto &[k, v] : obj_.items())
      if (!used_.contains(k))
        throw ConfigError(path_ + "/" + k, "unknown key");
  }

private:
  const json &obj_;
  std::string path_;
  std::set<std::string> used_;
};

BandId band_from_json(const json &v, const std::string &path) {
  if (!v.is_string())
    throw ConfigError(path, "expected a band name");
  const auto b = parse_band(v.get<std::string>());
  if (!b)
    throw ConfigError(path, "unknown band '" + v.get<std::string>() + "'");
  return *b;
}

std::pair<double, double> pair_from_json(const json &v, const std::string &path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(path, "expected a two-element numeric array");
  return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

RunConfig config_from_json(const json &doc) {
  RunConfig cfg;
  if (doc.is_null())
    return cfg;
  ObjectReader top(doc, "");

  std::uint64_t seed = cfg.engine.seed;
  top.get("seed", seed);
  cfg.engine.seed = seed;
  top.get("horizon_s", cfg.engine.horizon_s);
  top.get("timestep_s", cfg.engine.timestep_s);
  if (const json *v = top.child("algorithm")) {
    const auto name = v->is_string() ? v->get<std::string>() : std::string();
    if (name == "bard")
      cfg.engine.algorithm = Algorithm::Bard;
    else if (name == "ddsaar")
      cfg.engine.algorithm = Algorithm::Ddsaar;
    else
      throw ConfigError("/algorithm", "expected \"bard\" or \"ddsaar\"");
  }
  if (const json *v = top.child("band_restriction")) {
    BandSet set;
    if (v->is_array()) {
      for (std::size_t k = 0; k < v->size(); ++k)
        set.insert(band_from_json((*v)[k], "/band_restriction/" + std::to_string(k)));
    } else {
      set.insert(band_from_json(*v, "/band_restriction"));
    }
    cfg.engine.usable_bands = set;
  }

  if (const json *v = top.child("area_m")) {
    const auto [w, h] = pair_from_json(*v, "/area_m");
    cfg.deployment.area_width_m = w;
    cfg.deployment.area_height_m = h;
  }
  top.get("num_sus", cfg.deployment.num_sus);
  top.get("num_sources", cfg.deployment.num_sources);
  top.get("num_destinations", cfg.deployment.num_destinations);
  top.get("num_pus", cfg.deployment.num_pus);
  if (const json *v = top.child("pu_concentration"))
    cfg.deployment.pu_concentration = band_from_json(*v, "/pu_concentration");
  if (const json *v = top.child("pu_duration_bounds_s")) {
    const auto [lo, hi] = pair_from_json(*v, "/pu_duration_bounds_s");
    cfg.pu_min_duration_s = lo;
    cfg.pu_max_duration_s = hi;
  }
  top.get("queue_capacity", cfg.queue_capacity);

  if (const json *v = top.child("traffic")) {
    ObjectReader r(*v, "/traffic");
    r.get("burst_mean_interarrival_s", cfg.traffic.burst_mean_interarrival_s);
    if (const json *b = r.child("burst_size")) {
      const auto [lo, hi] = pair_from_json(*b, "/traffic/burst_size");
      cfg.traffic.burst_min = static_cast<int>(lo);
      cfg.traffic.burst_max = static_cast<int>(hi);
    }
    r.get("message_sizes_mbit", cfg.traffic.message_sizes_mbit);
    r.get("packet_size_mbit", cfg.traffic.packet_size_mbit);
    r.get("ttl_s", cfg.traffic.ttl_s);
    r.finish();
  }

  if (const json *v = top.child("radio")) {
    ObjectReader r(*v, "/radio");
    r.get("path_loss_exponent", cfg.radio.path_loss_exponent);
    r.get("rx_power_threshold_dbm", cfg.radio.rx_power_threshold_dbm);
    r.get("noise_floor_dbm", cfg.radio.noise_floor_dbm);
    r.get("reference_distance_m", cfg.radio.reference_distance_m);
    r.get("speed_of_light_mps", cfg.radio.speed_of_light_mps);
    r.finish();
  }
  try {
    cfg.radio.validate();
  } catch (const ParameterError &e) {
    throw ConfigError("/radio", e.what());
  }

  int channels_override = 0;
  top.get("channels_per_band", channels_override);

  // Bands: either a full catalog or the defaults re-derived under `radio`.
  std::vector<BandProfile> raw;
  if (const json *v = top.child("bands")) {
    if (!v->is_array())
      throw ConfigError("/bands", "expected an array");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const std::string path = "/bands/" + std::to_string(k);
      ObjectReader r((*v)[k], path);
      BandProfile p;
      const json *id = r.child("id");
      if (!id)
        throw ConfigError(path + "/id", "missing band id");
      p.id = band_from_json(*id, path + "/id");
      r.get("carrier_freq_hz", p.carrier_freq_hz);
      r.get("channel_bandwidth_hz", p.channel_bandwidth_hz);
      r.get("transmit_power_w", p.transmit_power_w);
      r.get("num_channels", p.num_channels);
      // Derived values are echoed by config_to_json; they are recomputed.
      double derived = 0.0;
      r.get("range_m", derived);
      r.get("bit_rate_bps", derived);
      r.finish();
      raw.push_back(p);
    }
  } else {
    raw = default_band_catalog(RadioParams{});
  }
  cfg.bands.clear();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto &p = raw[k];
    const int channels = channels_override > 0 ? channels_override : p.num_channels;
    try {
      cfg.bands.push_back(make_band_profile(p.id, p.carrier_freq_hz, p.channel_bandwidth_hz,
                                            p.transmit_power_w, channels, cfg.radio));
    } catch (const ParameterError &e) {
      throw ConfigError("/bands/" + std::to_string(k), e.what());
    }
  }

  if (const json *v = top.child("rl")) {
    ObjectReader r(*v, "/rl");
    r.get("alpha", cfg.rl.alpha);
    r.get("gamma", cfg.rl.gamma);
    r.get("epsilon0", cfg.rl.epsilon0);
    r.get("epsilon_decay", cfg.rl.epsilon_decay);
    r.get("epsilon_min", cfg.rl.epsilon_min);
    r.get("eta1", cfg.rl.eta1);
    r.get("eta2", cfg.rl.eta2);
    r.get("eta3", cfg.rl.eta3);
    r.get("delta", cfg.rl.delta);
    r.get("mu", cfg.rl.mu);
    r.get("rho", cfg.rl.rho);
    r.finish();
  }

  top.finish();
  cfg.validate();
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      blank = false;
  if (blank)
    return config_from_json(json());

  // Track line/column ourselves; nlohmann only reports a byte offset.
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(std::to_string(line) + ":" + std::to_string(col), e.what());
  }
  return config_from_json(doc);
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError &e) {
    throw ConfigError(path.string() + ":" + e.where(), e.detail());
  }
}

json config_to_json(const RunConfig &c) {
  json bands = json::array();
  for (const auto &b : c.bands)
    bands.push_back({{"id", band_name(b.id)},
                     {"carrier_freq_hz", b.carrier_freq_hz},
                     {"channel_bandwidth_hz", b.channel_bandwidth_hz},
                     {"transmit_power_w", b.transmit_power_w},
                     {"num_channels", b.num_channels},
                     {"range_m", b.range_m},
                     {"bit_rate_bps", b.bit_rate_bps}});
  json usable = json::array();
  for (BandId b : kAllBands)
    if (c.engine.usable_bands.contains(b))
      usable.push_back(band_name(b));
  return {
      {"seed", c.engine.seed},
      {"horizon_s", c.engine.horizon_s},
      {"timestep_s", c.engine.timestep_s},
      {"algorithm", algorithm_name(c.engine.algorithm)},
      {"band_restriction", usable},
      {"area_m", {c.deployment.area_width_m, c.deployment.area_height_m}},
      {"num_sus", c.deployment.num_sus},
      {"num_sources", c.deployment.num_sources},
      {"num_destinations", c.deployment.num_destinations},
      {"num_pus", c.deployment.num_pus},
      {"pu_concentration", c.deployment.pu_concentration
                               ? json(band_name(*c.deployment.pu_concentration))
                               : json(nullptr)},
      {"pu_duration_bounds_s", {c.pu_min_duration_s, c.pu_max_duration_s}},
      {"queue_capacity", c.queue_capacity},
      {"traffic",
       {{"burst_mean_interarrival_s", c.traffic.burst_mean_interarrival_s},
        {"burst_size", {c.traffic.burst_min, c.traffic.burst_max}},
        {"message_sizes_mbit", c.traffic.message_sizes_mbit},
        {"packet_size_mbit", c.traffic.packet_size_mbit},
        {"ttl_s", c.traffic.ttl_s}}},
      {"radio",
       {{"path_loss_exponent", c.radio.path_loss_exponent},
        {"rx_power_threshold_dbm", c.radio.rx_power_threshold_dbm},
        {"noise_floor_dbm", c.radio.noise_floor_dbm},
        {"reference_distance_m", c.radio.reference_distance_m},
        {"speed_of_light_mps", c.radio.speed_of_light_mps}}},
      {"bands", bands},
      {"rl",
       {{"alpha", c.rl.alpha},
        {"gamma", c.rl.gamma},
        {"epsilon0", c.rl.epsilon0},
        {"epsilon_decay", c.rl.epsilon_decay},
        {"epsilon_min", c.rl.epsilon_min},
        {"eta1", c.rl.eta1},
        {"eta2", c.rl.eta2},
        {"eta3", c.rl.eta3},
        {"delta", c.rl.delta},
        {"mu", c.rl.mu},
        {"rho", c.rl.rho}}},
  };
}

std::string config_hash(const RunConfig &config) {
  json doc = config_to_json(config);
  doc.erase("seed");
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace dsa
