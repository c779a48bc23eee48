#include "dsa/radio.hpp"

#include "dsa/errors.hpp"

#include <cmath>
#include <numbers>

namespace dsa {

std::string_view band_name(BandId b) {
  switch (b) {
  case BandId::TV: return "TV";
  case BandId::ISM: return "ISM";
  case BandId::LTE: return "LTE";
  case BandId::CBRS: return "CBRS";
  }
  return "?";
}

std::optional<BandId> parse_band(std::string_view name) {
  for (BandId b : kAllBands)
    if (band_name(b) == name)
      return b;
  return std::nullopt;
}

double distance(const Position &a, const Position &b) { return std::hypot(a.x - b.x, a.y - b.y); }

void RadioParams::validate() const {
  if (!(path_loss_exponent >= 2.0))
    throw ParameterError("path_loss_exponent must be >= 2");
  if (!(rx_power_threshold_dbm > noise_floor_dbm))
    throw ParameterError("rx_power_threshold must exceed noise_floor");
  if (!(reference_distance_m > 0.0))
    throw ParameterError("reference_distance must be positive");
  if (!(speed_of_light_mps > 0.0))
    throw ParameterError("speed_of_light must be positive");
}

void BandProfile::validate() const {
  if (!(carrier_freq_hz > 0.0) || !(channel_bandwidth_hz > 0.0) || !(transmit_power_w > 0.0))
    throw ParameterError(std::string(band_name(id)) +
                         ": frequency, bandwidth and power must be positive");
  if (num_channels < 1)
    throw ParameterError(std::string(band_name(id)) + ": needs at least one channel");
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

double path_loss_db(double distance_m, double carrier_freq_hz, const RadioParams &params) {
  const double d0 = params.reference_distance_m;
  const double fspl_d0 =
      20.0 * std::log10(4.0 * std::numbers::pi * d0 * carrier_freq_hz / params.speed_of_light_mps);
  return fspl_d0 + 10.0 * params.path_loss_exponent * std::log10(distance_m / d0);
}

double compute_range(const BandProfile &profile, const RadioParams &params) {
  const double d0 = params.reference_distance_m;
  const double fspl_d0 = path_loss_db(d0, profile.carrier_freq_hz, params);
  const double margin_db =
      watts_to_dbm(profile.transmit_power_w) - fspl_d0 - params.rx_power_threshold_dbm;
  const double range = d0 * std::pow(10.0, margin_db / (10.0 * params.path_loss_exponent));
  if (!std::isfinite(range) || !(range > 0.0))
    throw ParameterError(std::string(band_name(profile.id)) + ": range is not finite");
  return range;
}

double compute_bit_rate(const BandProfile &profile, const RadioParams &params) {
  const double snr_linear =
      std::pow(10.0, (params.rx_power_threshold_dbm - params.noise_floor_dbm) / 10.0);
  return profile.channel_bandwidth_hz * std::log2(1.0 + snr_linear);
}

BandProfile make_band_profile(BandId id, double carrier_freq_hz, double channel_bandwidth_hz,
                              double transmit_power_w, int num_channels,
                              const RadioParams &params) {
  BandProfile p;
  p.id = id;
  p.carrier_freq_hz = carrier_freq_hz;
  p.channel_bandwidth_hz = channel_bandwidth_hz;
  p.transmit_power_w = transmit_power_w;
  p.num_channels = num_channels;
  p.validate();
  p.range_m = compute_range(p, params);
  p.bit_rate_bps = compute_bit_rate(p, params);
  return p;
}

std::vector<BandProfile> default_band_catalog(const RadioParams &params) {
  return {
      make_band_profile(BandId::TV, 600e6, 6e6, 4.0, 6, params),
      make_band_profile(BandId::ISM, 2.4e9, 20e6, 1.0, 6, params),
      make_band_profile(BandId::LTE, 1.9e9, 20e6, 4.0, 6, params),
      make_band_profile(BandId::CBRS, 3.5e9, 40e6, 10.0, 6, params),
  };
}

const BandProfile &find_band(std::span<const BandProfile> catalog, BandId id) {
  for (const auto &p : catalog)
    if (p.id == id)
      return p;
  throw LookupError("band " + std::string(band_name(id)) + " not in catalog");
}

bool link_exists(int i, int j, BandId band, std::span<const Position> positions,
                 std::span<const BandProfile> catalog) {
  const auto n = static_cast<int>(positions.size());
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw LookupError("unknown node id");
  if (i == j)
    return false;
  return distance(positions[i], positions[j]) <= find_band(catalog, band).range_m;
}

} // namespace dsa
