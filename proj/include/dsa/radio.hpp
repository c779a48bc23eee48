#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsa {

enum class BandId : std::uint8_t { TV = 0, ISM = 1, LTE = 2, CBRS = 3 };

inline constexpr int kNumBands = 4;
inline constexpr std::array<BandId, kNumBands> kAllBands{BandId::TV, BandId::ISM, BandId::LTE,
                                                         BandId::CBRS};

constexpr int band_index(BandId b) { return static_cast<int>(b); }
std::string_view band_name(BandId b);
std::optional<BandId> parse_band(std::string_view name);

/// Small set of bands, one bit per BandId.
class BandSet {
public:
  constexpr BandSet() = default;
  static constexpr BandSet all() { return BandSet{(1u << kNumBands) - 1}; }
  static constexpr BandSet only(BandId b) { return BandSet{1u << band_index(b)}; }

  constexpr bool contains(BandId b) const { return (bits_ >> band_index(b)) & 1u; }
  constexpr void insert(BandId b) { bits_ |= 1u << band_index(b); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned bits() const { return bits_; }
  constexpr bool operator==(const BandSet &) const = default;

private:
  constexpr explicit BandSet(unsigned bits) : bits_(bits) {}
  unsigned bits_ = 0;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position &a, const Position &b);

struct RadioParams {
  double path_loss_exponent = 2.8;
  double rx_power_threshold_dbm = -95.0;
  double noise_floor_dbm = -100.0;
  double reference_distance_m = 1.0;
  double speed_of_light_mps = 299792458.0;

  void validate() const;
};

/// Electromagnetic characteristics of one spectrum band. `range_m` and
/// `bit_rate_bps` are derived; use make_band_profile() to keep them in sync.
struct BandProfile {
  BandId id = BandId::TV;
  double carrier_freq_hz = 0.0;
  double channel_bandwidth_hz = 0.0;
  double transmit_power_w = 0.0;
  int num_channels = 1;
  double range_m = 0.0;
  double bit_rate_bps = 0.0;

  void validate() const;
};

double watts_to_dbm(double watts);

/// Free-space path loss at the reference distance plus log-distance decay.
double path_loss_db(double distance_m, double carrier_freq_hz, const RadioParams &params);

/// Distance at which received power falls to the receive threshold.
double compute_range(const BandProfile &profile, const RadioParams &params);

/// Shannon capacity at the SNR implied by the receive threshold.
double compute_bit_rate(const BandProfile &profile, const RadioParams &params);

BandProfile make_band_profile(BandId id, double carrier_freq_hz, double channel_bandwidth_hz,
                              double transmit_power_w, int num_channels,
                              const RadioParams &params);

/// TV 600 MHz/6 MHz/4 W, ISM 2.4 GHz/20 MHz/1 W, LTE 1.9 GHz/20 MHz/4 W,
/// CBRS 3.5 GHz/40 MHz/10 W; six channels each.
std::vector<BandProfile> default_band_catalog(const RadioParams &params = {});

/// Catalog lookup by band id. Throws LookupError when the band is absent.
const BandProfile &find_band(std::span<const BandProfile> catalog, BandId id);

/// Nodes are identified by their index into `positions`.
bool link_exists(int i, int j, BandId band, std::span<const Position> positions,
                 std::span<const BandProfile> catalog);

} // namespace dsa
