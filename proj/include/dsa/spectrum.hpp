#pragma once

#include "dsa/errors.hpp"
#include "dsa/radio.hpp"
#include "dsa/rng.hpp"

#include <array>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace dsa {

enum class PuState : std::uint8_t { Off = 0, On = 1 };

/// One primary user's alternating ON/OFF renewal process on a fixed
/// (band, channel). Sojourns in either state are Uniform(min, max).
struct PuProcess {
  int pu_id = 0;
  Position position;
  BandId band = BandId::TV;
  int channel = 0;
  PuState state = PuState::Off;
  double next_transition = 0.0;
  double last_advanced = 0.0;
  double min_duration = 1.0;
  double max_duration = 4.0;
};

/// Applies every state flip in (last_advanced, t] in order. `draw_duration`
/// is called once per flip for the sojourn of the state being entered, and
/// `on_flip(time, new_state)` observes each flip.
template <class DrawDuration, class OnFlip>
PuProcess advance_pu(PuProcess process, double t, DrawDuration &&draw_duration, OnFlip &&on_flip);

template <class DrawDuration>
PuProcess advance_pu(PuProcess process, double t, DrawDuration &&draw_duration) {
  return advance_pu(std::move(process), t, std::forward<DrawDuration>(draw_duration),
                    [](double, PuState) {});
}

PuProcess advance_pu(PuProcess process, double t, Rng &rng);

/// PU process plus the full history of its flips, so that the state can be
/// looked up at any instant up to the covered horizon.
class PuActivity {
public:
  /// Draws the initial state and first sojourn from `rng`; the stream is
  /// retained for later sojourns.
  PuActivity(int pu_id, Position position, BandId band, int channel, double min_duration,
             double max_duration, Rng rng);

  const PuProcess &process() const { return process_; }
  PuState initial_state() const { return initial_state_; }
  double covered_until() const { return process_.last_advanced; }

  void extend_to(double t);
  /// Requires t <= covered_until().
  bool is_on(double t) const;
  /// ON intervals [start, end) clipped to [0, until].
  std::vector<std::pair<double, double>> on_intervals(double until) const;
  const std::vector<double> &flip_times() const { return flips_; }

private:
  PuProcess process_;
  PuState initial_state_;
  std::vector<double> flips_;
  Rng rng_;
};

/// A secondary transmission occupying a (band, channel) over [start, end).
struct SuTransmission {
  int transmitter = 0;
  BandId band = BandId::TV;
  int channel = 0;
  double start = 0.0;
  double end = 0.0;
  Position origin;

  bool operator==(const SuTransmission &o) const {
    return transmitter == o.transmitter && band == o.band && channel == o.channel &&
           start == o.start && end == o.end;
  }
};

/// Occupancy of every (band, channel) by PUs and ongoing SU transmissions.
/// Answers listen-before-talk queries.
class Spectrum {
public:
  Spectrum(std::vector<BandProfile> catalog, std::vector<PuActivity> pus);

  const std::vector<BandProfile> &catalog() const { return catalog_; }
  const std::vector<PuActivity> &pus() const { return pus_; }

  /// Extends every PU timeline so queries up to `t` are answerable.
  void advance_to(double t);

  /// Lowest channel of `band` with no ON PU and no overlapping SU transmission
  /// within the band's range of either endpoint. With `duration > 0` the SU
  /// overlap test covers [t, t + duration) instead of the instant t.
  std::optional<int> find_common_channel(const Position &a, const Position &b, BandId band,
                                         double t, double duration = 0.0) const;

  bool channel_free(const Position &a, const Position &b, BandId band, int channel, double t,
                    double duration = 0.0) const;

  /// Precomputes which PUs are within range of each node so the node-indexed
  /// queries below skip the distance tests.
  void attach_nodes(std::vector<Position> nodes);
  std::optional<int> find_common_channel(int a, int b, BandId band, double t,
                                         double duration = 0.0) const;
  /// True if some channel of `band` is free between `a` and any of `peers`.
  bool any_common_channel(int a, std::span<const int> peers, BandId band, double t) const;

  void register_transmission(const SuTransmission &tx);
  /// Drops transmissions with end <= t.
  void expire_transmissions(double t);
  std::size_t active_transmissions() const;

private:
  int slot(BandId band, int channel) const;

  std::vector<BandProfile> catalog_;
  std::array<int, kNumBands> first_slot_{};
  std::array<int, kNumBands> channels_{};
  std::vector<PuActivity> pus_;
  std::vector<std::vector<int>> pus_by_slot_;
  std::vector<std::vector<SuTransmission>> tx_by_slot_;
  std::vector<Position> nodes_;
  std::vector<std::vector<int>> near_; // node * slots + slot -> PU indices
  std::array<double, kNumBands> range_{};

  bool node_clear(int node, int s, double t) const;
  bool su_clear(const Position &a, const Position &b, int s, double range, double t,
                double duration) const;
};

// ---------------------------------------------------------------------------

template <class DrawDuration, class OnFlip>
PuProcess advance_pu(PuProcess process, double t, DrawDuration &&draw_duration, OnFlip &&on_flip) {
  if (t < process.last_advanced)
    throw TemporalOrderError("advance_pu: time moved backwards");
  while (process.next_transition <= t) {
    const double flip_at = process.next_transition;
    process.state = process.state == PuState::On ? PuState::Off : PuState::On;
    on_flip(flip_at, process.state);
    process.next_transition = flip_at + draw_duration();
  }
  process.last_advanced = t;
  return process;
}

} // namespace dsa
