#pragma once

#include "dsa/events.hpp"
#include "dsa/radio.hpp"
#include "dsa/traffic.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dsa {

struct Checkpoint {
  double time = 0.0;
  /// Among messages created at or before `time`, fraction fully delivered by
  /// `time`. Empty when no message was created yet.
  std::optional<double> mdr;
  std::optional<double> mean_latency_s;
};

struct RunMetrics {
  std::int64_t generated_messages = 0;
  std::int64_t delivered_messages = 0;
  /// Empty for a run without traffic.
  std::optional<double> mdr;
  /// Mean over delivered messages of last-packet delivery minus creation.
  std::optional<double> mean_latency_s;

  std::int64_t generated_packets = 0;
  std::int64_t delivered_packets = 0;
  std::int64_t dropped_ttl = 0;
  std::int64_t dropped_full = 0;
  std::int64_t in_flight = 0;

  std::array<std::int64_t, kNumBands> tx_success_by_band{};
  /// Share of successful transmissions per band; all zero without successes.
  std::array<double, kNumBands> band_usage{};

  std::vector<Checkpoint> timeseries;
};

/// Aggregates a completed run's log. Checkpoints fall every
/// `checkpoint_every_s` seconds up to and including `horizon_s`.
RunMetrics compute_metrics(const EventLog &log, std::span<const Message> traffic,
                           double horizon_s, double checkpoint_every_s = 60.0);

/// Column names of the one-row metrics CSV, after config_hash and seed.
std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics &m);

} // namespace dsa
