#pragma once

#include "dsa/radio.hpp"
#include "dsa/rng.hpp"

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

namespace dsa {

struct TrafficParams {
  double burst_mean_interarrival_s = 15.0;
  int burst_min = 5;
  int burst_max = 15;
  std::vector<double> message_sizes_mbit{5.0, 20.0, 40.0, 60.0};
  double packet_size_mbit = 5.0;
  double ttl_s = 60.0;

  void validate() const;
  int num_size_bins() const { return static_cast<int>(message_sizes_mbit.size()); }
};

struct Message {
  std::int64_t message_id = 0;
  int source = 0;
  int destination = 0;
  double size_mbit = 0.0;
  int size_bin = 0;
  int num_packets = 0;
  double created_at = 0.0;
};

struct Hop {
  int node = 0;
  BandId band = BandId::TV;
  double time = 0.0;
};

struct Packet {
  std::int64_t packet_id = 0;
  std::int64_t message_id = 0;
  int source = 0;
  int destination = 0;
  int size_bin = 0;
  double size_mbit = 0.0;
  double created_at = 0.0;
  double ttl_deadline = 0.0;
  /// Earliest time the holder may forward it (arrival time at the holder).
  double available_at = 0.0;
  std::vector<Hop> hop_trace;

  int hops() const { return static_cast<int>(hop_trace.size()); }
};

/// Bursty traffic for one source: burst epochs with Exponential inter-arrival
/// gaps, Uniform{burst_min..burst_max} messages per burst, sizes uniform over
/// the size bins, destinations uniform over `destinations`. Message ids are
/// left at 0; see generate_trace().
std::vector<Message> generate_traffic(int source, std::span<const int> destinations,
                                      double horizon, const TrafficParams &params, Rng &rng);

/// All sources' traffic merged by (created_at, source), with dense message ids.
/// Each source draws from its own stream so the trace depends only on
/// (sources, destinations, horizon, params, seed).
std::vector<Message> generate_trace(std::span<const int> sources,
                                    std::span<const int> destinations, double horizon,
                                    const TrafficParams &params, std::uint64_t seed);

/// Splits a message into its packets; packet ids are `first_packet_id + k`.
std::vector<Packet> packetize(const Message &m, const TrafficParams &params,
                              std::int64_t first_packet_id);

void write_trace_csv(std::ostream &os, std::span<const Message> trace);
/// Inverse of write_trace_csv; size bins and packet counts are recomputed.
std::vector<Message> read_trace_csv(std::istream &is, const TrafficParams &params);

enum class QueueOutcome : std::uint8_t { Accept, DropFull };

/// Bounded FIFO of packets with TTL expiry.
class PacketQueue {
public:
  explicit PacketQueue(int capacity = 200) : capacity_(capacity) {}

  QueueOutcome enqueue(Packet p);
  /// Removes and returns packets whose deadline is earlier than `t`.
  std::vector<Packet> expire(double t);
  Packet dequeue();

  int size() const { return static_cast<int>(items_.size()); }
  int capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  std::deque<Packet> &items() { return items_; }
  const std::deque<Packet> &items() const { return items_; }

private:
  int capacity_;
  std::deque<Packet> items_;
};

} // namespace dsa
