#include "dsa/traffic.hpp"

#include "dsa/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace dsa {

void TrafficParams::validate() const {
  if (!(burst_mean_interarrival_s > 0.0))
    throw ConfigError("/traffic/burst_mean_interarrival_s", "must be positive");
  if (burst_min < 1 || burst_max < burst_min)
    throw ConfigError("/traffic/burst_size", "needs 1 <= min <= max");
  if (message_sizes_mbit.empty())
    throw ConfigError("/traffic/message_sizes_mbit", "must not be empty");
  if (!(packet_size_mbit > 0.0))
    throw ConfigError("/traffic/packet_size_mbit", "must be positive");
  for (double s : message_sizes_mbit) {
    const double n = s / packet_size_mbit;
    if (!(s > 0.0) || std::abs(n - std::round(n)) > 1e-9)
      throw ConfigError("/traffic/message_sizes_mbit",
                        "every size must be a positive multiple of the packet size");
  }
  if (!(ttl_s > 0.0))
    throw ConfigError("/traffic/ttl_s", "must be positive");
}

std::vector<Message> generate_traffic(int source, std::span<const int> destinations,
                                      double horizon, const TrafficParams &params, Rng &rng) {
  std::vector<Message> out;
  if (destinations.empty())
    return out;
  std::exponential_distribution<double> gap(1.0 / params.burst_mean_interarrival_s);
  std::uniform_int_distribution<int> burst(params.burst_min, params.burst_max);
  std::uniform_int_distribution<int> bin(0, params.num_size_bins() - 1);
  std::uniform_int_distribution<std::size_t> dest(0, destinations.size() - 1);

  double t = gap(rng);
  while (t < horizon) {
    const int count = burst(rng);
    for (int k = 0; k < count; ++k) {
      Message m;
      m.source = source;
      m.size_bin = bin(rng);
      m.size_mbit = params.message_sizes_mbit[m.size_bin];
      m.num_packets = static_cast<int>(std::lround(m.size_mbit / params.packet_size_mbit));
      m.destination = destinations[dest(rng)];
      m.created_at = t;
      out.push_back(m);
    }
    t += gap(rng);
  }
  return out;
}

std::vector<Message> generate_trace(std::span<const int> sources,
                                    std::span<const int> destinations, double horizon,
                                    const TrafficParams &params, std::uint64_t seed) {
  std::vector<Message> all;
  for (int s : sources) {
    Rng rng = make_rng(seed, Stream::Traffic, static_cast<std::uint64_t>(s));
    auto msgs = generate_traffic(s, destinations, horizon, params, rng);
    all.insert(all.end(), msgs.begin(), msgs.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const Message &a, const Message &b) {
    if (a.created_at != b.created_at)
      return a.created_at < b.created_at;
    return a.source < b.source;
  });
  for (std::size_t k = 0; k < all.size(); ++k)
    all[k].message_id = static_cast<std::int64_t>(k);
  return all;
}

std::vector<Packet> packetize(const Message &m, const TrafficParams &params,
                              std::int64_t first_packet_id) {
  std::vector<Packet> out;
  out.reserve(m.num_packets);
  for (int k = 0; k < m.num_packets; ++k) {
    Packet p;
    p.packet_id = first_packet_id + k;
    p.message_id = m.message_id;
    p.source = m.source;
    p.destination = m.destination;
    p.size_bin = m.size_bin;
    p.size_mbit = params.packet_size_mbit;
    p.created_at = m.created_at;
    p.ttl_deadline = m.created_at + params.ttl_s;
    p.available_at = m.created_at;
    out.push_back(std::move(p));
  }
  return out;
}

void write_trace_csv(std::ostream &os, std::span<const Message> trace) {
  os << "message_id,source,destination,size_mbit,created_at\n";
  char buf[160];
  for (const auto &m : trace) {
    std::snprintf(buf, sizeof buf, "%lld,%d,%d,%.17g,%.17g\n",
                  static_cast<long long>(m.message_id), m.source, m.destination, m.size_mbit,
                  m.created_at);
    os << buf;
  }
}

std::vector<Message> read_trace_csv(std::istream &is, const TrafficParams &params) {
  std::vector<Message> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("message_id", 0) == 0)
      continue;
    std::istringstream row(line);
    Message m;
    char c1, c2, c3, c4;
    if (!(row >> m.message_id >> c1 >> m.source >> c2 >> m.destination >> c3 >> m.size_mbit >>
          c4 >> m.created_at) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
      throw ConfigError("line " + std::to_string(lineno), "malformed traffic trace row");
    const auto it = std::find(params.message_sizes_mbit.begin(), params.message_sizes_mbit.end(),
                              m.size_mbit);
    if (it == params.message_sizes_mbit.end())
      throw ConfigError("line " + std::to_string(lineno), "message size is not a size bin");
    m.size_bin = static_cast<int>(it - params.message_sizes_mbit.begin());
    m.num_packets = static_cast<int>(std::lround(m.size_mbit / params.packet_size_mbit));
    out.push_back(m);
  }
  return out;
}

QueueOutcome PacketQueue::enqueue(Packet p) {
  if (size() >= capacity_)
    return QueueOutcome::DropFull;
  items_.push_back(std::move(p));
  return QueueOutcome::Accept;
}

std::vector<Packet> PacketQueue::expire(double t) {
  std::vector<Packet> dropped;
  std::deque<Packet> kept;
  for (auto &p : items_) {
    if (t > p.ttl_deadline)
      dropped.push_back(std::move(p));
    else
      kept.push_back(std::move(p));
  }
  items_ = std::move(kept);
  return dropped;
}

Packet PacketQueue::dequeue() {
  if (items_.empty())
    throw LookupError("dequeue from empty queue");
  Packet p = std::move(items_.front());
  items_.pop_front();
  return p;
}

} // namespace dsa
