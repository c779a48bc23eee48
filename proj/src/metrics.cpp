#include "dsa/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace dsa {

namespace {

struct MessageProgress {
  int delivered = 0;
  double last_delivery = 0.0;
};

std::string fmt(std::optional<double> v) {
  if (!v)
    return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

} // namespace

RunMetrics compute_metrics(const EventLog &log, std::span<const Message> traffic,
                           double horizon_s, double checkpoint_every_s) {
  RunMetrics m;
  std::unordered_map<std::int64_t, MessageProgress> progress;
  progress.reserve(traffic.size());

  for (const auto &e : log.events()) {
    switch (e.type) {
    case EventType::Generated: ++m.generated_packets; break;
    case EventType::Delivery: {
      ++m.delivered_packets;
      auto &p = progress[e.message_id];
      ++p.delivered;
      p.last_delivery = std::max(p.last_delivery, e.time);
      break;
    }
    case EventType::DropTtl: ++m.dropped_ttl; break;
    case EventType::DropFull: ++m.dropped_full; break;
    case EventType::InFlight: ++m.in_flight; break;
    case EventType::TxSuccess:
      if (e.band)
        ++m.tx_success_by_band[band_index(*e.band)];
      break;
    default: break;
    }
  }

  std::int64_t successes = 0;
  for (auto n : m.tx_success_by_band)
    successes += n;
  if (successes > 0)
    for (int b = 0; b < kNumBands; ++b)
      m.band_usage[b] = static_cast<double>(m.tx_success_by_band[b]) / successes;

  double latency_sum = 0.0;
  m.generated_messages = static_cast<std::int64_t>(traffic.size());
  for (const auto &msg : traffic) {
    const auto it = progress.find(msg.message_id);
    if (it != progress.end() && it->second.delivered == msg.num_packets) {
      ++m.delivered_messages;
      latency_sum += it->second.last_delivery - msg.created_at;
    }
  }
  if (m.generated_messages > 0)
    m.mdr = static_cast<double>(m.delivered_messages) / m.generated_messages;
  if (m.delivered_messages > 0)
    m.mean_latency_s = latency_sum / m.delivered_messages;

  if (checkpoint_every_s > 0.0) {
    const int count = static_cast<int>(std::floor(horizon_s / checkpoint_every_s + 1e-9));
    for (int k = 1; k <= count; ++k) {
      Checkpoint cp;
      cp.time = k * checkpoint_every_s;
      std::int64_t created = 0, done = 0;
      double lat = 0.0;
      for (const auto &msg : traffic) {
        if (msg.created_at > cp.time)
          continue;
        ++created;
        const auto it = progress.find(msg.message_id);
        if (it != progress.end() && it->second.delivered == msg.num_packets &&
            it->second.last_delivery <= cp.time) {
          ++done;
          lat += it->second.last_delivery - msg.created_at;
        }
      }
      if (created > 0)
        cp.mdr = static_cast<double>(done) / created;
      if (done > 0)
        cp.mean_latency_s = lat / done;
      m.timeseries.push_back(cp);
    }
  }
  return m;
}

std::string metrics_csv_header() {
  return "generated_messages,delivered_messages,mdr,mean_latency_s,generated_packets,"
         "delivered_packets,dropped_ttl,dropped_full,in_flight,usage_TV,usage_ISM,usage_LTE,"
         "usage_CBRS";
}

std::string metrics_csv_row(const RunMetrics &m) {
  std::ostringstream os;
  os << m.generated_messages << ',' << m.delivered_messages << ',' << fmt(m.mdr) << ','
     << fmt(m.mean_latency_s) << ',' << m.generated_packets << ',' << m.delivered_packets << ','
     << m.dropped_ttl << ',' << m.dropped_full << ',' << m.in_flight;
  for (double u : m.band_usage)
    os << ',' << fmt(u);
  return os.str();
}

} // namespace dsa
