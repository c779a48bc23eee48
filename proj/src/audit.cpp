#include "dsa/audit.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dsa {

void AuditReport::merge(const AuditReport &other) {
  checked += other.checked;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

AuditReport audit_non_interference(const EventLog &log, const Scenario &scenario) {
  AuditReport report;
  for (const auto &e : log.events()) {
    if (e.type != EventType::TxSuccess || !e.band)
      continue;
    ++report.checked;
    const BandProfile *band = nullptr;
    for (const auto &b : scenario.catalog)
      if (b.id == *e.band)
        band = &b;
    if (!band || e.node_from < 0 || e.node_to < 0 ||
        e.node_from >= static_cast<int>(scenario.nodes.size()) ||
        e.node_to >= static_cast<int>(scenario.nodes.size())) {
      report.violations.push_back("tx_success with unknown band or node at t=" +
                                  std::to_string(e.time));
      continue;
    }
    const auto &a = scenario.nodes[e.node_from];
    const auto &b = scenario.nodes[e.node_to];
    for (std::size_t k = 0; k < scenario.pus.size(); ++k) {
      const auto &pu = scenario.pus[k];
      if (pu.band != *e.band || pu.channel != e.channel)
        continue;
      const bool near = std::hypot(pu.position.x - a.x, pu.position.y - a.y) <= band->range_m ||
                        std::hypot(pu.position.x - b.x, pu.position.y - b.y) <= band->range_m;
      if (!near)
        continue;
      for (const auto &[on, off] : scenario.pu_on_intervals[k]) {
        if (on <= e.time && e.time < off) {
          std::ostringstream msg;
          msg << "packet " << e.packet_id << " sent " << e.node_from << "->" << e.node_to
              << " on " << band_name(*e.band) << "/" << e.channel << " at t=" << e.time
              << " while PU " << k << " was ON [" << on << ", " << off << ")";
          report.violations.push_back(msg.str());
        }
      }
    }
  }
  return report;
}

AuditReport audit_conservation(const EventLog &log) {
  AuditReport report;
  struct Fate {
    int generated = 0;
    int terminal = 0;
  };
  std::map<std::int64_t, Fate> fates;
  for (const auto &e : log.events()) {
    switch (e.type) {
    case EventType::Generated: ++fates[e.packet_id].generated; break;
    case EventType::Delivery:
    case EventType::DropTtl:
    case EventType::DropFull:
    case EventType::InFlight: ++fates[e.packet_id].terminal; break;
    default: break;
    }
  }
  for (const auto &[id, f] : fates) {
    ++report.checked;
    if (f.generated != 1 || f.terminal != 1)
      report.violations.push_back("packet " + std::to_string(id) + ": generated " +
                                  std::to_string(f.generated) + " time(s), terminated " +
                                  std::to_string(f.terminal) + " time(s)");
  }
  return report;
}

AuditReport audit_time_budget(const EventLog &log, const Scenario &scenario) {
  AuditReport report;
  std::map<std::pair<long, int>, double> used; // (step, node) -> seconds
  for (const auto &e : log.events()) {
    if (e.type != EventType::TxSuccess || !e.band)
      continue;
    double rate = 0.0;
    for (const auto &b : scenario.catalog)
      if (b.id == *e.band)
        rate = b.bit_rate_bps;
    if (!(rate > 0.0))
      continue;
    const long step = static_cast<long>(std::floor(e.time / scenario.timestep_s + 1e-12));
    used[{step, e.node_from}] += scenario.packet_size_bits / rate;
  }
  for (const auto &[key, seconds] : used) {
    ++report.checked;
    if (seconds > scenario.timestep_s + 1e-9)
      report.violations.push_back("node " + std::to_string(key.second) + " used " +
                                  std::to_string(seconds) + " s in step " +
                                  std::to_string(key.first));
  }
  return report;
}

AuditReport audit_ordering(const EventLog &log) {
  AuditReport report;
  const auto &ev = log.events();
  for (std::size_t k = 1; k < ev.size(); ++k) {
    ++report.checked;
    if (ev[k].time < ev[k - 1].time)
      report.violations.push_back("event " + std::to_string(k) + " goes back in time");
  }
  return report;
}

AuditReport audit_all(const EventLog &log, const Scenario &scenario) {
  AuditReport r = audit_non_interference(log, scenario);
  r.merge(audit_conservation(log));
  r.merge(audit_time_budget(log, scenario));
  r.merge(audit_ordering(log));
  return r;
}

} // namespace dsa
