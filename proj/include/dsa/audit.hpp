#pragma once

#include "dsa/engine.hpp"
#include "dsa/events.hpp"

#include <string>
#include <vector>

namespace dsa {

struct AuditReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void merge(const AuditReport &other);
};

/// No tx_success may start while a PU on the same (band, channel) within the
/// band's range of either endpoint is ON. Uses only the log and the PU ON
/// intervals recorded in the scenario.
AuditReport audit_non_interference(const EventLog &log, const Scenario &scenario);

/// Every generated packet ends in exactly one of delivery, drop_ttl,
/// drop_full or in_flight, and nothing else terminates.
AuditReport audit_conservation(const EventLog &log);

/// Per node and step, the summed transmission delay of its successes fits in
/// one step.
AuditReport audit_time_budget(const EventLog &log, const Scenario &scenario);

/// Timestamps are non-decreasing.
AuditReport audit_ordering(const EventLog &log);

AuditReport audit_all(const EventLog &log, const Scenario &scenario);

} // namespace dsa
