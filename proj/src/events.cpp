#include "dsa/events.hpp"

#include "dsa/errors.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dsa {

namespace {

constexpr std::array<std::string_view, 8> kTypeNames{
    "generated", "tx_attempt", "tx_success", "delivery",
    "drop_ttl",  "drop_full",  "no_channel", "in_flight",
};

constexpr std::array<std::string_view, 6> kReasonNames{
    "", "ttl_expired", "queue_full", "no_common_channel", "budget_exhausted", "end_of_run",
};

template <class Enum, std::size_t N>
Enum parse_enum(const std::array<std::string_view, N> &names, std::string_view s,
                const char *what) {
  for (std::size_t k = 0; k < N; ++k)
    if (names[k] == s)
      return static_cast<Enum>(k);
  throw LookupError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

} // namespace

std::string_view event_type_name(EventType t) { return kTypeNames[static_cast<int>(t)]; }
std::string_view reason_name(Reason r) { return kReasonNames[static_cast<int>(r)]; }

void EventLog::append(const Event &e) {
  if (!events_.empty() && e.time < events_.back().time)
    throw std::logic_error("event log timestamps must be non-decreasing");
  events_.push_back(e);
}

void EventLog::write_csv(std::ostream &os) const {
  os << "time,event_type,node_from,node_to,band,channel,packet_id,message_id,reason\n";
  char buf[256];
  for (const auto &e : events_) {
    std::snprintf(buf, sizeof buf, "%.17g,%s,%d,%d,%s,%d,%lld,%lld,%s\n", e.time,
                  std::string(event_type_name(e.type)).c_str(), e.node_from, e.node_to,
                  e.band ? std::string(band_name(*e.band)).c_str() : "", e.channel,
                  static_cast<long long>(e.packet_id), static_cast<long long>(e.message_id),
                  std::string(reason_name(e.reason)).c_str());
    os << buf;
  }
}

EventLog EventLog::read_csv(std::istream &is) {
  EventLog log;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0)
      continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cols.push_back(cell);
    if (cols.size() == 8)
      cols.emplace_back();
    if (cols.size() != 9)
      throw LookupError("event log line " + std::to_string(lineno) + ": expected 9 columns");
    try {
      Event e;
      e.time = std::stod(cols[0]);
      e.type = parse_enum<EventType>(kTypeNames, cols[1], "event type");
      e.node_from = std::stoi(cols[2]);
      e.node_to = std::stoi(cols[3]);
      if (!cols[4].empty()) {
        e.band = parse_band(cols[4]);
        if (!e.band)
          throw LookupError("unknown band '" + cols[4] + "'");
      }
      e.channel = std::stoi(cols[5]);
      e.packet_id = std::stoll(cols[6]);
      e.message_id = std::stoll(cols[7]);
      e.reason = parse_enum<Reason>(kReasonNames, cols[8], "reason");
      log.events_.push_back(e);
    } catch (const std::invalid_argument &) {
      throw LookupError("event log line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return log;
}

} // namespace dsa
