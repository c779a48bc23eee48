#pragma once

#include "dsa/radio.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace dsa {

enum class EventType : std::uint8_t {
  Generated,
  TxAttempt,
  TxSuccess,
  Delivery,
  DropTtl,
  DropFull,
  NoChannel,
  InFlight,
};

enum class Reason : std::uint8_t {
  None,
  TtlExpired,
  QueueFull,
  NoCommonChannel,
  BudgetExhausted,
  EndOfRun,
};

std::string_view event_type_name(EventType t);
std::string_view reason_name(Reason r);

struct Event {
  double time = 0.0;
  EventType type = EventType::Generated;
  int node_from = -1;
  int node_to = -1;
  std::optional<BandId> band;
  int channel = -1;
  std::int64_t packet_id = -1;
  std::int64_t message_id = -1;
  Reason reason = Reason::None;
};

/// Append-only, time-ordered record of a run.
class EventLog {
public:
  const std::vector<Event> &events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  /// Throws std::logic_error when `e` is earlier than the last record.
  void append(const Event &e);

  /// Columns: time,event_type,node_from,node_to,band,channel,packet_id,
  /// message_id,reason. Lines starting with '#' are provenance comments.
  void write_csv(std::ostream &os) const;
  static EventLog read_csv(std::istream &is);

private:
  std::vector<Event> events_;
};

} // namespace dsa
