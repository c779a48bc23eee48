#pragma once

#include "dsa/bard.hpp"
#include "dsa/config.hpp"
#include "dsa/ddsaar.hpp"
#include "dsa/events.hpp"
#include "dsa/metrics.hpp"
#include "dsa/spectrum.hpp"
#include "dsa/topology.hpp"
#include "dsa/traffic.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace dsa {

/// Everything needed to audit a run offline: node and PU layout, the band
/// catalog, and every PU's ON intervals over the run.
struct Scenario {
  std::vector<BandProfile> catalog;
  std::vector<Position> nodes;
  std::vector<PuPlacement> pus;
  std::vector<std::vector<std::pair<double, double>>> pu_on_intervals;
  double timestep_s = 1.0;
  double horizon_s = 0.0;
  double packet_size_bits = 5e6;

  void write_json(std::ostream &os) const;
  static Scenario read_json(std::istream &is);
};

struct RunResult {
  RunConfig config;
  Topology topology;
  std::vector<Message> trace;
  EventLog log;
  RunMetrics metrics;
  Scenario scenario;
  std::optional<RouteTable> routes;
  /// Per-node Q-tables (BARD only), indexed by node id.
  std::vector<QTable> q_tables;
};

/// One simulation run: a single logical timeline advanced in fixed steps,
/// within which every node forwards packets under a time budget of one step.
class Simulation {
public:
  /// Deploys the topology and generates the traffic trace from the seed.
  explicit Simulation(RunConfig config);
  /// Replays a given topology and trace (paired comparisons, tests).
  Simulation(RunConfig config, Topology topology, std::vector<Message> trace);
  ~Simulation();
  Simulation(Simulation &&) noexcept;

  RunResult run() &&;

  /// Advances PU timelines, retires finished transmissions, injects traffic
  /// created before tau + step, and drops expired packets.
  void begin_step(double tau);
  /// Forwards node i's eligible packets within one step's time budget.
  void step_node(int i, double tau);
  /// Moves buffered events earlier than tau + step into the log.
  void end_step(double tau);
  /// Records packets still queued at the horizon and flushes all events.
  void finish();

  /// Places a packet directly in a node's queue as if generated there.
  QueueOutcome inject_packet(int node, Packet packet);

  const RunConfig &config() const { return config_; }
  const Topology &topology() const { return topology_; }
  const std::vector<Message> &trace() const { return trace_; }
  const Spectrum &spectrum() const;
  Spectrum &spectrum();
  const PacketQueue &queue(int node) const { return queues_.at(node); }
  const BardAgent &agent(int node) const { return agents_.at(node); }
  const std::optional<RouteTable> &routes() const { return routes_; }
  const EventLog &log() const { return log_; }
  Scenario scenario() const;

  /// Bit mask of bands over which node i currently reaches at least one
  /// neighbour on a free channel.
  unsigned sense_bands(int i, double t) const;

private:
  void step_bard(int i, double tau);
  void step_ddsaar(int i, double tau);
  void emit(const Event &e) { pending_.push_back(e); }
  double tx_delay(BandId b) const { return config_.packet_size_bits() / rate_[band_index(b)]; }
  /// Hands a transmitted packet to node j: delivery or enqueue/drop at j.
  bool receive(Packet packet, int from, int j, BandId band, int channel, double t,
               double arrival);

  RunConfig config_;
  Topology topology_;
  std::vector<Position> positions_;
  std::vector<int> destinations_;
  std::vector<Message> trace_;
  std::unique_ptr<Spectrum> spectrum_;
  std::vector<PacketQueue> queues_;
  std::vector<BardAgent> agents_;
  /// Neighbours of each node per band (BARD sensing).
  std::vector<std::array<std::vector<int>, kNumBands>> neighbours_;
  std::optional<RouteTable> routes_;
  StateSpace space_;
  std::array<double, kNumBands> rate_{};
  double min_rate_ = 0.0;
  double max_tx_delay_ = 0.0;
  std::size_t next_message_ = 0;
  std::int64_t next_packet_id_ = 0;
  std::vector<Event> pending_;
  EventLog log_;
  bool finished_ = false;
};

/// Convenience wrapper: Simulation(config).run().
RunResult run(const RunConfig &config);

} // namespace dsa
