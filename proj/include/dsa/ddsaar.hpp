#pragma once

#include "dsa/radio.hpp"
#include "dsa/spectrum.hpp"
#include "dsa/topology.hpp"
#include "dsa/traffic.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dsa {

/// Directed band edge of the static space-time-band multigraph. `weight` is
/// the per-packet transmission delay plus propagation delay.
struct StbEdge {
  int from = 0;
  int to = 0;
  BandId band = BandId::TV;
  double weight = 0.0;
};

struct StbGraph {
  int num_nodes = 0;
  std::vector<StbEdge> edges;
  /// Outgoing edge indices per node, in edge order.
  std::vector<std::vector<int>> out;
};

/// One edge per (i, j, b) with d_ij <= range_b, ordered by (i, j, band).
StbGraph build_stb_static(std::span<const Position> positions,
                          std::span<const BandProfile> catalog, const RadioParams &radio,
                          double packet_size_bits, BandSet usable = BandSet::all());

using Route = std::vector<Action>;

double route_cost(const StbGraph &g, int source, const Route &route);

/// Least-delay-cost path. Ties go to fewer hops, then to the lower
/// predecessor node and band. Unreachable pairs and source == destination
/// give an empty route.
Route ldc_route(int source, int destination, const StbGraph &g);

class RouteTable {
public:
  static RouteTable build(const StbGraph &g, std::span<const int> sources,
                          std::span<const int> destinations);

  /// Empty route when the pair is unknown or disconnected.
  const Route &route(int source, int destination) const;
  const std::map<std::pair<int, int>, Route> &entries() const { return routes_; }

  void write_csv(std::ostream &os) const;

private:
  std::map<std::pair<int, int>, Route> routes_;
};

enum class ForwardOutcome : std::uint8_t { Transmit, Wait, NoRoute };

struct ForwardDecision {
  ForwardOutcome outcome = ForwardOutcome::Wait;
  Action hop;
  std::optional<int> channel;
};

/// Next fixed hop for a packet held by `at_node`. Never reroutes: when the
/// hop's band has no common channel at `t` the packet waits.
ForwardDecision forward_on_route(const Packet &packet, int at_node, const Route &route,
                                 const Spectrum &spectrum, std::span<const Position> positions,
                                 double t, double duration = 0.0);

} // namespace dsa
