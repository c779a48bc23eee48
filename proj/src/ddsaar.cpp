#include "dsa/ddsaar.hpp"

#include "dsa/errors.hpp"

#include <limits>
#include <ostream>
#include <queue>
#include <tuple>

namespace dsa {

StbGraph build_stb_static(std::span<const Position> positions,
                          std::span<const BandProfile> catalog, const RadioParams &radio,
                          double packet_size_bits, BandSet usable) {
  StbGraph g;
  g.num_nodes = static_cast<int>(positions.size());
  g.out.resize(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) {
    for (int j = 0; j < g.num_nodes; ++j) {
      if (i == j)
        continue;
      const double d = distance(positions[i], positions[j]);
      for (BandId b : kAllBands) {
        if (!usable.contains(b))
          continue;
        for (const auto &band : catalog) {
          if (band.id != b || d > band.range_m)
            continue;
          g.out[i].push_back(static_cast<int>(g.edges.size()));
          g.edges.push_back(
              {i, j, b, packet_size_bits / band.bit_rate_bps + d / radio.speed_of_light_mps});
        }
      }
    }
  }
  return g;
}

double route_cost(const StbGraph &g, int source, const Route &route) {
  double cost = 0.0;
  int at = source;
  for (const auto &hop : route) {
    bool found = false;
    for (int e : g.out.at(at)) {
      const auto &edge = g.edges[e];
      if (edge.to == hop.next_node && edge.band == hop.band) {
        cost += edge.weight;
        found = true;
        break;
      }
    }
    if (!found)
      throw LookupError("route uses an edge that is not in the graph");
    at = hop.next_node;
  }
  return cost;
}

Route ldc_route(int source, int destination, const StbGraph &g) {
  if (source < 0 || destination < 0 || source >= g.num_nodes || destination >= g.num_nodes)
    throw LookupError("unknown node id");
  if (source == destination)
    return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(g.num_nodes, kInf);
  std::vector<int> hops(g.num_nodes, std::numeric_limits<int>::max());
  std::vector<int> via(g.num_nodes, -1); // edge index
  std::vector<bool> done(g.num_nodes, false);

  using Label = std::tuple<double, int, int>; // cost, hops, node
  std::priority_queue<Label, std::vector<Label>, std::greater<>> open;
  cost[source] = 0.0;
  hops[source] = 0;
  open.emplace(0.0, 0, source);

  while (!open.empty()) {
    const auto [c, h, u] = open.top();
    open.pop();
    if (done[u])
      continue;
    done[u] = true;
    if (u == destination)
      break;
    for (int e : g.out[u]) {
      const auto &edge = g.edges[e];
      const int v = edge.to;
      if (done[v])
        continue;
      const double nc = c + edge.weight;
      const int nh = h + 1;
      bool better = nc < cost[v] || (nc == cost[v] && nh < hops[v]);
      if (!better && nc == cost[v] && nh == hops[v] && via[v] >= 0) {
        const auto &cur = g.edges[via[v]];
        better = std::tie(edge.from, edge.band) < std::tie(cur.from, cur.band);
      }
      if (better) {
        cost[v] = nc;
        hops[v] = nh;
        via[v] = e;
        open.emplace(nc, nh, v);
      }
    }
  }

  if (via[destination] < 0)
    return {};
  Route route;
  for (int v = destination; v != source;) {
    const auto &edge = g.edges[via[v]];
    route.push_back({edge.to, edge.band});
    v = edge.from;
  }
  return {route.rbegin(), route.rend()};
}

RouteTable RouteTable::build(const StbGraph &g, std::span<const int> sources,
                             std::span<const int> destinations) {
  RouteTable table;
  for (int s : sources)
    for (int d : destinations)
      table.routes_[{s, d}] = ldc_route(s, d, g);
  return table;
}

const Route &RouteTable::route(int source, int destination) const {
  static const Route kEmpty;
  const auto it = routes_.find({source, destination});
  return it == routes_.end() ? kEmpty : it->second;
}

void RouteTable::write_csv(std::ostream &os) const {
  os << "source,destination,hop_index,next_node,band\n";
  for (const auto &[key, route] : routes_)
    for (std::size_t k = 0; k < route.size(); ++k)
      os << key.first << ',' << key.second << ',' << k << ',' << route[k].next_node << ','
         << band_name(route[k].band) << '\n';
}

ForwardDecision forward_on_route(const Packet &packet, int at_node, const Route &route,
                                 const Spectrum &spectrum, std::span<const Position> positions,
                                 double t, double duration) {
  ForwardDecision d;
  const auto hop_index = static_cast<std::size_t>(packet.hops());
  if (hop_index >= route.size()) {
    d.outcome = ForwardOutcome::NoRoute;
    return d;
  }
  const int expected_at = hop_index == 0 ? packet.source : route[hop_index - 1].next_node;
  if (expected_at != at_node)
    throw LookupError("packet is off its precomputed route");
  d.hop = route[hop_index];
  d.channel = spectrum.find_common_channel(positions[at_node], positions[d.hop.next_node],
                                           d.hop.band, t, duration);
  d.outcome = d.channel ? ForwardOutcome::Transmit : ForwardOutcome::Wait;
  return d;
}

} // namespace dsa
