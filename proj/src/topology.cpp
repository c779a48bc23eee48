#include "dsa/topology.hpp"

#include "dsa/errors.hpp"
#include "dsa/rng.hpp"

#include <random>

namespace dsa {

std::vector<Position> Topology::positions() const {
  std::vector<Position> out;
  out.reserve(nodes.size());
  for (const auto &n : nodes)
    out.push_back(n.position);
  return out;
}

std::vector<int> Topology::sources() const {
  std::vector<int> out;
  for (const auto &n : nodes)
    if (n.role == Role::Source)
      out.push_back(n.id);
  return out;
}

std::vector<int> Topology::destinations() const {
  std::vector<int> out;
  for (const auto &n : nodes)
    if (n.role == Role::Destination)
      out.push_back(n.id);
  return out;
}

Topology deploy(const DeploymentParams &params, std::span<const BandProfile> catalog,
                std::uint64_t seed) {
  if (params.num_sources < 0 || params.num_destinations < 0 || params.num_pus < 0)
    throw ConfigError("", "node counts must be non-negative");
  if (params.num_sources + params.num_destinations > params.num_sus)
    throw ConfigError("", "sources + destinations exceed the number of SUs");
  if (params.num_sources > 0 && params.num_destinations == 0)
    throw ConfigError("", "sources need at least one destination");
  if (!(params.area_width_m > 0.0) || !(params.area_height_m > 0.0))
    throw ConfigError("", "area dimensions must be positive");

  Rng rng = make_rng(seed, Stream::Topology);
  std::uniform_real_distribution<double> xs(0.0, params.area_width_m);
  std::uniform_real_distribution<double> ys(0.0, params.area_height_m);

  Topology topo;
  topo.nodes.reserve(params.num_sus);
  for (int i = 0; i < params.num_sus; ++i) {
    Node n;
    n.id = i;
    if (i < params.num_sources)
      n.role = Role::Source;
    else if (i < params.num_sources + params.num_destinations)
      n.role = Role::Destination;
    n.position.x = xs(rng);
    n.position.y = ys(rng);
    topo.nodes.push_back(n);
  }

  // Every (band, channel) of the environment, in catalog order.
  std::vector<std::pair<BandId, int>> slots;
  for (const auto &band : catalog) {
    if (params.pu_concentration && band.id != *params.pu_concentration)
      continue;
    for (int c = 0; c < band.num_channels; ++c)
      slots.emplace_back(band.id, c);
  }
  if (params.num_pus > 0 && slots.empty())
    throw ConfigError("", "PU concentration band is not in the catalog");

  topo.pus.reserve(params.num_pus);
  for (int k = 0; k < params.num_pus; ++k) {
    PuPlacement pu;
    pu.position.x = xs(rng);
    pu.position.y = ys(rng);
    const auto pick = std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng);
    pu.band = slots[pick].first;
    pu.channel = slots[pick].second;
    topo.pus.push_back(pu);
  }
  return topo;
}

std::vector<Action> build_action_space(int i, std::span<const Position> positions,
                                       std::span<const BandProfile> catalog, BandSet usable) {
  std::vector<Action> actions;
  const int n = static_cast<int>(positions.size());
  if (i < 0 || i >= n)
    throw LookupError("unknown node id");
  for (int j = 0; j < n; ++j) {
    if (j == i)
      continue;
    const double d = distance(positions[i], positions[j]);
    for (BandId b : kAllBands) {
      if (!usable.contains(b))
        continue;
      for (const auto &band : catalog)
        if (band.id == b && d <= band.range_m)
          actions.push_back({j, b});
    }
  }
  return actions;
}

} // namespace dsa
