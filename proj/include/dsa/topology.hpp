#pragma once

#include "dsa/radio.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dsa {

enum class Role : std::uint8_t { Source, Relay, Destination };

struct Node {
  int id = 0;
  Role role = Role::Relay;
  Position position;
};

struct PuPlacement {
  Position position;
  BandId band = BandId::TV;
  int channel = 0;
};

struct DeploymentParams {
  double area_width_m = 2000.0;
  double area_height_m = 2000.0;
  int num_sus = 30;
  int num_sources = 3;
  int num_destinations = 3;
  int num_pus = 150;
  /// When set, every PU is placed on a channel of this band.
  std::optional<BandId> pu_concentration;
};

/// Stationary node and PU layout. Node ids are [0, num_sources) for sources,
/// then destinations, then relays.
struct Topology {
  std::vector<Node> nodes;
  std::vector<PuPlacement> pus;

  std::vector<Position> positions() const;
  std::vector<int> sources() const;
  std::vector<int> destinations() const;
};

/// Uniform-random placement of SUs and PUs inside the area. PU (band, channel)
/// pairs are drawn uniformly over every channel of every catalog band.
Topology deploy(const DeploymentParams &params, std::span<const BandProfile> catalog,
                std::uint64_t seed);

/// (next node, band) choice of a forwarding node.
struct Action {
  int next_node = 0;
  BandId band = BandId::TV;
  bool operator==(const Action &) const = default;
};

/// { (j, b) : j != i, d_ij <= range_b, b usable }, ascending by j then band.
std::vector<Action> build_action_space(int i, std::span<const Position> positions,
                                       std::span<const BandProfile> catalog,
                                       BandSet usable = BandSet::all());

} // namespace dsa
