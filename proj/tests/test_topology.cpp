#include "dsa/errors.hpp"
#include "dsa/topology.hpp"

#include <doctest.h>

#include <map>

using namespace dsa;

TEST_CASE("deploy assigns roles by id and stays inside the area") {
  DeploymentParams p;
  const auto catalog = default_band_catalog();
  const auto topo = deploy(p, catalog, 11);
  REQUIRE(topo.nodes.size() == 30);
  CHECK(topo.sources() == std::vector<int>{0, 1, 2});
  CHECK(topo.destinations() == std::vector<int>{3, 4, 5});
  for (const auto &n : topo.nodes) {
    CHECK(n.position.x >= 0.0);
    CHECK(n.position.x <= 2000.0);
    CHECK(n.position.y >= 0.0);
    CHECK(n.position.y <= 2000.0);
  }
  CHECK(topo.pus.size() == 150);
  for (const auto &pu : topo.pus) {
    CHECK(pu.channel >= 0);
    CHECK(pu.channel < 6);
  }
}

TEST_CASE("deploy is deterministic per seed") {
  const auto catalog = default_band_catalog();
  const auto a = deploy({}, catalog, 5);
  const auto b = deploy({}, catalog, 5);
  const auto c = deploy({}, catalog, 6);
  REQUIRE(a.nodes.size() == b.nodes.size());
  bool same = true, differs = false;
  for (std::size_t k = 0; k < a.nodes.size(); ++k) {
    same = same && a.nodes[k].position.x == b.nodes[k].position.x &&
           a.nodes[k].position.y == b.nodes[k].position.y;
    differs = differs || a.nodes[k].position.x != c.nodes[k].position.x;
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("SU positions do not depend on the number of PUs") {
  const auto catalog = default_band_catalog();
  DeploymentParams p;
  p.num_pus = 0;
  const auto a = deploy(p, catalog, 3);
  p.num_pus = 150;
  const auto b = deploy(p, catalog, 3);
  for (std::size_t k = 0; k < a.nodes.size(); ++k)
    CHECK(a.nodes[k].position.x == b.nodes[k].position.x);
}

TEST_CASE("PUs spread over all bands or concentrate in one") {
  const auto catalog = default_band_catalog();
  DeploymentParams p;
  p.num_pus = 4000;
  std::map<BandId, int> count;
  for (const auto &pu : deploy(p, catalog, 1).pus)
    ++count[pu.band];
  for (BandId b : kAllBands)
    CHECK(count[b] == doctest::Approx(1000).epsilon(0.1));

  p.num_pus = 150;
  p.pu_concentration = BandId::TV;
  for (const auto &pu : deploy(p, catalog, 1).pus)
    CHECK(pu.band == BandId::TV);
}

TEST_CASE("inconsistent counts are config errors") {
  const auto catalog = default_band_catalog();
  DeploymentParams p;
  p.num_sus = 4;
  CHECK_THROWS_AS(deploy(p, catalog, 1), ConfigError);
  p = {};
  p.num_destinations = 0;
  CHECK_THROWS_AS(deploy(p, catalog, 1), ConfigError);
  p = {};
  p.num_pus = -1;
  CHECK_THROWS_AS(deploy(p, catalog, 1), ConfigError);
}

TEST_CASE("action space lists (neighbour, band) pairs in link order") {
  const auto catalog = default_band_catalog();
  const std::vector<Position> pos{{0, 0}, {1500, 0}, {500, 0}, {3000, 0}, {9000, 0}};
  const auto acts = build_action_space(0, pos, catalog);
  const std::vector<Action> expect{{1, BandId::TV}, {1, BandId::LTE}, {1, BandId::CBRS},
                                   {2, BandId::TV}, {2, BandId::ISM}, {2, BandId::LTE},
                                   {2, BandId::CBRS}, {3, BandId::TV}};
  CHECK(acts == expect);
  CHECK(build_action_space(4, pos, catalog).empty());
  const auto cbrs = build_action_space(0, pos, catalog, BandSet::only(BandId::CBRS));
  CHECK(cbrs == std::vector<Action>{{1, BandId::CBRS}, {2, BandId::CBRS}});
  CHECK_THROWS_AS(build_action_space(7, pos, catalog), LookupError);

  const auto topo = deploy({}, catalog, 2);
  const auto positions = topo.positions();
  for (int i = 0; i < 30; ++i)
    for (const auto &a : build_action_space(i, positions, catalog))
      CHECK(link_exists(i, a.next_node, a.band, positions, catalog));
}
