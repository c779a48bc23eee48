#include "dsa/errors.hpp"
#include "dsa/spectrum.hpp"

#include <doctest.h>

#include <random>

using namespace dsa;

namespace {

// A PU whose initial state is `on` and which never flips before t = 1000.
PuActivity pinned_pu(bool on, Position at, BandId band, int channel) {
  for (std::uint64_t s = 0;; ++s) {
    PuActivity pu(0, at, band, channel, 1000.0, 1000.0, Rng(s));
    if (pu.is_on(0.0) == on)
      return pu;
  }
}

} // namespace

TEST_CASE("advance_pu applies flips in order") {
  PuProcess p;
  p.state = PuState::Off;
  p.next_transition = 1.5;
  std::vector<double> draws{2.0, 3.0, 1.0};
  std::size_t k = 0;
  std::vector<std::pair<double, PuState>> seen;
  p = advance_pu(
      p, 5.0, [&] { return draws.at(k++); },
      [&](double at, PuState s) { seen.emplace_back(at, s); });
  REQUIRE(seen.size() == 2);
  CHECK(seen[0].first == 1.5);
  CHECK(seen[0].second == PuState::On);
  CHECK(seen[1].first == 3.5);
  CHECK(seen[1].second == PuState::Off);
  CHECK(p.state == PuState::Off);
  CHECK(p.next_transition == 6.5);
  CHECK(p.last_advanced == 5.0);
}

TEST_CASE("advance_pu rejects time going backwards") {
  PuProcess p;
  p.next_transition = 1.0;
  p.last_advanced = 3.0;
  Rng rng(1);
  CHECK_THROWS_AS(advance_pu(p, 2.0, rng), TemporalOrderError);
}

TEST_CASE("advance_pu with no transition due leaves the state") {
  PuProcess p;
  p.state = PuState::On;
  p.next_transition = 10.0;
  Rng rng(1);
  const auto q = advance_pu(p, 9.0, rng);
  CHECK(q.state == PuState::On);
  CHECK(q.next_transition == 10.0);
}

TEST_CASE("PU sojourns are uniform on [1, 4] with mean 2.5") {
  PuActivity pu(0, {}, BandId::TV, 0, 1.0, 4.0, Rng(42));
  pu.extend_to(100000.0);
  const auto &flips = pu.flip_times();
  REQUIRE(flips.size() > 1000);
  double sum = 0.0, lo = 1e9, hi = 0.0;
  for (std::size_t k = 1; k < flips.size(); ++k) {
    const double d = flips[k] - flips[k - 1];
    sum += d;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  CHECK(sum / (flips.size() - 1) == doctest::Approx(2.5).epsilon(0.02));
  CHECK(lo >= 1.0);
  CHECK(hi <= 4.0);

  double on = 0.0;
  for (const auto &[a, b] : pu.on_intervals(100000.0))
    on += b - a;
  CHECK(on / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("is_on agrees with the ON intervals and refuses the future") {
  PuActivity pu(0, {}, BandId::TV, 0, 1.0, 4.0, Rng(9));
  pu.extend_to(50.0);
  const auto on = pu.on_intervals(50.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const double t = u(rng);
    bool inside = false;
    for (const auto &[a, b] : on)
      inside = inside || (a <= t && t < b);
    CHECK(pu.is_on(t) == inside);
  }
  CHECK_THROWS_AS(pu.is_on(51.0), TemporalOrderError);
}

TEST_CASE("find_common_channel honours PUs in range") {
  const auto catalog = default_band_catalog();
  std::vector<PuActivity> pus;
  pus.push_back(pinned_pu(true, {100, 0}, BandId::CBRS, 0));
  pus.push_back(pinned_pu(false, {100, 0}, BandId::CBRS, 1));
  pus.push_back(pinned_pu(true, {100000, 0}, BandId::CBRS, 2));
  Spectrum sp(catalog, std::move(pus));
  sp.advance_to(10.0);
  const Position a{0, 0}, b{500, 0};
  CHECK(sp.find_common_channel(a, b, BandId::CBRS, 1.0) == 1);
  CHECK_FALSE(sp.channel_free(a, b, BandId::CBRS, 0, 1.0));
  CHECK(sp.channel_free(a, b, BandId::CBRS, 2, 1.0));
  CHECK(sp.find_common_channel(a, b, BandId::TV, 1.0) == 0);

  sp.attach_nodes({a, b});
  CHECK(sp.find_common_channel(0, 1, BandId::CBRS, 1.0) == 1);
  const std::vector<int> peers{1};
  CHECK(sp.any_common_channel(0, peers, BandId::CBRS, 1.0));
  CHECK_FALSE(sp.any_common_channel(0, {}, BandId::CBRS, 1.0));
  CHECK_THROWS_AS(sp.find_common_channel(0, 5, BandId::CBRS, 1.0), LookupError);
}

TEST_CASE("every channel blocked gives no channel") {
  const auto catalog = default_band_catalog();
  std::vector<PuActivity> pus;
  for (int c = 0; c < 6; ++c)
    pus.push_back(pinned_pu(true, {0, 0}, BandId::ISM, c));
  Spectrum sp(catalog, std::move(pus));
  sp.advance_to(5.0);
  CHECK_FALSE(sp.find_common_channel({0, 0}, {10, 0}, BandId::ISM, 2.0));
}

TEST_CASE("SU transmissions block nearby co-channel use") {
  Spectrum sp(default_band_catalog(), {});
  sp.advance_to(10.0);
  sp.register_transmission({7, BandId::CBRS, 0, 1.0, 1.06, {0, 0}});
  CHECK(sp.active_transmissions() == 1);
  CHECK(sp.find_common_channel({100, 0}, {200, 0}, BandId::CBRS, 1.02) == 1);
  CHECK(sp.find_common_channel({100, 0}, {200, 0}, BandId::CBRS, 1.06) == 0);
  CHECK(sp.find_common_channel({100, 0}, {200, 0}, BandId::CBRS, 0.99) == 0);
  CHECK(sp.find_common_channel({100, 0}, {200, 0}, BandId::CBRS, 0.99, 0.05) == 1);
  CHECK(sp.find_common_channel({9000, 0}, {9100, 0}, BandId::CBRS, 1.02) == 0);
  CHECK(sp.find_common_channel({100, 0}, {200, 0}, BandId::ISM, 1.02) == 0);

  CHECK_THROWS_AS(sp.register_transmission({7, BandId::CBRS, 0, 1.0, 1.06, {0, 0}}),
                  DuplicateError);
  CHECK_THROWS_AS(sp.register_transmission({7, BandId::CBRS, 1, 2.0, 2.0, {0, 0}}),
                  ParameterError);
  CHECK_THROWS_AS(sp.register_transmission({7, BandId::CBRS, 9, 2.0, 3.0, {0, 0}}),
                  LookupError);
  sp.expire_transmissions(1.06);
  CHECK(sp.active_transmissions() == 0);
}

TEST_CASE("node-indexed and position queries agree") {
  const auto catalog = default_band_catalog();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  std::vector<PuActivity> pus;
  for (int k = 0; k < 60; ++k)
    pus.emplace_back(k, Position{u(rng), u(rng)}, kAllBands[k % 4], (k / 4) % 6, 1.0, 4.0,
                     Rng(100 + k));
  std::vector<Position> nodes(10);
  for (auto &p : nodes)
    p = {u(rng), u(rng)};
  Spectrum sp(catalog, std::move(pus));
  sp.attach_nodes(nodes);
  sp.advance_to(60.0);
  std::uniform_real_distribution<double> tt(0.0, 60.0);
  for (int k = 0; k < 500; ++k) {
    const int a = static_cast<int>(rng() % 10), b = static_cast<int>(rng() % 10);
    const BandId band = kAllBands[rng() % 4];
    const double t = tt(rng);
    CHECK(sp.find_common_channel(a, b, band, t) ==
          sp.find_common_channel(nodes[a], nodes[b], band, t));
  }
}

TEST_CASE("queries past the advanced horizon throw") {
  std::vector<PuActivity> pus;
  pus.emplace_back(0, Position{0, 0}, BandId::TV, 0, 1.0, 4.0, Rng(1));
  Spectrum sp(default_band_catalog(), std::move(pus));
  sp.advance_to(5.0);
  CHECK_THROWS_AS(sp.find_common_channel({0, 0}, {1, 0}, BandId::TV, 6.0), TemporalOrderError);
}
