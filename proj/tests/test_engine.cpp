#include "dsa/audit.hpp"
#include "dsa/engine.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace dsa;

namespace {

// Two SUs 500 m apart: node 0 is the source, node 1 the destination.
struct Pair {
  RunConfig config;
  Topology topology;
};

Pair two_nodes(BandId band) {
  Pair p;
  p.config = restrict_to_band(RunConfig{}, band);
  p.config.deployment.num_sus = 2;
  p.config.deployment.num_sources = 1;
  p.config.deployment.num_destinations = 1;
  p.config.deployment.num_pus = 0;
  p.config.rl.epsilon0 = 0.0;
  p.config.rl.epsilon_min = 0.0;
  p.topology.nodes = {{0, Role::Source, {0, 0}}, {1, Role::Destination, {500, 0}}};
  return p;
}

Packet packet(std::int64_t id, double created) {
  Packet p;
  p.packet_id = id;
  p.message_id = 0;
  p.source = 0;
  p.destination = 1;
  p.size_bin = 0;
  p.size_mbit = 5.0;
  p.created_at = created;
  p.available_at = created;
  p.ttl_deadline = created + 60.0;
  return p;
}

std::map<EventType, int> tally(const EventLog &log) {
  std::map<EventType, int> n;
  for (const auto &e : log.events())
    ++n[e.type];
  return n;
}

std::string csv(const EventLog &log) {
  std::ostringstream os;
  log.write_csv(os);
  return os.str();
}

RunConfig small(Algorithm alg, std::uint64_t seed, double horizon = 120.0) {
  RunConfig c;
  c.engine.algorithm = alg;
  c.engine.seed = seed;
  c.engine.horizon_s = horizon;
  return c;
}

} // namespace

TEST_CASE("an empty queue produces no events") {
  auto p = two_nodes(BandId::CBRS);
  Simulation sim(p.config, p.topology, {});
  sim.begin_step(0.0);
  sim.step_node(0, 0.0);
  sim.step_node(1, 0.0);
  sim.end_step(0.0);
  CHECK(sim.log().size() == 0);
}

TEST_CASE("one packet over a free CBRS channel is delivered") {
  auto p = two_nodes(BandId::CBRS);
  Simulation sim(p.config, p.topology, {});
  sim.begin_step(0.0);
  sim.inject_packet(0, packet(0, 0.0));
  sim.step_node(0, 0.0);
  sim.end_step(0.0);
  const auto n = tally(sim.log());
  CHECK(n.at(EventType::Generated) == 1);
  CHECK(n.at(EventType::TxAttempt) == 1);
  CHECK(n.at(EventType::TxSuccess) == 1);
  CHECK(n.at(EventType::Delivery) == 1);
  const double rate = find_band(p.config.bands, BandId::CBRS).bit_rate_bps;
  const double c = p.config.radio.speed_of_light_mps;
  const auto &delivery = sim.log().events().back();
  CHECK(delivery.type == EventType::Delivery);
  CHECK(delivery.time == doctest::Approx(5e6 / rate + 500.0 / c).epsilon(1e-12));
  CHECK(delivery.time == doctest::Approx(0.0607588).epsilon(1e-5));

  // State: destination 0, size bin 0, CBRS sensed free.
  const int s = StateSpace{1, 4, 4}.index({0, 0, 1u << band_index(BandId::CBRS)});
  const double r = oracle::reward(0, 5e6, rate, rate, 500.0, 0.0, true, false, 2, 2, 2, 10,
                                  2.5, 1);
  CHECK(r > 9.0);
  CHECK(sim.agent(0).q().at(s, 0) == doctest::Approx(0.2 * r).epsilon(1e-12));
  CHECK(sim.queue(0).empty());
}

TEST_CASE("three TV packets: two fit in one step") {
  auto p = two_nodes(BandId::TV);
  Simulation sim(p.config, p.topology, {});
  sim.begin_step(0.0);
  for (int k = 0; k < 3; ++k)
    sim.inject_packet(0, packet(k, 0.0));
  sim.step_node(0, 0.0);
  sim.end_step(0.0);
  const auto n = tally(sim.log());
  CHECK(n.at(EventType::TxSuccess) == 2);
  CHECK(n.at(EventType::Delivery) == 2);
  CHECK(sim.queue(0).size() == 1);
  const auto &ev = sim.log().events();
  std::vector<double> starts;
  for (const auto &e : ev)
    if (e.type == EventType::TxSuccess)
      starts.push_back(e.time);
  REQUIRE(starts.size() == 2);
  CHECK(starts[0] == 0.0);
  CHECK(starts[1] == doctest::Approx(0.4050472).epsilon(1e-6));

  sim.begin_step(1.0);
  sim.step_node(0, 1.0);
  sim.end_step(1.0);
  CHECK(tally(sim.log()).at(EventType::TxSuccess) == 3);
  CHECK(sim.queue(0).empty());
}

TEST_CASE("the baseline follows the same budget") {
  auto p = two_nodes(BandId::TV);
  p.config.engine.algorithm = Algorithm::Ddsaar;
  Simulation sim(p.config, p.topology, {});
  REQUIRE(sim.routes());
  sim.begin_step(0.0);
  for (int k = 0; k < 3; ++k)
    sim.inject_packet(0, packet(k, 0.0));
  sim.step_node(0, 0.0);
  sim.end_step(0.0);
  CHECK(tally(sim.log()).at(EventType::TxSuccess) == 2);
}

TEST_CASE("expired packets are dropped at the step start") {
  auto p = two_nodes(BandId::CBRS);
  p.topology.nodes[1].position = {90000, 0};
  Simulation sim(p.config, p.topology, {});
  sim.begin_step(0.0);
  sim.inject_packet(0, packet(0, 0.0));
  sim.end_step(0.0);
  for (int k = 1; k <= 61; ++k) {
    sim.begin_step(k);
    sim.step_node(0, k);
    sim.end_step(k);
  }
  const auto &ev = sim.log().events();
  REQUIRE(ev.size() == 2);
  CHECK(ev[1].type == EventType::DropTtl);
  CHECK(ev[1].time == 61.0);
  CHECK(ev[1].reason == Reason::TtlExpired);
}

TEST_CASE("a full queue drops on arrival") {
  auto p = two_nodes(BandId::CBRS);
  p.config.queue_capacity = 1;
  Simulation sim(p.config, p.topology, {});
  sim.begin_step(0.0);
  CHECK(sim.inject_packet(0, packet(0, 0.0)) == QueueOutcome::Accept);
  CHECK(sim.inject_packet(0, packet(1, 0.0)) == QueueOutcome::DropFull);
  sim.end_step(0.0);
  CHECK(tally(sim.log()).at(EventType::DropFull) == 1);
}

TEST_CASE("runs are deterministic per seed") {
  for (auto alg : {Algorithm::Bard, Algorithm::Ddsaar}) {
    const auto a = run(small(alg, 4));
    const auto b = run(small(alg, 4));
    const auto c = run(small(alg, 5));
    CHECK(csv(a.log) == csv(b.log));
    CHECK(csv(a.log) != csv(c.log));
  }
}

TEST_CASE("default runs pass every audit") {
  for (auto alg : {Algorithm::Bard, Algorithm::Ddsaar}) {
    const auto r = run(small(alg, 2, 480.0));
    const auto report = audit_all(r.log, r.scenario);
    CHECK(report.ok());
    CHECK(report.checked > 0);
    const auto &m = r.metrics;
    CHECK(m.generated_packets == m.delivered_packets + m.dropped_ttl + m.dropped_full + m.in_flight);
    double sum = 0.0;
    for (double u : m.band_usage)
      sum += u;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(m.mean_latency_s);
    CHECK(*m.mean_latency_s <= 60.0);
    CHECK(*m.mdr >= 0.0);
    CHECK(*m.mdr <= 1.0);
  }
}

TEST_CASE("no sources means no traffic and no MDR") {
  auto c = small(Algorithm::Bard, 1);
  c.deployment.num_sources = 0;
  const auto r = run(c);
  CHECK_FALSE(r.metrics.mdr);
  CHECK(r.metrics.generated_messages == 0);
}

TEST_CASE("BARD delivers nearly everything without PUs") {
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = small(Algorithm::Bard, seed, 480.0);
    c.deployment.num_pus = 0;
    sum += *run(c).metrics.mdr;
  }
  CHECK(sum / 5 >= 0.9);
}

TEST_CASE("band restriction") {
  auto c = restrict_to_band(small(Algorithm::Bard, 3), BandId::TV);
  const auto r = run(c);
  int tx = 0;
  for (const auto &e : r.log.events())
    if (e.band) {
      CHECK(*e.band == BandId::TV);
      ++tx;
    }
  CHECK(tx > 0);
  CHECK(r.scenario.pus.size() == 150);

  const auto base = run(small(Algorithm::Bard, 3));
  const auto all = run(restrict_to_band(small(Algorithm::Bard, 3), BandSet::all()));
  CHECK(csv(base.log) == csv(all.log));
}

TEST_CASE("paired runs share traffic and PU activity") {
  const auto b = run(small(Algorithm::Bard, 6));
  const auto d = run(small(Algorithm::Ddsaar, 6));
  REQUIRE(b.trace.size() == d.trace.size());
  for (std::size_t k = 0; k < b.trace.size(); ++k) {
    CHECK(b.trace[k].created_at == d.trace[k].created_at);
    CHECK(b.trace[k].destination == d.trace[k].destination);
  }
  CHECK(b.metrics.generated_packets == d.metrics.generated_packets);
  REQUIRE(b.scenario.pu_on_intervals.size() == d.scenario.pu_on_intervals.size());
  for (std::size_t k = 0; k < b.scenario.pu_on_intervals.size(); ++k) {
    const auto &x = b.scenario.pu_on_intervals[k];
    const auto &y = d.scenario.pu_on_intervals[k];
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i + 1 < n; ++i)
      CHECK(x[i] == y[i]);
  }
}

TEST_CASE("baseline packets follow their stored route") {
  const auto r = run(small(Algorithm::Ddsaar, 8));
  REQUIRE(r.routes);
  std::map<std::int64_t, const Message *> by_message;
  for (const auto &m : r.trace)
    by_message[m.message_id] = &m;
  std::map<std::int64_t, std::vector<Action>> hops;
  for (const auto &e : r.log.events())
    if (e.type == EventType::TxSuccess)
      hops[e.packet_id].push_back({e.node_to, *e.band});
  std::map<std::int64_t, std::int64_t> message_of;
  for (const auto &e : r.log.events())
    if (e.type == EventType::Generated)
      message_of[e.packet_id] = e.message_id;
  REQUIRE(!hops.empty());
  for (const auto &[pid, taken] : hops) {
    const Message *m = by_message.at(message_of.at(pid));
    const auto &route = r.routes->route(m->source, m->destination);
    REQUIRE(taken.size() <= route.size());
    for (std::size_t k = 0; k < taken.size(); ++k)
      CHECK(taken[k] == route[k]);
  }
}

TEST_CASE("scenario JSON round trip keeps the audit result") {
  const auto r = run(small(Algorithm::Bard, 9));
  std::stringstream ss;
  r.scenario.write_json(ss);
  const auto back = Scenario::read_json(ss);
  CHECK(back.nodes.size() == r.scenario.nodes.size());
  CHECK(back.pus.size() == r.scenario.pus.size());
  CHECK(audit_all(r.log, back).ok());
  std::stringstream bad("{\"timestep_s\": 1}");
  CHECK_THROWS_AS(Scenario::read_json(bad), LookupError);
}

TEST_CASE("event log CSV round trip") {
  const auto r = run(small(Algorithm::Ddsaar, 10, 60.0));
  std::stringstream ss;
  r.log.write_csv(ss);
  const auto back = EventLog::read_csv(ss);
  CHECK(csv(back) == csv(r.log));
}
