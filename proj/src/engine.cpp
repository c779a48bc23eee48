#include "dsa/engine.hpp"

#include "dsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace dsa {

Simulation::Simulation(RunConfig config)
    : Simulation(config, Topology{}, {}) {}

Simulation::Simulation(RunConfig config, Topology topology, std::vector<Message> trace)
    : config_(std::move(config)), topology_(std::move(topology)), trace_(std::move(trace)) {
  config_.validate();
  const auto seed = config_.engine.seed;
  if (topology_.nodes.empty() && config_.deployment.num_sus > 0) {
    topology_ = deploy(config_.deployment, config_.bands, seed);
    const auto sources = topology_.sources();
    const auto dests = topology_.destinations();
    trace_ = generate_trace(sources, dests, config_.engine.horizon_s, config_.traffic, seed);
  }

  positions_ = topology_.positions();
  destinations_ = topology_.destinations();
  const int n = static_cast<int>(topology_.nodes.size());

  std::vector<PuActivity> pus;
  pus.reserve(topology_.pus.size());
  for (std::size_t k = 0; k < topology_.pus.size(); ++k) {
    const auto &pu = topology_.pus[k];
    pus.emplace_back(static_cast<int>(k), pu.position, pu.band, pu.channel,
                     config_.pu_min_duration_s, config_.pu_max_duration_s,
                     make_rng(seed, Stream::PuActivity, k));
  }
  spectrum_ = std::make_unique<Spectrum>(config_.bands, std::move(pus));
  spectrum_->attach_nodes(positions_);

  BandSet usable;
  min_rate_ = 0.0;
  for (const auto &band : config_.bands) {
    rate_[band_index(band.id)] = band.bit_rate_bps;
    if (!config_.engine.usable_bands.contains(band.id))
      continue;
    usable.insert(band.id);
    if (min_rate_ == 0.0 || band.bit_rate_bps < min_rate_)
      min_rate_ = band.bit_rate_bps;
    max_tx_delay_ = std::max(max_tx_delay_, config_.packet_size_bits() / band.bit_rate_bps);
  }

  space_.num_destinations = std::max<int>(1, static_cast<int>(destinations_.size()));
  space_.num_size_bins = config_.traffic.num_size_bins();
  space_.num_bands = kNumBands;

  queues_.assign(n, PacketQueue(config_.queue_capacity));
  if (config_.engine.algorithm == Algorithm::Bard) {
    agents_.reserve(n);
    neighbours_.resize(n);
    for (int i = 0; i < n; ++i) {
      auto actions = build_action_space(i, positions_, config_.bands, usable);
      for (const auto &a : actions)
        neighbours_[i][band_index(a.band)].push_back(a.next_node);
      agents_.emplace_back(i, std::move(actions), space_, config_.rl,
                           make_rng(seed, Stream::Agent, static_cast<std::uint64_t>(i)));
    }
  } else {
    const auto graph = build_stb_static(positions_, config_.bands, config_.radio,
                                        config_.packet_size_bits(), usable);
    routes_ = RouteTable::build(graph, topology_.sources(), destinations_);
  }
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation &&) noexcept = default;

const Spectrum &Simulation::spectrum() const { return *spectrum_; }
Spectrum &Simulation::spectrum() { return *spectrum_; }

QueueOutcome Simulation::inject_packet(int node, Packet packet) {
  emit({packet.created_at, EventType::Generated, node, -1, std::nullopt, -1, packet.packet_id,
        packet.message_id, Reason::None});
  const double at = packet.created_at;
  const auto pid = packet.packet_id;
  const auto mid = packet.message_id;
  const auto outcome = queues_.at(node).enqueue(std::move(packet));
  if (outcome == QueueOutcome::DropFull)
    emit({at, EventType::DropFull, node, -1, std::nullopt, -1, pid, mid, Reason::QueueFull});
  return outcome;
}

void Simulation::begin_step(double tau) {
  const double step = config_.engine.timestep_s;
  spectrum_->advance_to(tau + step);
  spectrum_->expire_transmissions(tau);

  while (next_message_ < trace_.size() && trace_[next_message_].created_at < tau + step) {
    const auto &m = trace_[next_message_++];
    for (auto &p : packetize(m, config_.traffic, next_packet_id_))
      inject_packet(m.source, std::move(p));
    next_packet_id_ += m.num_packets;
  }

  for (int i = 0; i < static_cast<int>(queues_.size()); ++i)
    for (const auto &p : queues_[i].expire(tau))
      emit({tau, EventType::DropTtl, i, -1, std::nullopt, -1, p.packet_id, p.message_id,
            Reason::TtlExpired});
}

void Simulation::step_node(int i, double tau) {
  if (config_.engine.algorithm == Algorithm::Bard)
    step_bard(i, tau);
  else
    step_ddsaar(i, tau);
}

void Simulation::end_step(double tau) {
  const double until = tau + config_.engine.timestep_s;
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Event &a, const Event &b) { return a.time < b.time; });
  std::size_t k = 0;
  for (; k < pending_.size() && pending_[k].time < until; ++k)
    log_.append(pending_[k]);
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(k));
}

void Simulation::finish() {
  if (finished_)
    return;
  finished_ = true;
  const double horizon = config_.engine.horizon_s;
  for (int i = 0; i < static_cast<int>(queues_.size()); ++i)
    for (const auto &p : queues_[i].items())
      emit({horizon, EventType::InFlight, i, -1, std::nullopt, -1, p.packet_id, p.message_id,
            Reason::EndOfRun});
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Event &a, const Event &b) { return a.time < b.time; });
  for (const auto &e : pending_)
    log_.append(e);
  pending_.clear();
}

unsigned Simulation::sense_bands(int i, double t) const {
  unsigned mask = 0;
  if (neighbours_.empty())
    return mask;
  for (BandId b : kAllBands)
    if (spectrum_->any_common_channel(i, neighbours_[i][band_index(b)], b, t))
      mask |= 1u << band_index(b);
  return mask;
}

bool Simulation::receive(Packet packet, int from, int j, BandId band, int channel, double t,
                         double arrival) {
  packet.hop_trace.push_back({from, band, t});
  if (j == packet.destination) {
    emit({arrival, EventType::Delivery, from, j, band, channel, packet.packet_id,
          packet.message_id, Reason::None});
    return true;
  }
  packet.available_at = arrival;
  const auto pid = packet.packet_id;
  const auto mid = packet.message_id;
  if (queues_[j].enqueue(std::move(packet)) == QueueOutcome::DropFull)
    emit({arrival, EventType::DropFull, from, j, band, channel, pid, mid, Reason::QueueFull});
  return false;
}

void Simulation::step_bard(int i, double tau) {
  auto &agent = agents_[i];
  auto &queue = queues_[i].items();
  if (agent.actions().empty() || queue.empty())
    return;

  double min_delay = max_tx_delay_;
  for (const auto &a : agent.actions())
    min_delay = std::min(min_delay, tx_delay(a.band));

  const double step = config_.engine.timestep_s;
  const double c = config_.radio.speed_of_light_mps;
  double rem = step;
  std::deque<Packet> kept;

  while (!queue.empty()) {
    Packet p = std::move(queue.front());
    queue.pop_front();
    if (p.available_at > tau) {
      kept.push_back(std::move(p));
      continue;
    }
    const double t = tau + (step - rem);
    if (t > p.ttl_deadline) {
      emit({t, EventType::DropTtl, i, -1, std::nullopt, -1, p.packet_id, p.message_id,
            Reason::TtlExpired});
      continue;
    }
    if (rem <= min_delay) {
      kept.push_back(std::move(p));
      break;
    }

    const int dest = p.destination;
    const int bin = p.size_bin;
    const int s = space_.index(encode_state(dest, bin, sense_bands(i, t), destinations_, space_));
    const int a = *agent.decide(s);
    const Action act = agent.actions()[a];
    const int j = act.next_node;
    const double td = tx_delay(act.band);
    const double d_ij = distance(positions_[i], positions_[j]);
    const double arrival = t + td + d_ij / c;

    RewardContext ctx;
    ctx.next_queue_len = queues_[j].size();
    ctx.packet_size_bits = config_.packet_size_bits();
    ctx.min_rate_bps = min_rate_;
    ctx.band_rate_bps = rate_[band_index(act.band)];
    ctx.dist_to_dest_m = distance(positions_[i], positions_[dest]);
    ctx.next_dist_to_dest_m = distance(positions_[j], positions_[dest]);

    const bool budget_ok = td < rem;
    const bool fits = budget_ok && arrival <= p.ttl_deadline;
    Event attempt{t, EventType::TxAttempt, i, j, act.band, -1, p.packet_id, p.message_id,
                  fits ? Reason::None : Reason::BudgetExhausted};
    emit(attempt);

    if (fits) {
      const auto ch = spectrum_->find_common_channel(i, j, act.band, t, td);
      if (ch) {
        spectrum_->register_transmission({i, act.band, *ch, t, t + td, positions_[i]});
        rem -= td;
        emit({t, EventType::TxSuccess, i, j, act.band, *ch, p.packet_id, p.message_id,
              Reason::None});
        ctx.delivered_to_destination = receive(std::move(p), i, j, act.band, *ch, t, arrival);
      } else {
        ctx.channel_unavailable = true;
        emit({t, EventType::NoChannel, i, j, act.band, -1, p.packet_id, p.message_id,
              Reason::NoCommonChannel});
        kept.push_back(std::move(p));
      }
    } else {
      kept.push_back(std::move(p));
    }

    const double r = compute_reward(ctx, config_.rl);
    std::optional<int> next;
    if (!ctx.delivered_to_destination)
      next = space_.index(encode_state(dest, bin, sense_bands(i, tau + (step - rem)),
                                       destinations_, space_));
    agent.learn(s, a, r, next);
  }
  while (!queue.empty()) {
    kept.push_back(std::move(queue.front()));
    queue.pop_front();
  }
  queue = std::move(kept);
}

void Simulation::step_ddsaar(int i, double tau) {
  auto &queue = queues_[i].items();
  if (queue.empty())
    return;
  const double step = config_.engine.timestep_s;
  const double c = config_.radio.speed_of_light_mps;
  double rem = step;
  std::deque<Packet> kept;

  while (!queue.empty()) {
    Packet p = std::move(queue.front());
    queue.pop_front();
    if (p.available_at > tau) {
      kept.push_back(std::move(p));
      continue;
    }
    const double t = tau + (step - rem);
    if (t > p.ttl_deadline) {
      emit({t, EventType::DropTtl, i, -1, std::nullopt, -1, p.packet_id, p.message_id,
            Reason::TtlExpired});
      continue;
    }
    const Route &route = routes_->route(p.source, p.destination);
    if (static_cast<std::size_t>(p.hops()) >= route.size()) {
      kept.push_back(std::move(p));
      continue;
    }
    const Action hop = route[p.hops()];
    const double td = tx_delay(hop.band);
    const double arrival = t + td + distance(positions_[i], positions_[hop.next_node]) / c;
    if (!(td < rem)) {
      kept.push_back(std::move(p));
      break;
    }
    if (arrival > p.ttl_deadline) {
      kept.push_back(std::move(p));
      continue;
    }

    emit({t, EventType::TxAttempt, i, hop.next_node, hop.band, -1, p.packet_id, p.message_id,
          Reason::None});
    const auto d = forward_on_route(p, i, route, *spectrum_, positions_, t, td);
    if (d.outcome == ForwardOutcome::Transmit) {
      spectrum_->register_transmission({i, hop.band, *d.channel, t, t + td, positions_[i]});
      rem -= td;
      emit({t, EventType::TxSuccess, i, hop.next_node, hop.band, *d.channel, p.packet_id,
            p.message_id, Reason::None});
      receive(std::move(p), i, hop.next_node, hop.band, *d.channel, t, arrival);
    } else {
      emit({t, EventType::NoChannel, i, hop.next_node, hop.band, -1, p.packet_id, p.message_id,
            Reason::NoCommonChannel});
      kept.push_back(std::move(p));
    }
  }
  while (!queue.empty()) {
    kept.push_back(std::move(queue.front()));
    queue.pop_front();
  }
  queue = std::move(kept);
}

Scenario Simulation::scenario() const {
  Scenario s;
  s.catalog = config_.bands;
  s.nodes = positions_;
  s.pus = topology_.pus;
  for (const auto &pu : spectrum_->pus())
    s.pu_on_intervals.push_back(pu.on_intervals(pu.covered_until()));
  s.timestep_s = config_.engine.timestep_s;
  s.horizon_s = config_.engine.horizon_s;
  s.packet_size_bits = config_.packet_size_bits();
  return s;
}

RunResult Simulation::run() && {
  const double step = config_.engine.timestep_s;
  const auto steps = static_cast<long>(std::llround(config_.engine.horizon_s / step));
  const int n = static_cast<int>(queues_.size());
  for (long k = 0; k < steps; ++k) {
    const double tau = static_cast<double>(k) * step;
    begin_step(tau);
    for (int i = 0; i < n; ++i)
      step_node(i, tau);
    end_step(tau);
  }
  finish();

  RunResult result;
  result.metrics = compute_metrics(log_, trace_, config_.engine.horizon_s);
  result.scenario = scenario();
  result.config = config_;
  result.topology = std::move(topology_);
  result.trace = std::move(trace_);
  result.log = std::move(log_);
  result.routes = std::move(routes_);
  for (auto &a : agents_)
    result.q_tables.push_back(a.q());
  return result;
}

RunResult run(const RunConfig &config) { return Simulation(config).run(); }

// --- scenario file --------------------------------------------------------

void Scenario::write_json(std::ostream &os) const {
  using nlohmann::json;
  json doc;
  doc["timestep_s"] = timestep_s;
  doc["horizon_s"] = horizon_s;
  doc["packet_size_bits"] = packet_size_bits;
  doc["bands"] = json::array();
  for (const auto &b : catalog)
    doc["bands"].push_back({{"id", band_name(b.id)},
                            {"carrier_freq_hz", b.carrier_freq_hz},
                            {"channel_bandwidth_hz", b.channel_bandwidth_hz},
                            {"transmit_power_w", b.transmit_power_w},
                            {"num_channels", b.num_channels},
                            {"range_m", b.range_m},
                            {"bit_rate_bps", b.bit_rate_bps}});
  doc["nodes"] = json::array();
  for (const auto &p : nodes)
    doc["nodes"].push_back({p.x, p.y});
  doc["pus"] = json::array();
  for (std::size_t k = 0; k < pus.size(); ++k) {
    json on = json::array();
    if (k < pu_on_intervals.size())
      for (const auto &[a, b] : pu_on_intervals[k])
        on.push_back({a, b});
    doc["pus"].push_back({{"x", pus[k].position.x},
                          {"y", pus[k].position.y},
                          {"band", band_name(pus[k].band)},
                          {"channel", pus[k].channel},
                          {"on", on}});
  }
  os << doc.dump(1) << '\n';
}

Scenario Scenario::read_json(std::istream &is) {
  using nlohmann::json;
  Scenario s;
  try {
    const json doc = json::parse(is);
    s.timestep_s = doc.at("timestep_s").get<double>();
    s.horizon_s = doc.at("horizon_s").get<double>();
    s.packet_size_bits = doc.at("packet_size_bits").get<double>();
    for (const auto &b : doc.at("bands")) {
      BandProfile p;
      const auto id = parse_band(b.at("id").get<std::string>());
      if (!id)
        throw LookupError("scenario: unknown band");
      p.id = *id;
      p.carrier_freq_hz = b.at("carrier_freq_hz").get<double>();
      p.channel_bandwidth_hz = b.at("channel_bandwidth_hz").get<double>();
      p.transmit_power_w = b.at("transmit_power_w").get<double>();
      p.num_channels = b.at("num_channels").get<int>();
      p.range_m = b.at("range_m").get<double>();
      p.bit_rate_bps = b.at("bit_rate_bps").get<double>();
      s.catalog.push_back(p);
    }
    for (const auto &n : doc.at("nodes"))
      s.nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    for (const auto &pu : doc.at("pus")) {
      PuPlacement p;
      p.position = {pu.at("x").get<double>(), pu.at("y").get<double>()};
      const auto band = parse_band(pu.at("band").get<std::string>());
      if (!band)
        throw LookupError("scenario: unknown PU band");
      p.band = *band;
      p.channel = pu.at("channel").get<int>();
      s.pus.push_back(p);
      auto &on = s.pu_on_intervals.emplace_back();
      for (const auto &iv : pu.at("on"))
        on.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
    }
  } catch (const json::exception &e) {
    throw LookupError(std::string("scenario file: ") + e.what());
  }
  return s;
}

} // namespace dsa
