#include "dsa/spectrum.hpp"

#include <algorithm>

namespace dsa {

namespace {

double draw_sojourn(Rng &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool within(const Position &p, const Position &a, const Position &b, double range) {
  return distance(p, a) <= range || distance(p, b) <= range;
}

} // namespace

PuProcess advance_pu(PuProcess process, double t, Rng &rng) {
  const double lo = process.min_duration;
  const double hi = process.max_duration;
  return advance_pu(std::move(process), t, [&] { return draw_sojourn(rng, lo, hi); });
}

PuActivity::PuActivity(int pu_id, Position position, BandId band, int channel,
                       double min_duration, double max_duration, Rng rng)
    : rng_(std::move(rng)) {
  if (!(min_duration > 0.0) || !(max_duration >= min_duration))
    throw ParameterError("PU sojourn bounds must satisfy 0 < min <= max");
  process_.pu_id = pu_id;
  process_.position = position;
  process_.band = band;
  process_.channel = channel;
  process_.min_duration = min_duration;
  process_.max_duration = max_duration;
  process_.state = std::bernoulli_distribution(0.5)(rng_) ? PuState::On : PuState::Off;
  process_.next_transition = draw_sojourn(rng_, min_duration, max_duration);
  process_.last_advanced = 0.0;
  initial_state_ = process_.state;
}

void PuActivity::extend_to(double t) {
  if (t <= process_.last_advanced)
    return;
  const double lo = process_.min_duration;
  const double hi = process_.max_duration;
  process_ = advance_pu(
      std::move(process_), t, [&] { return draw_sojourn(rng_, lo, hi); },
      [&](double at, PuState) { flips_.push_back(at); });
}

bool PuActivity::is_on(double t) const {
  if (t > process_.last_advanced)
    throw TemporalOrderError("PU timeline queried beyond its covered horizon");
  const auto flips = std::upper_bound(flips_.begin(), flips_.end(), t) - flips_.begin();
  const bool on_initially = initial_state_ == PuState::On;
  return (flips % 2 == 0) ? on_initially : !on_initially;
}

std::vector<std::pair<double, double>> PuActivity::on_intervals(double until) const {
  std::vector<std::pair<double, double>> out;
  bool on = initial_state_ == PuState::On;
  double since = 0.0;
  for (double f : flips_) {
    if (f > until)
      break;
    if (on && f > since)
      out.emplace_back(since, f);
    on = !on;
    since = f;
  }
  if (on && until > since)
    out.emplace_back(since, until);
  return out;
}

Spectrum::Spectrum(std::vector<BandProfile> catalog, std::vector<PuActivity> pus)
    : catalog_(std::move(catalog)), pus_(std::move(pus)) {
  first_slot_.fill(-1);
  int next = 0;
  for (const auto &band : catalog_) {
    band.validate();
    const int b = band_index(band.id);
    if (first_slot_[b] >= 0)
      throw ParameterError("duplicate band in catalog");
    first_slot_[b] = next;
    channels_[b] = band.num_channels;
    next += band.num_channels;
  }
  pus_by_slot_.resize(next);
  tx_by_slot_.resize(next);
  for (int k = 0; k < static_cast<int>(pus_.size()); ++k) {
    const auto &p = pus_[k].process();
    pus_by_slot_[slot(p.band, p.channel)].push_back(k);
  }
}

int Spectrum::slot(BandId band, int channel) const {
  const int b = band_index(band);
  if (first_slot_[b] < 0)
    throw LookupError("band " + std::string(band_name(band)) + " not in catalog");
  if (channel < 0 || channel >= channels_[b])
    throw LookupError("channel index out of range");
  return first_slot_[b] + channel;
}

void Spectrum::advance_to(double t) {
  for (auto &pu : pus_)
    pu.extend_to(t);
}

bool Spectrum::channel_free(const Position &a, const Position &b, BandId band, int channel,
                            double t, double duration) const {
  const int s = slot(band, channel);
  const double range = find_band(catalog_, band).range_m;
  for (int k : pus_by_slot_[s]) {
    const auto &pu = pus_[k];
    if (within(pu.process().position, a, b, range) && pu.is_on(t))
      return false;
  }
  return su_clear(a, b, s, range, t, duration);
}

bool Spectrum::su_clear(const Position &a, const Position &b, int s, double range, double t,
                        double duration) const {
  for (const auto &tx : tx_by_slot_[s]) {
    const bool overlaps = duration > 0.0 ? (tx.start < t + duration && t < tx.end)
                                         : (tx.start <= t && t < tx.end);
    if (overlaps && within(tx.origin, a, b, range))
      return false;
  }
  return true;
}

void Spectrum::attach_nodes(std::vector<Position> nodes) {
  nodes_ = std::move(nodes);
  const std::size_t slots = pus_by_slot_.size();
  near_.assign(nodes_.size() * slots, {});
  for (const auto &band : catalog_)
    range_[band_index(band.id)] = band.range_m;
  for (std::size_t n = 0; n < nodes_.size(); ++n)
    for (std::size_t s = 0; s < slots; ++s)
      for (int k : pus_by_slot_[s]) {
        const auto &p = pus_[k].process();
        if (distance(p.position, nodes_[n]) <= range_[band_index(p.band)])
          near_[n * slots + s].push_back(k);
      }
}

bool Spectrum::node_clear(int node, int s, double t) const {
  for (int k : near_[static_cast<std::size_t>(node) * pus_by_slot_.size() + s])
    if (pus_[k].is_on(t))
      return false;
  return true;
}

std::optional<int> Spectrum::find_common_channel(int a, int b, BandId band, double t,
                                                 double duration) const {
  if (a < 0 || b < 0 || static_cast<std::size_t>(std::max(a, b)) >= nodes_.size())
    throw LookupError("node not attached to spectrum");
  const int n = channels_[band_index(band)];
  const double range = range_[band_index(band)];
  for (int c = 0; c < n; ++c) {
    const int s = slot(band, c);
    if (node_clear(a, s, t) && node_clear(b, s, t) &&
        su_clear(nodes_[a], nodes_[b], s, range, t, duration))
      return c;
  }
  return std::nullopt;
}

bool Spectrum::any_common_channel(int a, std::span<const int> peers, BandId band,
                                  double t) const {
  if (peers.empty())
    return false;
  if (a < 0 || static_cast<std::size_t>(a) >= nodes_.size())
    throw LookupError("node not attached to spectrum");
  const int n = channels_[band_index(band)];
  const double range = range_[band_index(band)];
  for (int c = 0; c < n; ++c) {
    const int s = slot(band, c);
    if (!node_clear(a, s, t))
      continue;
    for (int j : peers)
      if (node_clear(j, s, t) && su_clear(nodes_[a], nodes_[j], s, range, t, 0.0))
        return true;
  }
  return false;
}

std::optional<int> Spectrum::find_common_channel(const Position &a, const Position &b,
                                                 BandId band, double t, double duration) const {
  const int n = channels_[band_index(band)];
  slot(band, 0);
  for (int c = 0; c < n; ++c)
    if (channel_free(a, b, band, c, t, duration))
      return c;
  return std::nullopt;
}

void Spectrum::register_transmission(const SuTransmission &tx) {
  if (!(tx.end > tx.start))
    throw ParameterError("transmission must have positive duration");
  auto &list = tx_by_slot_[slot(tx.band, tx.channel)];
  if (std::find(list.begin(), list.end(), tx) != list.end())
    throw DuplicateError("transmission already registered");
  list.push_back(tx);
}

void Spectrum::expire_transmissions(double t) {
  for (auto &list : tx_by_slot_)
    std::erase_if(list, [t](const SuTransmission &tx) { return tx.end <= t; });
}

std::size_t Spectrum::active_transmissions() const {
  std::size_t n = 0;
  for (const auto &list : tx_by_slot_)
    n += list.size();
  return n;
}

} // namespace dsa
