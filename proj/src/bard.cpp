#include "dsa/bard.hpp"

#include "dsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dsa {

void RlParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("/rl/alpha", "must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("/rl/gamma", "must lie in [0, 1]");
  if (!(epsilon_decay > 0.0 && epsilon_decay < 1.0))
    throw ConfigError("/rl/epsilon_decay", "must lie in (0, 1)");
  if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon0))
    throw ConfigError("/rl/epsilon_min", "must lie in [0, epsilon0]");
  for (double v : {eta1, eta2, eta3, delta, mu, rho})
    if (!std::isfinite(v))
      throw ConfigError("/rl", "reward weights must be finite");
}

int StateSpace::index(const StateKey &key) const {
  if (key.dest_idx < 0 || key.dest_idx >= num_destinations)
    throw EncodingError("destination index out of range");
  if (key.size_bin < 0 || key.size_bin >= num_size_bins)
    throw EncodingError("size bin out of range");
  if (key.band_mask >= (1u << num_bands))
    throw EncodingError("band mask out of range");
  const int per_bin = 1 << num_bands;
  return key.dest_idx * (num_size_bins * per_bin) + key.size_bin * per_bin +
         static_cast<int>(key.band_mask);
}

StateKey encode_state(int destination, int size_bin, unsigned band_mask,
                      std::span<const int> destinations, const StateSpace &space) {
  const auto it = std::find(destinations.begin(), destinations.end(), destination);
  if (it == destinations.end())
    throw EncodingError("unknown destination " + std::to_string(destination));
  StateKey key{static_cast<int>(it - destinations.begin()), size_bin, band_mask};
  space.index(key);
  return key;
}

std::size_t QTable::offset(int s, int a) const {
  if (s < 0 || s >= states_ || a < 0 || a >= actions_)
    throw LookupError("Q-table index out of range");
  return static_cast<std::size_t>(s) * actions_ + a;
}

double QTable::max_value(int s) const {
  if (actions_ == 0)
    return 0.0;
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

int QTable::argmax(int s) const {
  if (actions_ == 0)
    return -1;
  const auto r = row(s);
  // max_element returns the first maximum.
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

std::optional<int> select_action(const QTable &q, int s, double epsilon, double epsilon_min,
                                 Rng &rng) {
  if (q.num_actions() == 0)
    return std::nullopt;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u <= std::max(epsilon, epsilon_min))
    return std::uniform_int_distribution<int>(0, q.num_actions() - 1)(rng);
  return q.argmax(s);
}

RewardTerms reward_terms(const RewardContext &ctx) {
  if (!(ctx.band_rate_bps > 0.0) || !(ctx.min_rate_bps > 0.0))
    throw ParameterError("reward: bit rates must be positive");
  RewardTerms t;
  t.queue_delay_s = ctx.next_queue_len * ctx.packet_size_bits / ctx.min_rate_bps;
  t.tx_delay_s = ctx.packet_size_bits / ctx.band_rate_bps;
  t.progress_km = (ctx.dist_to_dest_m - ctx.next_dist_to_dest_m) / 1000.0;
  return t;
}

double reward_from_terms(const RewardTerms &terms, bool delivered, bool unavailable,
                         const RlParams &p) {
  const double theta = delivered ? 1.0 : 0.0;
  const double phi = unavailable ? 1.0 : 0.0;
  return p.eta1 * std::asinh(-terms.queue_delay_s) + p.delta * (theta - phi) -
         p.mu * (1.0 - theta) +
         p.rho * (p.eta2 * std::asinh(-terms.tx_delay_s) + p.eta3 * std::asinh(terms.progress_km));
}

double compute_reward(const RewardContext &ctx, const RlParams &params) {
  return reward_from_terms(reward_terms(ctx), ctx.delivered_to_destination,
                           ctx.channel_unavailable, params);
}

double q_update(QTable &q, int s, int a, double reward, std::optional<int> next_state,
                const RlParams &params) {
  if (!std::isfinite(reward))
    throw NumericError("q_update: non-finite reward");
  const double bootstrap = next_state ? q.max_value(*next_state) : 0.0;
  double &v = q.at(s, a);
  v = (1.0 - params.alpha) * v + params.alpha * (reward + params.gamma * bootstrap);
  return v;
}

BardAgent::BardAgent(int node, std::vector<Action> actions, const StateSpace &space,
                     const RlParams &params, Rng rng)
    : node_(node), actions_(std::move(actions)), params_(params),
      q_(space.size(), static_cast<int>(actions_.size())), epsilon_(params.epsilon0),
      rng_(std::move(rng)) {}

std::optional<int> BardAgent::decide(int s) {
  auto a = select_action(q_, s, epsilon_, params_.epsilon_min, rng_);
  if (a)
    epsilon_ *= params_.epsilon_decay;
  return a;
}

double BardAgent::learn(int s, int a, double reward, std::optional<int> next_state) {
  return q_update(q_, s, a, reward, next_state, params_);
}

} // namespace dsa
