#pragma once

#include "dsa/rng.hpp"
#include "dsa/topology.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dsa {

struct RlParams {
  double alpha = 0.2;
  double gamma = 0.6;
  double epsilon0 = 1.0;
  double epsilon_decay = 0.95;
  double epsilon_min = 0.1;
  double eta1 = 2.0;
  double eta2 = 2.0;
  double eta3 = 2.0;
  double delta = 10.0; // destination reward
  double mu = 2.5;     // relay penalty
  double rho = 1.0;    // weight of the link terms

  void validate() const;
};

/// Tabular state: packet destination, message size bin, and a bitmask with
/// bit b set when at least one neighbour is reachable over band b on a free
/// channel right now.
struct StateKey {
  int dest_idx = 0;
  int size_bin = 0;
  unsigned band_mask = 0;
  bool operator==(const StateKey &) const = default;
};

struct StateSpace {
  int num_destinations = 3;
  int num_size_bins = 4;
  int num_bands = kNumBands;

  int size() const { return num_destinations * num_size_bins * (1 << num_bands); }
  /// dest_idx * (M * 2^|B|) + size_bin * 2^|B| + mask.
  int index(const StateKey &key) const;
};

/// Throws EncodingError when the packet's destination is not in `destinations`.
StateKey encode_state(int destination, int size_bin, unsigned band_mask,
                      std::span<const int> destinations, const StateSpace &space);

class QTable {
public:
  QTable() = default;
  QTable(int num_states, int num_actions)
      : states_(num_states), actions_(num_actions),
        values_(static_cast<std::size_t>(num_states) * num_actions, 0.0) {}

  int num_states() const { return states_; }
  int num_actions() const { return actions_; }

  double &at(int s, int a) { return values_[offset(s, a)]; }
  double at(int s, int a) const { return values_[offset(s, a)]; }
  std::span<const double> row(int s) const {
    return {values_.data() + offset(s, 0), static_cast<std::size_t>(actions_)};
  }
  /// 0 for an empty action set.
  double max_value(int s) const;
  /// Lowest index among the maxima; -1 for an empty action set.
  int argmax(int s) const;

private:
  std::size_t offset(int s, int a) const;

  int states_ = 0;
  int actions_ = 0;
  std::vector<double> values_;
};

/// Epsilon-greedy choice over the row of state `s`. Explores uniformly with
/// probability max(epsilon, epsilon_min), otherwise takes argmax. Returns
/// nullopt for an empty action set.
std::optional<int> select_action(const QTable &q, int s, double epsilon, double epsilon_min,
                                 Rng &rng);

/// Per-decision inputs to the reward.
struct RewardContext {
  int next_queue_len = 0;           // n_j, before this packet is enqueued
  double packet_size_bits = 5e6;    // l
  double min_rate_bps = 0.0;        // R_min over usable bands
  double band_rate_bps = 0.0;       // R_b of the chosen band
  double dist_to_dest_m = 0.0;      // d(i, y_p)
  double next_dist_to_dest_m = 0.0; // d(j, y_p)
  bool delivered_to_destination = false; // theta(j)
  bool channel_unavailable = false;      // phi(b)
};

struct RewardTerms {
  double queue_delay_s = 0.0;    // T_q
  double tx_delay_s = 0.0;       // T_d
  double progress_km = 0.0;      // T_r
};

RewardTerms reward_terms(const RewardContext &ctx);

/// eta1*asinh(-Tq) + delta*(theta - phi) - mu*(1 - theta)
///   + rho*(eta2*asinh(-Td) + eta3*asinh(Tr))
double reward_from_terms(const RewardTerms &terms, bool delivered, bool unavailable,
                         const RlParams &params);

/// Throws ParameterError for non-positive rates.
double compute_reward(const RewardContext &ctx, const RlParams &params);

/// Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a')). A missing
/// `next_state` marks a terminal transition (bootstrap term 0). Returns the
/// new value; throws NumericError for a non-finite reward.
double q_update(QTable &q, int s, int a, double reward, std::optional<int> next_state,
                const RlParams &params);

/// One node's learner: its action space, Q-table, exploration rate and
/// private random stream.
class BardAgent {
public:
  BardAgent(int node, std::vector<Action> actions, const StateSpace &space,
            const RlParams &params, Rng rng);

  int node() const { return node_; }
  const std::vector<Action> &actions() const { return actions_; }
  const QTable &q() const { return q_; }
  QTable &q() { return q_; }
  double epsilon() const { return epsilon_; }

  /// Selects an action index for state `s` and decays epsilon once.
  std::optional<int> decide(int s);
  double learn(int s, int a, double reward, std::optional<int> next_state);

private:
  int node_;
  std::vector<Action> actions_;
  RlParams params_;
  QTable q_;
  double epsilon_;
  Rng rng_;
};

} // namespace dsa
