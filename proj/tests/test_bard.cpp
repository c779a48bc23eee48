#include "dsa/bard.hpp"
#include "dsa/errors.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dsa;

TEST_CASE("state index is mixed radix") {
  StateSpace space{4, 4, 4};
  CHECK(space.size() == 256);
  CHECK(space.index({2, 1, 0b1011}) == 2 * 64 + 1 * 16 + 11);
  CHECK(space.index({2, 0, 0b1011}) == 139);
  CHECK(space.index({0, 0, 0}) == 0);
  CHECK(space.index({3, 3, 15}) == 255);
  CHECK_THROWS_AS(space.index({4, 0, 0}), EncodingError);
  CHECK_THROWS_AS(space.index({0, 4, 0}), EncodingError);
  CHECK_THROWS_AS(space.index({0, 0, 16}), EncodingError);

  StateSpace defaults;
  CHECK(defaults.size() == 192);
  std::vector<bool> seen(defaults.size(), false);
  for (int d = 0; d < 3; ++d)
    for (int b = 0; b < 4; ++b)
      for (unsigned m = 0; m < 16; ++m) {
        const int s = defaults.index({d, b, m});
        CHECK_FALSE(seen[s]);
        seen[s] = true;
      }
}

TEST_CASE("encode_state maps destinations to their index") {
  const std::vector<int> dests{3, 4, 5};
  StateSpace space;
  const auto k = encode_state(5, 2, 0b0110, dests, space);
  CHECK(k == StateKey{2, 2, 0b0110});
  CHECK(encode_state(5, 2, 0b0110, dests, space) == k);
  CHECK_THROWS_AS(encode_state(9, 0, 0, dests, space), EncodingError);
  CHECK_THROWS_AS(encode_state(3, 7, 0, dests, space), EncodingError);
}

TEST_CASE("select_action exploits the argmax with lowest-index ties") {
  QTable q(1, 3);
  q.at(0, 1) = 5.0;
  q.at(0, 2) = 3.0;
  Rng rng(1);
  CHECK(select_action(q, 0, 0.0, 0.0, rng) == 1);
  QTable flat(1, 4);
  CHECK(select_action(flat, 0, 0.0, 0.0, rng) == 0);
  QTable none(1, 0);
  CHECK_FALSE(select_action(none, 0, 1.0, 0.1, rng));
}

TEST_CASE("select_action explores uniformly at epsilon 1") {
  QTable q(1, 4);
  q.at(0, 2) = 100.0;
  Rng rng(2024);
  std::array<int, 4> count{};
  const int n = 100000;
  for (int k = 0; k < n; ++k)
    ++count[*select_action(q, 0, 1.0, 0.1, rng)];
  for (int c : count)
    CHECK(c / static_cast<double>(n) == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("epsilon floor drives exploration after decay") {
  RlParams p;
  double eps = p.epsilon0;
  for (int k = 0; k < 50; ++k)
    eps *= p.epsilon_decay;
  CHECK(eps == doctest::Approx(0.076945).epsilon(1e-4));
  CHECK(std::max(eps, p.epsilon_min) == 0.1);

  QTable q(1, 10);
  q.at(0, 3) = 1.0;
  Rng rng(5);
  int greedy = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k)
    greedy += *select_action(q, 0, eps, p.epsilon_min, rng) == 3;
  // 0.9 greedy plus 0.1 / 10 from exploration.
  CHECK(greedy / static_cast<double>(n) == doctest::Approx(0.91).epsilon(0.01));
}

TEST_CASE("agent decays epsilon once per decision") {
  RlParams p;
  BardAgent agent(0, {{1, BandId::TV}, {1, BandId::CBRS}}, StateSpace{}, p, Rng(3));
  CHECK(agent.epsilon() == 1.0);
  double prev = agent.epsilon();
  for (int k = 0; k < 80; ++k) {
    agent.decide(0);
    CHECK(agent.epsilon() <= prev);
    prev = agent.epsilon();
  }
  CHECK(agent.epsilon() == doctest::Approx(std::pow(0.95, 80)));
  BardAgent lonely(0, {}, StateSpace{}, p, Rng(3));
  CHECK_FALSE(lonely.decide(0));
  CHECK(lonely.epsilon() == 1.0);
}

TEST_CASE("reward examples") {
  RlParams p;
  RewardContext ctx;
  ctx.packet_size_bits = 5e6;
  ctx.min_rate_bps = 12.3e6;
  ctx.band_rate_bps = 1e300;

  ctx.delivered_to_destination = true;
  CHECK(compute_reward(ctx, p) == doctest::Approx(10.0).epsilon(1e-12));

  ctx.delivered_to_destination = false;
  ctx.channel_unavailable = true;
  CHECK(compute_reward(ctx, p) == doctest::Approx(-12.5).epsilon(1e-12));

  RewardTerms t{0.8101, 0.06076, 0.5};
  CHECK(reward_from_terms(t, false, false, p) == doctest::Approx(-3.1401).epsilon(1e-4));
  CHECK(std::abs(reward_from_terms(t, false, false, p) - (-3.1400929)) < 1e-4);
}

TEST_CASE("reward terms from the context") {
  RewardContext ctx;
  ctx.next_queue_len = 2;
  ctx.packet_size_bits = 5e6;
  ctx.min_rate_bps = 12.344240e6;
  ctx.band_rate_bps = 82.29493e6;
  ctx.dist_to_dest_m = 1500.0;
  ctx.next_dist_to_dest_m = 1000.0;
  const auto t = reward_terms(ctx);
  CHECK(t.queue_delay_s == doctest::Approx(0.81009).epsilon(1e-4));
  CHECK(t.tx_delay_s == doctest::Approx(0.0607571).epsilon(1e-5));
  CHECK(t.progress_km == doctest::Approx(0.5));
  ctx.band_rate_bps = 0.0;
  CHECK_THROWS_AS(reward_terms(ctx), ParameterError);
  ctx.band_rate_bps = -1.0;
  CHECK_THROWS_AS(compute_reward(ctx, RlParams{}), ParameterError);
}

TEST_CASE("q_update examples") {
  RlParams p;
  QTable q(2, 2);
  q.at(1, 0) = 3.0;
  CHECK(q_update(q, 0, 0, 10.0, 1, p) == doctest::Approx(2.36));
  QTable z(2, 2);
  CHECK(q_update(z, 0, 0, 0.0, 1, p) == 0.0);
  RlParams full = p;
  full.alpha = 1.0;
  QTable f(2, 2);
  f.at(0, 1) = -4.0;
  f.at(1, 1) = 2.0;
  CHECK(q_update(f, 0, 1, 1.5, 1, full) == 1.5 + 0.6 * 2.0);
  QTable t(2, 2);
  t.at(1, 0) = 50.0;
  CHECK(q_update(t, 0, 0, 10.0, std::nullopt, p) == doctest::Approx(2.0));
  CHECK_THROWS_AS(q_update(t, 0, 0, std::nan(""), 1, p), NumericError);
  CHECK_THROWS_AS(q_update(t, 0, 0, INFINITY, 1, p), NumericError);
}

TEST_CASE("reward and update match the oracle over random inputs") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    RlParams p;
    p.alpha = 0.01 + 0.99 * u(rng);
    p.gamma = u(rng);
    p.eta1 = 5 * u(rng);
    p.eta2 = 5 * u(rng);
    p.eta3 = 5 * u(rng);
    p.delta = 20 * u(rng);
    p.mu = 5 * u(rng);
    p.rho = 3 * u(rng);
    RewardContext c;
    c.next_queue_len = static_cast<int>(rng() % 201);
    c.packet_size_bits = 1e5 + 1e7 * u(rng);
    c.min_rate_bps = 1e6 + 1e8 * u(rng);
    c.band_rate_bps = 1e6 + 1e8 * u(rng);
    c.dist_to_dest_m = 3000 * u(rng);
    c.next_dist_to_dest_m = 3000 * u(rng);
    c.delivered_to_destination = rng() % 2;
    c.channel_unavailable = rng() % 2;
    const double r = compute_reward(c, p);
    const double o = oracle::reward(c.next_queue_len, c.packet_size_bits, c.min_rate_bps,
                                    c.band_rate_bps, c.dist_to_dest_m, c.next_dist_to_dest_m,
                                    c.delivered_to_destination, c.channel_unavailable, p.eta1,
                                    p.eta2, p.eta3, p.delta, p.mu, p.rho);
    REQUIRE(std::abs(r - o) <= 1e-9);

    QTable q(2, 3);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 3; ++a)
        q.at(s, a) = 40 * u(rng) - 20;
    const double before = q.at(0, 1);
    const double max_next = std::max({q.at(1, 0), q.at(1, 1), q.at(1, 2)});
    const bool terminal = rng() % 2;
    const double got = q_update(q, 0, 1, r, terminal ? std::nullopt : std::optional<int>(1), p);
    REQUIRE(std::abs(got - oracle::q_next(before, p.alpha, p.gamma, r, max_next, terminal)) <=
            1e-9);
  }
}

TEST_CASE("reward monotonicity") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RlParams p;
  for (int k = 0; k < 1000; ++k) {
    RewardContext c;
    c.min_rate_bps = 12e6;
    c.band_rate_bps = 40e6;
    c.next_queue_len = static_cast<int>(rng() % 100);
    c.dist_to_dest_m = 2000 * u(rng);
    c.next_dist_to_dest_m = 2000 * u(rng);
    auto more_queue = c;
    more_queue.next_queue_len += 1;
    CHECK(compute_reward(more_queue, p) < compute_reward(c, p));
    auto more_progress = c;
    more_progress.next_dist_to_dest_m -= 10.0;
    CHECK(compute_reward(more_progress, p) > compute_reward(c, p));
  }
}

TEST_CASE("Q-values stay bounded and argmax ignores constant shifts") {
  RlParams p;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> r(-15.0, 15.0);
  QTable q(4, 5);
  for (int k = 0; k < 20000; ++k) {
    const int s = static_cast<int>(rng() % 4);
    const int a = static_cast<int>(rng() % 5);
    q_update(q, s, a, r(rng), static_cast<int>(rng() % 4), p);
  }
  for (int s = 0; s < 4; ++s)
    for (int a = 0; a < 5; ++a)
      CHECK(std::abs(q.at(s, a)) <= 15.0 / (1.0 - p.gamma) + 1e-9);

  for (int s = 0; s < 4; ++s) {
    QTable shifted = q;
    for (int a = 0; a < 5; ++a)
      shifted.at(s, a) += 7.25;
    CHECK(shifted.argmax(s) == q.argmax(s));
  }
}

TEST_CASE("RL parameter validation") {
  RlParams p;
  CHECK_NOTHROW(p.validate());
  p.epsilon_min = 2.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.gamma = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.epsilon_decay = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
