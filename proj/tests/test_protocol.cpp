#include <doctest.h>

#include <map>
#include <numeric>
#include <sstream>

#include "comex/protocol.hpp"

using namespace comex;

namespace {

using Buffers = std::vector<MessageBuffer<RewardMessage>>;

// Steps a relay network where `births` lists the messages created at each
// step; records (receiver, origin, origin_time) -> step of incorporation.
std::map<std::tuple<int, int, int>, int> relay(const Topology& g, int gamma, int steps,
                                               const std::map<int, std::vector<RewardMessage>>& births,
                                               std::int64_t* sent = nullptr) {
  const int n = g.size();
  Buffers bufs(n, MessageBuffer<RewardMessage>(n, gamma));
  std::map<std::tuple<int, int, int>, int> got;
  for (int t = 1; t <= steps; ++t) {
    std::vector<std::optional<RewardMessage>> own(n);
    if (auto it = births.find(t); it != births.end())
      for (const auto& m : it->second) own[m.origin] = m;
    std::vector<std::vector<RewardMessage>> bundles(n);
    for (int i = 0; i < n; ++i) {
      bundles[i] = outgoing_bundle(bufs[i], own[i], t);
      if (sent && g.degree(i) > 0) *sent += static_cast<std::int64_t>(bundles[i].size());
    }
    deliver(g, bundles, bufs, t, [&](int j, const RewardMessage& m) {
      auto key = std::make_tuple(j, m.origin, m.origin_time);
      CHECK(got.count(key) == 0);
      got[key] = t;
    });
  }
  return got;
}

}  // namespace

TEST_CASE("comex gate") {
  AgentEstimates est(2);
  est.obs_count = {1, 1};
  est.reward_sum = {10, 9};
  CHECK_FALSE(comex_gate(est, 0));
  CHECK(comex_gate(est, 1));
  AgentEstimates fresh(5);
  CHECK_FALSE(comex_gate(fresh, 0));
  CHECK(comex_gate(fresh, 3));
  CHECK(full_gate());
}

TEST_CASE("outgoing bundle windows") {
  SUBCASE("gamma 1 never relays") {
    MessageBuffer<RewardMessage> buf(3, 1);
    buf.receive({1, 1, 0, 0.5}, 1);
    auto b = buf.outgoing_bundle(RewardMessage{0, 2, 1, 1.0}, 2);
    REQUIRE(b.size() == 1);
    CHECK(b[0].origin == 0);
    CHECK(buf.held().size() == 1);  // age 1 = gamma: kept, not relayed
    CHECK(buf.outgoing_bundle(std::nullopt, 3).empty());
    CHECK(buf.held().empty());
  }
  SUBCASE("gamma 3 ages") {
    MessageBuffer<RewardMessage> buf(4, 3);
    CHECK(buf.receive({2, 5, 0, 0.0}, 7));  // arrives at age 2
    auto b = buf.outgoing_bundle(std::nullopt, 7);
    REQUIRE(b.size() == 1);  // age 2 <= gamma - 1
    CHECK(buf.forwarded({2, 5}));
    CHECK(buf.outgoing_bundle(std::nullopt, 7).empty());  // already forwarded
    CHECK(buf.held().size() == 1);
    CHECK(buf.outgoing_bundle(std::nullopt, 8).empty());  // age 3, kept
    CHECK(buf.held().size() == 1);
    CHECK(buf.outgoing_bundle(std::nullopt, 9).empty());  // age 4, purged
    CHECK(buf.held().empty());
  }
  SUBCASE("age 3 at gamma 3 is held but not relayed") {
    MessageBuffer<RewardMessage> buf(4, 3);
    CHECK(buf.receive({1, 2, 0, 0.0}, 5));
    CHECK(buf.outgoing_bundle(std::nullopt, 5).empty());
    CHECK_FALSE(buf.forwarded({1, 2}));
  }
  SUBCASE("duplicates and stale identities") {
    MessageBuffer<RewardMessage> buf(4, 2);
    CHECK(buf.receive({1, 3, 0, 0.0}, 3));
    CHECK_FALSE(buf.receive({1, 3, 0, 0.0}, 4));
    CHECK_THROWS_AS(buf.receive({1, 1, 0, 0.0}, 4), ProtocolError);  // age 3 > gamma
    CHECK_THROWS_AS(MessageBuffer<RewardMessage>(4, 0), ProtocolError);
  }
  SUBCASE("own message is never foreign") {
    MessageBuffer<RewardMessage> buf(3, 2);
    buf.outgoing_bundle(RewardMessage{0, 4, 1, 1.0}, 4);
    CHECK_FALSE(buf.receive({0, 4, 1, 1.0}, 5));
  }
}

TEST_CASE("delivery on a complete graph") {
  Topology g = Topology::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto got = relay(g, 1, 2, {{1, {RewardMessage{0, 1, 2, 1.0}}}});
  CHECK(got.size() == 3);
  for (int j = 1; j < 4; ++j) CHECK(got.at({j, 0, 1}) == 1);
}

TEST_CASE("one hop per step on a path") {
  Topology g = Topology::from_edges(3, {{0, 1}, {1, 2}});
  auto got = relay(g, 2, 4, {{2, {RewardMessage{0, 2, 0, 1.0}}}});
  CHECK(got.at({1, 0, 2}) == 2);
  CHECK(got.at({2, 0, 2}) == 3);
  CHECK(got.size() == 2);
}

TEST_CASE("messages stop at gamma hops") {
  Topology g = Topology::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto got = relay(g, 2, 8, {{1, {RewardMessage{0, 1, 0, 1.0}}}});
  CHECK(got.count({1, 0, 1}) == 1);
  CHECK(got.count({2, 0, 1}) == 1);
  CHECK(got.count({3, 0, 1}) == 0);
  CHECK(got.count({4, 0, 1}) == 0);
}

TEST_CASE("equal-length paths incorporate once") {
  Topology c4 = Topology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  std::int64_t sent = 0;
  auto got = relay(c4, 3, 6, {{1, {RewardMessage{0, 1, 0, 1.0}}}}, &sent);
  CHECK(got.size() == 3);
  CHECK(got.at({2, 0, 1}) == 2);
  // origin sends once, 1 and 3 forward once each; 2 is at distance 2 = gamma - 1 and forwards once
  CHECK(sent == 4);
}

TEST_CASE("reachability timing matches distances") {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    Topology g = generate_topology(ErdosRenyi{9, 0.3}, rng, true);
    const auto d = bfs_distances(g);
    const int gamma = 3;
    std::map<int, std::vector<RewardMessage>> births;
    for (int i = 0; i < 9; ++i) births[1 + i].push_back({i, 1 + i, 0, 0.0});
    auto got = relay(g, gamma, 20, births);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        if (i == j) continue;
        auto key = std::make_tuple(j, i, 1 + i);
        if (d[i][j] <= gamma) {
          REQUIRE(got.count(key) == 1);
          CHECK(got.at(key) == 1 + i + d[i][j] - 1);
        } else {
          CHECK(got.count(key) == 0);
        }
      }
  }
}

TEST_CASE("audit csv header") {
  std::ostringstream out;
  write_audit_csv(out, {{3, 1, 2, 4, 2, 0}});
  CHECK(out.str() == "step,origin,origin_time,arm,hop_count,receiver\n3,1,2,4,2,0\n");
}

TEST_CASE("consensus step") {
  SUBCASE("identity weights leave estimates alone") {
    Topology g = Topology::from_edges(3, {{0, 1}, {1, 2}});
    std::vector<ConsensusEstimates> cur(3, ConsensusEstimates(2));
    cur[0].count_hat = {3, 1};
    cur[0].sum_hat = {1.5, 0.2};
    cur[2].count_hat = {7, 2};
    std::vector<std::optional<EstimateSnapshot>> shared;
    for (int i = 0; i < 3; ++i) shared.push_back(make_snapshot(i, 1, cur[i], {0, 1}));
    auto next = consensus_step(g, cur, shared, {{0, 1}, {0, 1}, {0, 1}}, identity_weights(g));
    for (int i = 0; i < 3; ++i) {
      CHECK(next[i].count_hat == cur[i].count_hat);
      CHECK(next[i].sum_hat == cur[i].sum_hat);
    }
  }
  SUBCASE("two agents with equal weights") {
    Topology g = Topology::from_edges(2, {{0, 1}});
    std::vector<ConsensusEstimates> cur(2, ConsensusEstimates(1));
    cur[0].count_hat = {4};
    cur[0].sum_hat = {8};
    std::vector<std::optional<EstimateSnapshot>> shared{make_snapshot(0, 1, cur[0], {0}),
                                                        make_snapshot(1, 1, cur[1], {0})};
    auto next = consensus_step(g, cur, shared, {{0}, {0}}, metropolis_weights(g));
    CHECK(next[0].count_hat[0] == 2.0);
    CHECK(next[1].count_hat[0] == 2.0);
    CHECK(next[0].sum_hat[0] == 4.0);
    CHECK(next[1].sum_hat[0] == 4.0);
  }
  SUBCASE("Metropolis on star(5) conserves mass") {
    Topology star = Topology::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    ConsensusWeights w = metropolis_weights(star);
    check_row_stochastic(star, w);
    std::vector<ConsensusEstimates> cur(5, ConsensusEstimates(2));
    for (int i = 0; i < 5; ++i) {
      cur[i].count_hat = {1.0 + i, 3.0 * i + 1.0};
      cur[i].sum_hat = {0.5 * i, 2.0};
    }
    std::vector<std::optional<EstimateSnapshot>> shared;
    for (int i = 0; i < 5; ++i) shared.push_back(make_snapshot(i, 1, cur[i], {0, 1}));
    auto next = consensus_step(star, cur, shared, std::vector<std::vector<int>>(5, {0, 1}), w);
    for (int k = 0; k < 2; ++k) {
      double before = 0, after = 0, sb = 0, sa = 0;
      for (int i = 0; i < 5; ++i) {
        before += cur[i].count_hat[k];
        after += next[i].count_hat[k];
        sb += cur[i].sum_hat[k];
        sa += next[i].sum_hat[k];
      }
      CHECK(after == doctest::Approx(before));
      CHECK(sa == doctest::Approx(sb));
    }
  }
  SUBCASE("unflagged arms are untouched and silent neighbors count as self") {
    Topology g = Topology::from_edges(2, {{0, 1}});
    std::vector<ConsensusEstimates> cur(2, ConsensusEstimates(2));
    cur[0].count_hat = {4, 6};
    cur[0].sum_hat = {4, 6};
    cur[1].count_hat = {0, 2};
    std::vector<std::optional<EstimateSnapshot>> shared{std::nullopt, make_snapshot(1, 1, cur[1], {0})};
    auto next = consensus_step(g, cur, shared, {{1}, {0}}, metropolis_weights(g));
    CHECK(next[0].count_hat[0] == 4.0);  // not flagged by 0
    CHECK(next[0].count_hat[1] == 4.0);  // (6 + 2) / 2
    CHECK(next[1].count_hat[0] == 0.0);  // 0 shared nothing: 1 averages with itself
    CHECK(next[1].count_hat[1] == 2.0);
  }
  SUBCASE("bad weights are rejected") {
    Topology g = Topology::from_edges(2, {{0, 1}});
    ConsensusWeights w = metropolis_weights(g);
    w.self[0] = 0.9;
    CHECK_THROWS_AS(check_row_stochastic(g, w), ProtocolError);
    std::vector<ConsensusEstimates> cur(2, ConsensusEstimates(1));
    CHECK_THROWS_AS(consensus_step(g, cur, {std::nullopt, std::nullopt}, {{0}, {0}}, w), ProtocolError);
  }
}

TEST_CASE("suboptimal arm sets exclude the best arm") {
  CHECK(instantaneously_suboptimal_arms({1, 3, 2}) == std::vector<int>{0, 2});
  CHECK(instantaneously_suboptimal_arms({0, 0}) == std::vector<int>{1});
}

TEST_CASE("follower action") {
  Rng rng(3);
  LeaderLog log(10);
  log[4] = LeaderActionMessage{0, 4, 7, true};
  log[5] = LeaderActionMessage{0, 5, 2, false};

  auto early = follower_action({0, 2}, log, 2, 10, rng);
  CHECK(early.initiate);
  CHECK_FALSE(early.copied);
  CHECK(early.arm >= 0);
  CHECK(early.arm < 10);

  auto copy = follower_action({0, 1}, log, 5, 10, rng);
  CHECK(copy.arm == 7);
  CHECK(copy.initiate);
  CHECK(copy.copied);

  auto quiet = follower_action({0, 1}, log, 6, 10, rng);
  CHECK(quiet.arm == 2);
  CHECK_FALSE(quiet.initiate);

  CHECK_THROWS_AS(follower_action({0, 1}, log, 8, 10, rng), ProtocolError);

  // the random arm before the first copy is uniform
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 4000; ++i) ++hits[follower_action({0, 3}, log, 1, 4, rng).arm];
  for (int h : hits) CHECK(h == doctest::Approx(1000).epsilon(0.1));
}
