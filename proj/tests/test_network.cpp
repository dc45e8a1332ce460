#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aep/instance.hpp"
#include "aep/network.hpp"
#include "fixtures.hpp"

using namespace aep;

namespace {

// Order-randomized reference pruning: applies one removal at a time in a
// shuffled order until nothing changes. Used to show the production fixpoint
// does not depend on sweep order.
struct NaivePrune {
  std::vector<char> alive;
  std::vector<std::set<AssetId>> send_set, recv_set;
};

NaivePrune naive_prune(const Instance& inst, std::mt19937_64& rng) {
  NaivePrune np;
  int n = inst.node_count;
  np.alive.assign(n + 1, 1);
  np.send_set.assign(n + 1, {});
  np.recv_set.assign(n + 1, {});
  for (NodeId i = 1; i <= n; ++i) {
    for (const auto& [a, b] : inst.send_spec[i]) np.send_set[i].insert(a);
    for (const auto& [a, b] : inst.recv_spec[i]) np.recv_set[i].insert(a);
  }

  // One candidate removal: (rule, node, asset). Rule 0 drops a send asset,
  // rule 1 drops a recv asset, rule 2 drops a whole participant.
  struct Move {
    int rule;
    NodeId node;
    AssetId asset;
  };
  while (true) {
    std::vector<Move> moves;
    for (NodeId i = 1; i <= n; ++i) {
      if (!np.alive[i]) continue;
      for (AssetId a : np.send_set[i]) {
        bool wanted = false;
        for (NodeId j : inst.neighbors[i])
          if (np.alive[j] && np.recv_set[j].count(a)) wanted = true;
        if (!wanted) moves.push_back({0, i, a});
      }
      for (AssetId a : np.recv_set[i]) {
        bool offered = false;
        for (NodeId j : inst.neighbors[i])
          if (np.alive[j] && np.send_set[j].count(a)) offered = true;
        if (!offered) moves.push_back({1, i, a});
      }
      if (np.send_set[i].empty() || np.recv_set[i].empty()) moves.push_back({2, i, kNoAsset});
    }
    if (moves.empty()) break;
    const Move& m = moves[rng() % moves.size()];
    if (m.rule == 0) np.send_set[m.node].erase(m.asset);
    if (m.rule == 1) np.recv_set[m.node].erase(m.asset);
    if (m.rule == 2) {
      np.alive[m.node] = 0;
      np.send_set[m.node].clear();
      np.recv_set[m.node].clear();
    }
  }
  return np;
}

int count_nodes_of(const ExchangeNetwork& net, NetNodeKind kind) {
  return static_cast<int>(std::count_if(net.nodes.begin(), net.nodes.end(),
                                        [&](const NetNode& n) { return n.kind == kind; }));
}

}  // namespace

TEST_SUITE("network.size") {
  TEST_CASE("triangle fixture counts") {
    CHECK(compute_size(fixtures::three_cycle()) == std::pair<std::int64_t, std::int64_t>{12, 12});
  }

  TEST_CASE("two-node cross instance counts") {
    // 2n + sum(|R|+|S|) = 4 + 8 = 12 nodes; n + sum(|R|+|S|) + links = 2 + 8 + 4 = 14 arcs.
    CHECK(compute_size(fixtures::two_node_cross()) ==
          std::pair<std::int64_t, std::int64_t>{12, 14});
  }

  TEST_CASE("empty send and receive sets leave only throughput structure") {
    Instance inst = fixtures::blank(3, {"X"});
    fixtures::link(inst, 1, 2);
    CHECK(compute_size(inst) == std::pair<std::int64_t, std::int64_t>{6, 3});
  }

  TEST_CASE("closed forms match the built network") {
    for (int trial = 0; trial < 60; ++trial) {
      Instance inst = generate_random(fixtures::random_params(2024, trial, 15, 5));
      ExchangeNetwork net = build_network(inst, /*prune=*/false);
      auto [nodes, arcs] = compute_size(inst);
      CHECK(static_cast<std::int64_t>(net.nodes.size()) == nodes);
      CHECK(static_cast<std::int64_t>(net.arcs.size()) == arcs);
    }
  }
}

TEST_SUITE("network.build") {
  TEST_CASE("participant halves keep their closed-form indexes") {
    ExchangeNetwork net = build_network(fixtures::three_cycle(), false);
    REQUIRE(net.nodes.size() == 12);
    for (int i = 0; i < 3; ++i) {
      CHECK(net.nodes[i].index == i + 1);
      CHECK(net.nodes[i].kind == NetNodeKind::ParticipantRecv);
      CHECK(net.nodes[i].owner == i + 1);
    }
    for (int i = 3; i < 6; ++i) {
      CHECK(net.nodes[i].index == i + 1);
      CHECK(net.nodes[i].kind == NetNodeKind::ParticipantSend);
      CHECK(net.nodes[i].owner == i - 2);
    }
    // Send-asset nodes come right after 2n, owners ascending: X at 7 (node 1),
    // Z at 8 (node 2), Y at 9 (node 3); then the receive-asset nodes.
    CHECK(net.nodes[6].kind == NetNodeKind::SendAsset);
    CHECK(net.nodes[6].owner == 1);
    CHECK(net.nodes[6].asset == 0);
    CHECK(net.nodes[7].owner == 2);
    CHECK(net.nodes[7].asset == 2);
    CHECK(net.nodes[8].owner == 3);
    CHECK(net.nodes[8].asset == 1);
    CHECK(net.nodes[9].kind == NetNodeKind::RecvAsset);
    CHECK(net.nodes[9].owner == 1);
    CHECK(net.nodes[9].asset == 2);
  }

  TEST_CASE("arc bounds are copied from the instance") {
    Instance inst = fixtures::three_cycle(/*recv*/ 5, /*send*/ 3, /*node*/ 2);
    // Raise lower bounds to prove they travel too.
    inst.recv_spec[1][2].lower = 2;
    ExchangeNetwork net = build_network(inst, false);
    int throughput = 0, send = 0, receive = 0, linking = 0;
    for (const NetArc& arc : net.arcs) {
      switch (arc.kind) {
        case NetArcKind::Throughput:
          ++throughput;
          CHECK(arc.upper == 2);
          break;
        case NetArcKind::Send:
          ++send;
          CHECK(arc.upper == 3);
          break;
        case NetArcKind::Receive:
          ++receive;
          CHECK(arc.upper == 5);
          if (arc.owner == 1) CHECK(arc.lower == 2);
          break;
        case NetArcKind::Linking:
          ++linking;
          CHECK(arc.lower == 0);
          CHECK(arc.upper == kUnbounded);
          break;
      }
      CHECK(arc.cost == 0.0);
    }
    CHECK(throughput == 3);
    CHECK(send == 3);
    CHECK(receive == 3);
    CHECK(linking == 3);
  }

  TEST_CASE("linking arcs exactly mirror admissibility") {
    for (int trial = 0; trial < 40; ++trial) {
      Instance inst = generate_random(fixtures::random_params(31, trial, 12, 4));
      ExchangeNetwork net = build_network(inst, false);
      std::set<LinkKey> from_arcs;
      for (const NetArc& arc : net.arcs)
        if (arc.kind == NetArcKind::Linking) {
          CHECK(admissible(inst, arc.owner, arc.peer, arc.asset));
          from_arcs.insert({arc.owner, arc.peer, arc.asset});
        }
      std::set<LinkKey> from_instance;
      for (NodeId i = 1; i <= inst.node_count; ++i)
        for (NodeId j : inst.neighbors[i])
          for (const auto& [a, b] : inst.send_spec[i])
            if (inst.in_recv(j, a)) from_instance.insert({i, j, a});
      CHECK(from_arcs == from_instance);
    }
  }

  TEST_CASE("multipliers ride on their linking arcs") {
    ExchangeNetwork net = build_network(fixtures::multiplier_ring(), true);
    std::map<LinkKey, double> rates;
    for (const NetArc& arc : net.arcs)
      if (arc.kind == NetArcKind::Linking) rates[{arc.owner, arc.peer, arc.asset}] = arc.multiplier;
    CHECK(rates.at({1, 2, 1}) == 0.6);
    CHECK(rates.at({2, 3, 2}) == 2.0);
    CHECK(rates.at({3, 4, 3}) == 1.2);
    CHECK(rates.at({4, 1, 4}) == 1.0);
  }

  TEST_CASE("degree law for asset nodes and participant halves") {
    for (int trial = 0; trial < 20; ++trial) {
      Instance inst = generate_random(fixtures::random_params(58, trial, 14, 5));
      ExchangeNetwork net = build_network(inst, false);
      std::map<int, int> indeg, outdeg;
      for (const NetArc& arc : net.arcs) {
        ++outdeg[arc.from];
        ++indeg[arc.to];
      }
      for (const NetNode& node : net.nodes) {
        if (node.kind == NetNodeKind::SendAsset) CHECK(indeg[node.index] == 1);
        if (node.kind == NetNodeKind::RecvAsset) CHECK(outdeg[node.index] == 1);
        if (node.kind == NetNodeKind::ParticipantRecv) CHECK(outdeg[node.index] == 1);
        if (node.kind == NetNodeKind::ParticipantSend) CHECK(indeg[node.index] == 1);
      }
    }
  }

  TEST_CASE("building an invalid instance is refused") {
    Instance inst = fixtures::three_cycle();
    inst.recv_spec[1][0] = fixtures::b(0, 1);
    CHECK_THROWS_AS(build_network(inst, false), std::invalid_argument);
  }
}

TEST_SUITE("network.prune") {
  TEST_CASE("isolated participant is fully logged and removed") {
    ExchangeNetwork net = build_network(fixtures::three_cycle_plus_isolated(), true);
    CHECK(net.nodes.size() == 12);
    CHECK(net.arcs.size() == 12);
    REQUIRE(net.prune_log.size() == 4);
    CHECK(net.prune_log[0].kind == NetNodeKind::SendAsset);
    CHECK(net.prune_log[0].owner == 4);
    CHECK(net.prune_log[0].asset == 1);  // W
    CHECK(net.prune_log[0].reason == "no admissible receiver");
    CHECK(net.prune_log[1].kind == NetNodeKind::RecvAsset);
    CHECK(net.prune_log[1].owner == 4);
    CHECK(net.prune_log[1].asset == 0);  // V
    CHECK(net.prune_log[1].reason == "no admissible sender");
    CHECK(net.prune_log[2].kind == NetNodeKind::ParticipantRecv);
    CHECK(net.prune_log[2].reason == "both sides empty");
    CHECK(net.prune_log[3].kind == NetNodeKind::ParticipantSend);
    CHECK(net.prune_log[3].reason == "both sides empty");
  }

  TEST_CASE("single participant prunes to an empty network") {
    ExchangeNetwork net = build_network(fixtures::single_node(), true);
    CHECK(net.nodes.empty());
    CHECK(net.arcs.empty());
    CHECK(net.prune_log.size() == 4);
  }

  TEST_CASE("a dead end cascades through the whole path") {
    // 1 - 2 - 3 path: C (from 3) has no receiver and D (wanted by 1) has no
    // sender; once those fall, every remaining hope falls with them.
    Instance inst = fixtures::blank(3, {"A", "B", "C", "D"});
    fixtures::link(inst, 1, 2);
    fixtures::link(inst, 2, 3);
    inst.send_spec[1][0] = fixtures::b(0, 1);  // A -> node 2
    inst.recv_spec[1][3] = fixtures::b(0, 1);  // D, unobtainable
    inst.send_spec[2][1] = fixtures::b(0, 1);  // B -> node 3
    inst.recv_spec[2][0] = fixtures::b(0, 1);  // A
    inst.send_spec[3][2] = fixtures::b(0, 1);  // C, unwanted
    inst.recv_spec[3][1] = fixtures::b(0, 1);  // B
    for (int i = 1; i <= 3; ++i) inst.node_cap[i] = fixtures::b(0, 1);
    REQUIRE(validate(inst).ok());

    PrunedSets ps = prune_admissible_sets(inst);
    CHECK_FALSE(ps.alive[1]);
    CHECK_FALSE(ps.alive[2]);
    CHECK_FALSE(ps.alive[3]);
    // Every one of the 2n + sum(|R|+|S|) = 12 network nodes is logged once.
    CHECK(ps.log.size() == 12);
    std::set<std::tuple<int, NodeId, AssetId>> seen;
    for (const PruneRecord& rec : ps.log)
      CHECK(seen.insert({static_cast<int>(rec.kind), rec.owner, rec.asset}).second);
  }

  TEST_CASE("pruning never fires on the self-sufficient triangle") {
    ExchangeNetwork net = build_network(fixtures::three_cycle(), true);
    CHECK(net.prune_log.empty());
    CHECK(net.nodes.size() == 12);
  }

  TEST_CASE("fixpoint is independent of removal order") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
      Instance inst = generate_random(fixtures::random_params(314, trial, 12, 4));
      PrunedSets ps = prune_admissible_sets(inst);
      for (int shuffle = 0; shuffle < 5; ++shuffle) {
        NaivePrune np = naive_prune(inst, rng);
        for (NodeId i = 1; i <= inst.node_count; ++i) {
          CHECK(static_cast<bool>(ps.alive[i]) == static_cast<bool>(np.alive[i]));
          CHECK(ps.send_set[i] == np.send_set[i]);
          CHECK(ps.recv_set[i] == np.recv_set[i]);
        }
      }
    }
  }

  TEST_CASE("pruned networks only contain surviving structure") {
    for (int trial = 0; trial < 25; ++trial) {
      Instance inst = generate_random(fixtures::random_params(271, trial, 12, 4));
      PrunedSets ps = prune_admissible_sets(inst);
      ExchangeNetwork net = build_network(inst, true);
      int expected_participants = 0;
      for (NodeId i = 1; i <= inst.node_count; ++i)
        if (ps.alive[i]) ++expected_participants;
      CHECK(count_nodes_of(net, NetNodeKind::ParticipantRecv) == expected_participants);
      CHECK(count_nodes_of(net, NetNodeKind::ParticipantSend) == expected_participants);
      for (const NetArc& arc : net.arcs)
        if (arc.kind == NetArcKind::Linking) {
          CHECK(ps.alive[arc.owner]);
          CHECK(ps.alive[arc.peer]);
          CHECK(ps.send_set[arc.owner].count(arc.asset) == 1);
          CHECK(ps.recv_set[arc.peer].count(arc.asset) == 1);
        }
    }
  }
}

TEST_SUITE("network.export") {
  TEST_CASE("triangle DIMACS bytes are pinned") {
    ExchangeNetwork net = build_network(fixtures::three_cycle(), true);
    const std::string expected =
        "p min 12 12\n"
        "a 1 4 0 1 0\n"
        "a 2 5 0 1 0\n"
        "a 3 6 0 1 0\n"
        "a 4 7 0 1 0\n"
        "a 5 8 0 1 0\n"
        "a 6 9 0 1 0\n"
        "a 10 1 0 1 0\n"
        "a 11 2 0 1 0\n"
        "a 12 3 0 1 0\n"
        "a 7 12 0 3 -1\n"
        "a 8 10 0 3 -1\n"
        "a 9 11 0 3 -1\n";
    CHECK(export_dimacs(net, Objective::Unit) == expected);
  }

  TEST_CASE("weighted export moves the reward to the receive arcs") {
    ExchangeNetwork unit_net = build_network(fixtures::three_cycle_weighted(), true);
    std::string unit_text = export_dimacs(unit_net, Objective::Unit);
    std::string weighted = export_dimacs(unit_net, Objective::Weighted);
    CHECK(unit_text != weighted);
    CHECK(weighted.find("a 10 1 0 1 -5\n") != std::string::npos);
    CHECK(weighted.find("a 11 2 0 1 -1\n") != std::string::npos);
    CHECK(weighted.find("a 7 12 0 3 0\n") != std::string::npos);

    // Line count and arc endpoints agree; only cost columns change.
    auto strip_costs = [](std::string text) {
      std::string out;
      size_t start = 0;
      while (start < text.size()) {
        size_t end = text.find('\n', start);
        std::string line = text.substr(start, end - start);
        out += line.substr(0, line.rfind(' '));
        out += '\n';
        start = end + 1;
      }
      return out;
    };
    CHECK(strip_costs(unit_text) == strip_costs(weighted));
  }

  TEST_CASE("lower bounds block the export") {
    ExchangeNetwork net = build_network(fixtures::splitting(), true);
    CHECK_THROWS_WITH_AS(export_dimacs(net, Objective::Unit),
                         "export requires zero lower bounds; solve the lower-bounded "
                         "instance instead",
                         std::invalid_argument);
  }

  TEST_CASE("edge dump labels every arc with its halves") {
    Instance inst = fixtures::three_cycle();
    ExchangeNetwork net = build_network(inst, true);
    std::string dump = dump_edge_list(net, inst);
    CHECK(dump.find("1[R] -> 1[S]  [0, 1]") != std::string::npos);
    CHECK(dump.find("1[S] -> (X,1[S])  [0, 1]") != std::string::npos);
    CHECK(dump.find("(Z,1[R]) -> 1[R]  [0, 1]") != std::string::npos);
    CHECK(dump.find("(X,1[S]) -> (X,3[R])  [0, inf]") != std::string::npos);
  }
}
