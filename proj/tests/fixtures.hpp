// Hand-built instances shared across the test suites. Every fixture is small
// enough to trace on paper; expected solver results are derived in the tests
// that use them.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "aep/instance.hpp"

namespace fixtures {

inline aep::Bounds b(aep::Units lower, aep::Units upper) { return {lower, upper}; }

// Prepares the 1-indexed per-node tables and a symmetric neighbor list.
inline aep::Instance blank(int n, std::vector<std::string> assets) {
  aep::Instance inst;
  inst.node_count = n;
  inst.assets = std::move(assets);
  inst.neighbors.assign(static_cast<size_t>(n) + 1, {});
  inst.send_spec.assign(static_cast<size_t>(n) + 1, {});
  inst.recv_spec.assign(static_cast<size_t>(n) + 1, {});
  inst.node_cap.assign(static_cast<size_t>(n) + 1, aep::Bounds{});
  return inst;
}

inline void link(aep::Instance& inst, aep::NodeId i, aep::NodeId j) {
  inst.neighbors[i].push_back(j);
  inst.neighbors[j].push_back(i);
  for (auto& row : inst.neighbors) std::sort(row.begin(), row.end());
}

// Three participants trading around one triangle: 1 offers X and wants Z,
// 2 offers Z and wants Y, 3 offers Y and wants X. Complete neighbor graph.
// Asset indexes after sorting: X=0, Y=1, Z=2.
inline aep::Instance three_cycle(aep::Units recv_cap = 1, aep::Units send_cap = 1,
                                 aep::Units node_cap = 1) {
  aep::Instance inst = blank(3, {"X", "Y", "Z"});
  link(inst, 1, 2);
  link(inst, 1, 3);
  link(inst, 2, 3);
  inst.send_spec[1][0] = b(0, send_cap);  // X
  inst.recv_spec[1][2] = b(0, recv_cap);  // Z
  inst.send_spec[2][2] = b(0, send_cap);  // Z
  inst.recv_spec[2][1] = b(0, recv_cap);  // Y
  inst.send_spec[3][1] = b(0, send_cap);  // Y
  inst.recv_spec[3][0] = b(0, recv_cap);  // X
  for (int i = 1; i <= 3; ++i) inst.node_cap[i] = b(0, node_cap);
  return inst;
}

// Same triangle with node 1 valuing its incoming Z at 5 (all else defaults
// to 1), so the lone cycle is worth 5 + 1 + 1 = 7 under the weighted
// objective.
inline aep::Instance three_cycle_weighted() {
  aep::Instance inst = three_cycle();
  inst.recv_value[{1, 2}] = 5.0;
  return inst;
}

// Triangle plus participant 4 offering W and wanting V, both unknown to the
// others; pruning must erase node 4 entirely. Asset indexes: V=0, W=1, X=2,
// Y=3, Z=4.
inline aep::Instance three_cycle_plus_isolated() {
  aep::Instance inst = blank(4, {"V", "W", "X", "Y", "Z"});
  link(inst, 1, 2);
  link(inst, 1, 3);
  link(inst, 2, 3);
  link(inst, 1, 4);
  link(inst, 2, 4);
  link(inst, 3, 4);
  inst.send_spec[1][2] = b(0, 1);  // X
  inst.recv_spec[1][4] = b(0, 1);  // Z
  inst.send_spec[2][4] = b(0, 1);  // Z
  inst.recv_spec[2][3] = b(0, 1);  // Y
  inst.send_spec[3][3] = b(0, 1);  // Y
  inst.recv_spec[3][2] = b(0, 1);  // X
  inst.send_spec[4][1] = b(0, 1);  // W
  inst.recv_spec[4][0] = b(0, 1);  // V
  for (int i = 1; i <= 4; ++i) inst.node_cap[i] = b(0, 1);
  return inst;
}

// Node 1 must receive exactly 100 ETH (lower = upper = 100) paid for in BTC;
// the two possible senders are capped at 60 and 40, so phase 1 has to split
// the demand across both. Asset indexes: BTC=0, ETH=1.
inline aep::Instance splitting() {
  aep::Instance inst = blank(3, {"BTC", "ETH"});
  link(inst, 1, 2);
  link(inst, 1, 3);
  inst.send_spec[1][0] = b(0, 100);
  inst.recv_spec[1][1] = b(100, 100);
  inst.node_cap[1] = b(0, 100);
  inst.send_spec[2][1] = b(0, 60);
  inst.recv_spec[2][0] = b(0, 60);
  inst.node_cap[2] = b(0, 60);
  inst.send_spec[3][1] = b(0, 40);
  inst.recv_spec[3][0] = b(0, 40);
  inst.node_cap[3] = b(0, 40);
  return inst;
}

// Node 1 participates in two unit swaps (P for W with node 2, Q for V with
// node 3) and its throughput cap of 2 admits both. Asset indexes: P=0, Q=1,
// V=2, W=3.
inline aep::Instance shared_node() {
  aep::Instance inst = blank(3, {"P", "Q", "V", "W"});
  link(inst, 1, 2);
  link(inst, 1, 3);
  inst.send_spec[1][0] = b(0, 1);  // P
  inst.send_spec[1][1] = b(0, 1);  // Q
  inst.recv_spec[1][3] = b(0, 1);  // W
  inst.recv_spec[1][2] = b(0, 1);  // V
  inst.node_cap[1] = b(0, 2);
  inst.send_spec[2][3] = b(0, 1);  // W
  inst.recv_spec[2][0] = b(0, 1);  // P
  inst.node_cap[2] = b(0, 1);
  inst.send_spec[3][2] = b(0, 1);  // V
  inst.recv_spec[3][1] = b(0, 1);  // Q
  inst.node_cap[3] = b(0, 1);
  return inst;
}

// Two-node swap where A doubles in transit and B halves; with unit caps the
// doubled link's receive side binds first. Asset indexes: A=0, B=1.
inline aep::Instance two_link_generalized() {
  aep::Instance inst = blank(2, {"A", "B"});
  link(inst, 1, 2);
  inst.send_spec[1][0] = b(0, 1);
  inst.recv_spec[1][1] = b(0, 1);
  inst.node_cap[1] = b(0, 1);
  inst.send_spec[2][1] = b(0, 1);
  inst.recv_spec[2][0] = b(0, 1);
  inst.node_cap[2] = b(0, 1);
  inst.multiplier[{1, 2, 0}] = 2.0;
  inst.multiplier[{2, 1, 1}] = 0.5;
  return inst;
}

// Four-node ring whose three multiplied links turn one unit sent by the root
// into 0.6 * 2.0 * 1.2 = 1.44 units received at node 4 (the closing link is
// at rate 1). Node 1 also offers V, which nobody wants, purely to give its
// throughput cap of 2 room under the send-capacity invariant. Asset indexes:
// V=0, W=1, X=2, Y=3, Z=4.
inline aep::Instance multiplier_ring(bool with_multipliers = true) {
  aep::Instance inst = blank(4, {"V", "W", "X", "Y", "Z"});
  link(inst, 1, 2);
  link(inst, 2, 3);
  link(inst, 3, 4);
  link(inst, 1, 4);
  inst.send_spec[1][1] = b(0, 1);  // W
  inst.send_spec[1][0] = b(0, 5);  // V, pruned
  inst.recv_spec[1][4] = b(0, 10);  // Z
  inst.node_cap[1] = b(0, 2);
  inst.send_spec[2][2] = b(0, 10);  // X
  inst.recv_spec[2][1] = b(0, 10);  // W
  inst.node_cap[2] = b(0, 10);
  inst.send_spec[3][3] = b(0, 10);  // Y
  inst.recv_spec[3][2] = b(0, 10);  // X
  inst.node_cap[3] = b(0, 10);
  inst.send_spec[4][4] = b(0, 10);  // Z
  inst.recv_spec[4][3] = b(0, 10);  // Y
  inst.node_cap[4] = b(0, 10);
  if (with_multipliers) {
    inst.multiplier[{1, 2, 1}] = 0.6;  // W
    inst.multiplier[{2, 3, 2}] = 2.0;  // X
    inst.multiplier[{3, 4, 3}] = 1.2;  // Y
  }
  return inst;
}

// Two disjoint pair swaps (1 and 2 trade P/Q, 3 and 4 trade V/W); useful for
// decomposition order checks. Asset indexes: P=0, Q=1, V=2, W=3.
inline aep::Instance two_pair_swaps() {
  aep::Instance inst = blank(4, {"P", "Q", "V", "W"});
  link(inst, 1, 2);
  link(inst, 3, 4);
  inst.send_spec[1][0] = b(0, 1);
  inst.recv_spec[1][1] = b(0, 1);
  inst.send_spec[2][1] = b(0, 1);
  inst.recv_spec[2][0] = b(0, 1);
  inst.send_spec[3][2] = b(0, 1);
  inst.recv_spec[3][3] = b(0, 1);
  inst.send_spec[4][3] = b(0, 1);
  inst.recv_spec[4][2] = b(0, 1);
  for (int i = 1; i <= 4; ++i) inst.node_cap[i] = b(0, 1);
  return inst;
}

// One participant with nobody to trade with; pruning removes everything.
inline aep::Instance single_node() {
  aep::Instance inst = blank(1, {"X", "Y"});
  inst.send_spec[1][0] = b(0, 1);
  inst.recv_spec[1][1] = b(0, 1);
  inst.node_cap[1] = b(0, 1);
  return inst;
}

// Two participants, two assets per side, all four cross pairs admissible:
// closed-form network size (12, 14). Asset indexes: A=0, B=1, C=2, D=3.
inline aep::Instance two_node_cross() {
  aep::Instance inst = blank(2, {"A", "B", "C", "D"});
  link(inst, 1, 2);
  inst.send_spec[1][0] = b(0, 1);
  inst.send_spec[1][1] = b(0, 1);
  inst.recv_spec[1][2] = b(0, 1);
  inst.recv_spec[1][3] = b(0, 1);
  inst.send_spec[2][2] = b(0, 1);
  inst.send_spec[2][3] = b(0, 1);
  inst.recv_spec[2][0] = b(0, 1);
  inst.recv_spec[2][1] = b(0, 1);
  inst.node_cap[1] = b(0, 2);
  inst.node_cap[2] = b(0, 2);
  return inst;
}

// Deterministic parameter schedule for property tests: varies size, density,
// and cap ranges with the trial index while staying inside the given limits.
inline aep::GeneratorParams random_params(std::uint64_t seed_base, int trial, int max_nodes,
                                          aep::Units cap_max) {
  aep::GeneratorParams p;
  p.node_count = 2 + trial % (max_nodes - 1);
  p.asset_count = 2 + trial % 5;
  p.edge_density = 0.3 + 0.7 * ((trial / 7) % 10) / 10.0;
  p.min_assets_per_side = 1;
  p.max_assets_per_side = 1 + trial % 2;
  p.recv_upper_min = 1;
  p.recv_upper_max = cap_max;
  p.send_upper_min = 1;
  p.send_upper_max = cap_max;
  p.node_cap_min = 1;
  p.node_cap_max = 2 * cap_max;
  p.lower_bound_probability = 0.0;
  p.seed = seed_base + static_cast<std::uint64_t>(trial) * 1000003ULL;
  return p;
}

}  // namespace fixtures
