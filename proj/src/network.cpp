#include "aep/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace aep {

namespace {

bool has_receiver(const Instance& inst, const PrunedSets& ps, NodeId i, AssetId a) {
  for (NodeId j : inst.neighbors[i])
    if (ps.alive[j] && ps.recv_set[j].count(a)) return true;
  return false;
}

bool has_sender(const Instance& inst, const PrunedSets& ps, NodeId j, AssetId a) {
  for (NodeId i : inst.neighbors[j])
    if (ps.alive[i] && ps.send_set[i].count(a)) return true;
  return false;
}

}  // namespace

PrunedSets prune_admissible_sets(const Instance& inst) {
  const int n = inst.node_count;
  PrunedSets ps;
  ps.alive.assign(n + 1, 1);
  ps.send_set.assign(n + 1, {});
  ps.recv_set.assign(n + 1, {});
  for (NodeId i = 1; i <= n; ++i) {
    for (const auto& [a, b] : inst.send_spec[i]) ps.send_set[i].insert(a);
    for (const auto& [a, b] : inst.recv_spec[i]) ps.recv_set[i].insert(a);
  }

  // Sweep until stable. The final sets are order-independent; sweeping in
  // node order just fixes the log order.
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId i = 1; i <= n; ++i) {
      if (!ps.alive[i]) continue;
      for (auto it = ps.send_set[i].begin(); it != ps.send_set[i].end();) {
        if (!has_receiver(inst, ps, i, *it)) {
          ps.log.push_back({NetNodeKind::SendAsset, i, *it, "no admissible receiver"});
          it = ps.send_set[i].erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    for (NodeId j = 1; j <= n; ++j) {
      if (!ps.alive[j]) continue;
      for (auto it = ps.recv_set[j].begin(); it != ps.recv_set[j].end();) {
        if (!has_sender(inst, ps, j, *it)) {
          ps.log.push_back({NetNodeKind::RecvAsset, j, *it, "no admissible sender"});
          it = ps.recv_set[j].erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    for (NodeId i = 1; i <= n; ++i) {
      if (!ps.alive[i]) continue;
      const bool send_empty = ps.send_set[i].empty();
      const bool recv_empty = ps.recv_set[i].empty();
      if (!send_empty && !recv_empty) continue;
      for (AssetId a : ps.send_set[i])
        ps.log.push_back({NetNodeKind::SendAsset, i, a, "participant removed"});
      for (AssetId a : ps.recv_set[i])
        ps.log.push_back({NetNodeKind::RecvAsset, i, a, "participant removed"});
      ps.send_set[i].clear();
      ps.recv_set[i].clear();
      const std::string why = send_empty && recv_empty ? "both sides empty"
                              : send_empty            ? "send side empty"
                                                      : "receive side empty";
      ps.log.push_back({NetNodeKind::ParticipantRecv, i, kNoAsset, why});
      ps.log.push_back({NetNodeKind::ParticipantSend, i, kNoAsset, why});
      ps.alive[i] = 0;
      changed = true;
    }
  }
  return ps;
}

ExchangeNetwork build_network(const Instance& inst, bool prune) {
  ValidationResult vr = validate(inst);
  if (!vr.ok()) throw std::invalid_argument("instance invalid: " + vr.violations.front());

  const int n = inst.node_count;
  PrunedSets ps;
  if (prune) {
    ps = prune_admissible_sets(inst);
  } else {
    ps.alive.assign(n + 1, 1);
    ps.send_set.assign(n + 1, {});
    ps.recv_set.assign(n + 1, {});
    for (NodeId i = 1; i <= n; ++i) {
      for (const auto& [a, b] : inst.send_spec[i]) ps.send_set[i].insert(a);
      for (const auto& [a, b] : inst.recv_spec[i]) ps.recv_set[i].insert(a);
    }
  }

  ExchangeNetwork net;
  net.participant_count = n;
  net.prune_log = ps.log;

  // Participant halves first (receive half i, send half i+n), then one node
  // per surviving offered asset, then one per surviving desired asset.
  for (NodeId i = 1; i <= n; ++i)
    if (ps.alive[i]) net.nodes.push_back({i, NetNodeKind::ParticipantRecv, i, kNoAsset});
  for (NodeId i = 1; i <= n; ++i)
    if (ps.alive[i]) net.nodes.push_back({i + n, NetNodeKind::ParticipantSend, i, kNoAsset});

  std::map<std::pair<NodeId, AssetId>, int> send_index, recv_index;
  int next = 2 * n;
  for (NodeId i = 1; i <= n; ++i)
    for (AssetId a : ps.send_set[i]) {
      net.nodes.push_back({++next, NetNodeKind::SendAsset, i, a});
      send_index[{i, a}] = next;
    }
  for (NodeId j = 1; j <= n; ++j)
    for (AssetId a : ps.recv_set[j]) {
      net.nodes.push_back({++next, NetNodeKind::RecvAsset, j, a});
      recv_index[{j, a}] = next;
    }

  for (NodeId i = 1; i <= n; ++i) {
    if (!ps.alive[i]) continue;
    const Bounds& cap = inst.node_cap[i];
    net.arcs.push_back({i, i + n, cap.lower, cap.upper, 0.0, 1.0, NetArcKind::Throughput, i,
                        kNoNode, kNoAsset, 1.0});
  }
  for (NodeId i = 1; i <= n; ++i)
    for (AssetId a : ps.send_set[i]) {
      const Bounds& b = inst.send_spec[i].at(a);
      net.arcs.push_back({i + n, send_index.at({i, a}), b.lower, b.upper, 0.0, 1.0,
                          NetArcKind::Send, i, kNoNode, a, 1.0});
    }
  for (NodeId j = 1; j <= n; ++j)
    for (AssetId a : ps.recv_set[j]) {
      const Bounds& b = inst.recv_spec[j].at(a);
      net.arcs.push_back({recv_index.at({j, a}), j, b.lower, b.upper, 0.0, 1.0,
                          NetArcKind::Receive, j, kNoNode, a, inst.recv_value_or(j, a, 1.0)});
    }
  for (NodeId i = 1; i <= n; ++i)
    for (AssetId a : ps.send_set[i])
      for (NodeId j : inst.neighbors[i]) {
        if (!ps.alive[j] || !ps.recv_set[j].count(a)) continue;
        net.arcs.push_back({send_index.at({i, a}), recv_index.at({j, a}), 0, kUnbounded, 0.0,
                            inst.multiplier_for(i, j, a), NetArcKind::Linking, i, j, a, 1.0});
      }
  return net;
}

std::pair<std::int64_t, std::int64_t> compute_size(const Instance& inst) {
  const int n = inst.node_count;
  std::int64_t nodes = 2LL * n;
  std::int64_t arcs = n;
  for (NodeId i = 1; i <= n; ++i) {
    nodes += static_cast<std::int64_t>(inst.send_spec[i].size() + inst.recv_spec[i].size());
    arcs += static_cast<std::int64_t>(inst.send_spec[i].size() + inst.recv_spec[i].size());
    for (const auto& [a, b] : inst.send_spec[i])
      for (NodeId j : inst.neighbors[i])
        if (inst.in_recv(j, a)) ++arcs;
  }
  return {nodes, arcs};
}

namespace {

std::string fmt_cost(double c) {
  if (std::floor(c) == c && std::abs(c) < 9.0e15)
    return std::to_string(static_cast<std::int64_t>(c));
  std::ostringstream out;
  out << c;
  return out.str();
}

}  // namespace

std::string export_dimacs(const ExchangeNetwork& net, Objective objective) {
  for (const NetArc& arc : net.arcs)
    if (arc.lower > 0)
      throw std::invalid_argument(
          "export requires zero lower bounds; solve the lower-bounded instance instead");

  std::map<int, int> dense;  // pruning leaves holes in participant indexes
  for (const NetNode& node : net.nodes) dense[node.index] = static_cast<int>(dense.size()) + 1;

  Units surrogate = 0;
  for (const NetArc& arc : net.arcs)
    if (arc.kind == NetArcKind::Receive) surrogate += arc.upper;

  std::ostringstream out;
  out << "p min " << net.nodes.size() << ' ' << net.arcs.size() << '\n';
  for (const NetArc& arc : net.arcs) {
    Units cap = arc.upper == kUnbounded ? surrogate : arc.upper;
    double cost = 0.0;
    if (objective == Objective::Unit && arc.kind == NetArcKind::Linking) cost = -1.0;
    if (objective == Objective::Weighted && arc.kind == NetArcKind::Receive)
      cost = -arc.recv_value;
    out << "a " << dense.at(arc.from) << ' ' << dense.at(arc.to) << " 0 " << cap << ' '
        << fmt_cost(cost) << '\n';
  }
  return out.str();
}

std::string dump_edge_list(const ExchangeNetwork& net, const Instance& inst) {
  const int n = net.participant_count;
  auto label = [&](int index) -> std::string {
    if (index <= n) return std::to_string(index) + "[R]";
    if (index <= 2 * n) return std::to_string(index - n) + "[S]";
    for (const NetNode& node : net.nodes)
      if (node.index == index) {
        std::string half = node.kind == NetNodeKind::SendAsset ? "[S]" : "[R]";
        return "(" + inst.asset_name(node.asset) + "," + std::to_string(node.owner) + half +
               ")";
      }
    return "?" + std::to_string(index);
  };

  std::ostringstream out;
  for (const NetArc& arc : net.arcs) {
    out << label(arc.from) << " -> " << label(arc.to) << "  [" << arc.lower << ", ";
    if (arc.upper == kUnbounded)
      out << "inf";
    else
      out << arc.upper;
    out << "]";
    if (arc.kind == NetArcKind::Receive && arc.recv_value != 1.0)
      out << "  value=" << arc.recv_value;
    if (arc.kind == NetArcKind::Linking && arc.multiplier != 1.0)
      out << "  mult=" << arc.multiplier;
    out << '\n';
  }
  return out.str();
}

}  // namespace aep
