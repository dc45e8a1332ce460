#include "aep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aep {

namespace {

constexpr double kEps = 1e-9;

std::string link_name(const Instance& inst, NodeId i, NodeId j, AssetId a) {
  return std::to_string(i) + "->" + std::to_string(j) + " asset " + inst.asset_name(a);
}

std::string num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

bool VerificationReport::pass() const {
  for (const FamilyResult& f : families)
    if (!f.pass) return false;
  return true;
}

const FamilyResult* VerificationReport::family(const std::string& name) const {
  for (const FamilyResult& f : families)
    if (f.family == name) return &f;
  return nullptr;
}

VerificationReport verify_solution(const Instance& inst, const Solution& sol,
                                   VerifyMode mode) {
  const bool gen = mode == VerifyMode::Generalized;
  const double tol = gen ? kEps : 0.0;

  VerificationReport report;
  auto family = [&report](const std::string& name) -> FamilyResult& {
    report.families.push_back({name, true, ""});
    return report.families.back();
  };
  auto flag = [](FamilyResult& f, const std::string& witness) {
    if (f.pass) {
      f.pass = false;
      f.witness = witness;
    }
  };

  // Admissibility: every aggregate link must be a neighbor transfer of an
  // offered asset to a participant that wants it, with nonnegative quantity.
  {
    FamilyResult& f = family("admissibility");
    for (const auto& [key, qty] : sol.aggregate) {
      auto [i, j, a] = key;
      if (!inst.valid_node(i) || !inst.valid_node(j) || a < 0 ||
          a >= static_cast<AssetId>(inst.assets.size())) {
        flag(f, "link references unknown node or asset");
        continue;
      }
      if (qty < -tol) flag(f, "negative quantity on " + link_name(inst, i, j, a));
      if (qty > tol && !admissible(inst, i, j, a))
        flag(f, "inadmissible link " + link_name(inst, i, j, a));
    }
  }

  // Tally sends, receipts and node throughput once; the cap and balance
  // families all read from these tables.
  std::map<std::pair<NodeId, AssetId>, double> sent, received;
  std::map<NodeId, double> out_total, in_total;
  for (const auto& [key, qty] : sol.aggregate) {
    auto [i, j, a] = key;
    if (!inst.valid_node(i) || !inst.valid_node(j)) continue;
    double got = qty * (gen ? inst.multiplier_for(i, j, a) : 1.0);
    sent[{i, a}] += qty;
    received[{j, a}] += got;
    out_total[i] += qty;
    in_total[j] += got;
  }

  {
    FamilyResult& f = family("recv_caps");
    for (const auto& [key, total] : received) {
      auto [j, a] = key;
      auto it = inst.recv_spec[j].find(a);
      double cap = it == inst.recv_spec[j].end() ? 0.0 : static_cast<double>(it->second.upper);
      if (total > cap + tol)
        flag(f, "receive cap exceeded at node " + std::to_string(j) + ", asset " +
                    inst.asset_name(a) + ": " + num(total) + " > " + num(cap));
    }
  }
  {
    FamilyResult& f = family("send_caps");
    for (const auto& [key, total] : sent) {
      auto [i, a] = key;
      auto it = inst.send_spec[i].find(a);
      double cap = it == inst.send_spec[i].end() ? 0.0 : static_cast<double>(it->second.upper);
      if (total > cap + tol)
        flag(f, "send cap exceeded at node " + std::to_string(i) + ", asset " +
                    inst.asset_name(a) + ": " + num(total) + " > " + num(cap));
    }
  }
  {
    FamilyResult& f = family("node_caps");
    for (NodeId i = 1; i <= inst.node_count; ++i) {
      auto it = in_total.find(i);
      if (it == in_total.end()) continue;
      double cap = static_cast<double>(inst.node_cap[i].upper);
      if (it->second > cap + tol)
        flag(f, "node cap exceeded at node " + std::to_string(i) + ": " + num(it->second) +
                    " > " + num(cap));
    }
  }

  // Balance. Basic flows conserve units at every node. With multipliers the
  // root of each cycle legitimately receives gain times what it sent, so the
  // check moves to per-cycle chaining instead of per-node totals.
  {
    FamilyResult& f = family("balance");
    if (!gen) {
      for (NodeId i = 1; i <= inst.node_count; ++i) {
        double out = out_total.count(i) ? out_total[i] : 0.0;
        double in = in_total.count(i) ? in_total[i] : 0.0;
        if (out != in)
          flag(f, "node balance broken at node " + std::to_string(i) + ": sent " + num(out) +
                      ", received " + num(in));
      }
    } else {
      int index = 0;
      for (const ExchangeCycle& cycle : sol.cycles) {
        ++index;
        double carried = cycle.links.empty() ? 0.0 : cycle.links.front().qty;
        for (const CycleLink& link : cycle.links) {
          if (std::abs(link.qty - carried) > kEps) {
            flag(f, "cycle " + std::to_string(index) + " breaks chaining at " +
                        link_name(inst, link.from, link.to, link.asset));
            break;
          }
          carried = link.qty * inst.multiplier_for(link.from, link.to, link.asset);
        }
        report.notes.push_back("cycle " + std::to_string(index) + " gain " + num(cycle.gain));
      }
    }
  }

  // Integer bounds and unit multipliers can only produce integer flows.
  if (!gen) {
    FamilyResult& f = family("integrality");
    for (const auto& [key, qty] : sol.aggregate) {
      auto [i, j, a] = key;
      if (std::floor(qty) != qty)
        flag(f, "non-integer quantity on " + link_name(inst, i, j, a));
    }
    for (const ExchangeCycle& cycle : sol.cycles)
      for (const CycleLink& link : cycle.links)
        if (std::floor(link.qty) != link.qty)
          flag(f, "non-integer cycle quantity on " +
                      link_name(inst, link.from, link.to, link.asset));
  }

  // Cycle structure: each recorded cycle starts and ends at its root with
  // consecutive links, and the cycles re-aggregate to the flow table.
  {
    FamilyResult& f = family("cycles");
    int index = 0;
    std::map<LinkKey, double> rebuilt;
    for (const ExchangeCycle& cycle : sol.cycles) {
      ++index;
      if (cycle.links.empty()) {
        flag(f, "cycle " + std::to_string(index) + " has no links");
        continue;
      }
      if (cycle.links.front().from != cycle.root)
        flag(f, "cycle " + std::to_string(index) + " does not start at its root");
      if (cycle.links.back().to != cycle.root)
        flag(f, "cycle " + std::to_string(index) + " does not return to its root");
      for (size_t t = 0; t + 1 < cycle.links.size(); ++t)
        if (cycle.links[t].to != cycle.links[t + 1].from)
          flag(f, "cycle " + std::to_string(index) + " has disconnected links");
      double expected_gain = 1.0;
      for (const CycleLink& link : cycle.links) {
        if (link.qty <= tol)
          flag(f, "cycle " + std::to_string(index) + " carries a non-positive quantity");
        rebuilt[{link.from, link.to, link.asset}] += link.qty;
        if (gen) expected_gain *= inst.multiplier_for(link.from, link.to, link.asset);
      }
      if (gen && std::abs(expected_gain - cycle.gain) > kEps)
        flag(f, "cycle " + std::to_string(index) + " reports gain " + num(cycle.gain) +
                    ", links give " + num(expected_gain));
    }
    auto keys_match = [&](const std::map<LinkKey, double>& a,
                          const std::map<LinkKey, double>& b) {
      for (const auto& [key, qty] : a) {
        auto it = b.find(key);
        double other = it == b.end() ? 0.0 : it->second;
        if (gen ? std::abs(qty - other) > kEps : qty != other) return false;
      }
      return true;
    };
    if (!keys_match(rebuilt, sol.aggregate) || !keys_match(sol.aggregate, rebuilt))
      flag(f, "cycles do not re-aggregate to the flow table");
  }

  // Objectives recomputed from the aggregate. Unit totals are exact in basic
  // mode; weighted totals always carry a float tolerance.
  {
    FamilyResult& f = family("objective");
    double units = 0.0, weighted = 0.0;
    for (const auto& [key, got] : received) {
      units += got;
      weighted += got * inst.recv_value_or(key.first, key.second, 1.0);
    }
    bool units_ok = gen ? std::abs(units - sol.objective_units) <= kEps
                        : units == sol.objective_units;
    if (!units_ok)
      flag(f, "objective_units mismatch: reported " + num(sol.objective_units) +
                  ", recomputed " + num(units));
    if (sol.objective_weighted && std::abs(weighted - *sol.objective_weighted) > kEps)
      flag(f, "objective_weighted mismatch: reported " + num(*sol.objective_weighted) +
                  ", recomputed " + num(weighted));
    if (!sol.objective_weighted && !inst.recv_value.empty())
      flag(f, "objective_weighted missing for a valued instance");
  }

  // Lower-bound reporting is soft but must be truthful and complete.
  {
    FamilyResult& f = family("lower_bounds");
    struct Expected {
      Units required;
      double achieved;
    };
    std::map<std::tuple<NodeId, AssetId, bool>, Expected> expected;
    for (NodeId i = 1; i <= inst.node_count; ++i) {
      for (const auto& [a, b] : inst.recv_spec[i])
        if (b.lower > 0) {
          auto it = received.find({i, a});
          expected[{i, a, true}] = {b.lower, it == received.end() ? 0.0 : it->second};
        }
      for (const auto& [a, b] : inst.send_spec[i])
        if (b.lower > 0) {
          auto it = sent.find({i, a});
          expected[{i, a, false}] = {b.lower, it == sent.end() ? 0.0 : it->second};
        }
      if (inst.node_cap[i].lower > 0) {
        auto it = in_total.find(i);
        expected[{i, kNoAsset, true}] = {inst.node_cap[i].lower,
                                         it == in_total.end() ? 0.0 : it->second};
      }
    }
    std::set<std::tuple<NodeId, AssetId, bool>> seen;
    for (const LowerBoundEntry& e : sol.lb_report) {
      auto key = std::make_tuple(e.node, e.asset, e.recv_side);
      auto it = expected.find(key);
      if (it == expected.end()) {
        flag(f, "unexpected lower bound entry for node " + std::to_string(e.node));
        continue;
      }
      if (!seen.insert(key).second)
        flag(f, "duplicate lower bound entry for node " + std::to_string(e.node));
      if (e.required != it->second.required ||
          std::abs(e.achieved - it->second.achieved) > kEps)
        flag(f, "lower bound entry for node " + std::to_string(e.node) +
                    " disagrees with the flow table");
      bool met = it->second.achieved >= static_cast<double>(it->second.required) - tol;
      if (e.met != met)
        flag(f, "lower bound entry for node " + std::to_string(e.node) + " marked " +
                    (e.met ? "met" : "unmet") + " but achieved " + num(it->second.achieved) +
                    " of " + std::to_string(it->second.required));
    }
    if (seen.size() != expected.size()) flag(f, "missing lower bound entries");
  }

  return report;
}

// ---------------------------------------------------------------------------
// Exact optimum via negative-cycle canceling

namespace {

struct ResidualEdge {
  int to = 0;
  Units cap = 0;     // remaining residual capacity
  double cost = 0.0;
  int pair = 0;      // index of the reverse edge
  int arc = -1;      // originating network arc, -1 on reverse edges
};

}  // namespace

ExactResult solve_exact(const Instance& inst, const ExchangeNetwork& net,
                        Objective objective) {
  for (const NetArc& arc : net.arcs)
    if (arc.lower > 0)
      throw std::invalid_argument("exact solve requires zero lower bounds");

  std::map<int, int> dense;
  for (const NetNode& node : net.nodes) dense[node.index] = static_cast<int>(dense.size());
  const int v_count = static_cast<int>(net.nodes.size());

  Units surrogate = 0;
  for (NodeId j = 1; j <= inst.node_count; ++j)
    for (const auto& [a, b] : inst.recv_spec[j]) surrogate += b.upper;

  // Capacities come from the instance tables, not the arc records, so the
  // optimum stays meaningful even if a caller edits the network by hand.
  auto capacity_of = [&](const NetArc& arc) -> Units {
    switch (arc.kind) {
      case NetArcKind::Throughput:
        return inst.node_cap[arc.owner].upper;
      case NetArcKind::Send:
        return inst.send_spec[arc.owner].at(arc.asset).upper;
      case NetArcKind::Receive:
        return inst.recv_spec[arc.owner].at(arc.asset).upper;
      case NetArcKind::Linking:
        return surrogate;
    }
    return 0;
  };
  auto cost_of = [&](const NetArc& arc) -> double {
    if (objective == Objective::Unit)
      return arc.kind == NetArcKind::Linking ? -1.0 : 0.0;
    if (arc.kind == NetArcKind::Receive)
      return -inst.recv_value_or(arc.owner, arc.asset, 1.0);
    return 0.0;
  };

  std::vector<ResidualEdge> edges;
  std::vector<std::vector<int>> adjacency(v_count);
  for (size_t k = 0; k < net.arcs.size(); ++k) {
    const NetArc& arc = net.arcs[k];
    int u = dense.at(arc.from), v = dense.at(arc.to);
    int fwd = static_cast<int>(edges.size());
    edges.push_back({v, capacity_of(arc), cost_of(arc), fwd + 1, static_cast<int>(k)});
    edges.push_back({u, 0, -cost_of(arc), fwd, -1});
    adjacency[u].push_back(fwd);
    adjacency[v].push_back(fwd + 1);
  }

  std::vector<double> dist(v_count);
  std::vector<int> pred_edge(v_count);

  // Bellman-Ford from a virtual source at distance 0 everywhere; an update in
  // the final pass betrays a negative residual cycle.
  auto find_negative_cycle = [&]() -> std::vector<int> {
    std::fill(dist.begin(), dist.end(), 0.0);
    std::fill(pred_edge.begin(), pred_edge.end(), -1);
    int touched = -1;
    for (int pass = 0; pass < v_count; ++pass) {
      touched = -1;
      for (int u = 0; u < v_count; ++u)
        for (int e : adjacency[u]) {
          if (edges[e].cap <= 0 || edges[e].to == u) continue;
          if (dist[u] + edges[e].cost < dist[edges[e].to] - 1e-12) {
            dist[edges[e].to] = dist[u] + edges[e].cost;
            pred_edge[edges[e].to] = e;
            touched = edges[e].to;
          }
        }
      if (touched < 0) return {};
    }
    if (touched < 0) return {};  // empty network: the pass loop never ran

    // Walk predecessors v_count times to reach a node that is certainly on a
    // cycle, then collect the cycle's edges.
    std::vector<int> owner_of(static_cast<size_t>(edges.size()), -1);
    for (int u = 0; u < v_count; ++u)
      for (int e : adjacency[u]) owner_of[static_cast<size_t>(e)] = u;

    int at = touched;
    for (int hop = 0; hop < v_count; ++hop) at = owner_of[static_cast<size_t>(pred_edge[at])];
    std::vector<int> cycle;
    int walk = at;
    do {
      int e = pred_edge[walk];
      cycle.push_back(e);
      walk = owner_of[static_cast<size_t>(e)];
    } while (walk != at);
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
  };

  const std::int64_t cancel_guard =
      10 * (surrogate + inst.node_count + static_cast<std::int64_t>(net.arcs.size())) + 1000;
  std::int64_t cancels = 0;
  while (true) {
    std::vector<int> cycle = find_negative_cycle();
    if (cycle.empty()) break;
    if (++cancels > cancel_guard)
      throw std::logic_error("negative-cycle canceling failed to terminate");
    Units bottleneck = std::numeric_limits<Units>::max();
    for (int e : cycle) bottleneck = std::min(bottleneck, edges[e].cap);
    for (int e : cycle) {
      edges[e].cap -= bottleneck;
      edges[edges[e].pair].cap += bottleneck;
    }
  }

  ExactResult result;
  for (size_t e = 0; e < edges.size(); e += 2) {
    int arc_index = edges[e].arc;
    const NetArc& arc = net.arcs[static_cast<size_t>(arc_index)];
    Units flow = edges[e + 1].cap;  // reverse capacity equals pushed flow
    if (flow <= 0) continue;
    if (arc.kind == NetArcKind::Linking) {
      result.flow[{arc.owner, arc.peer, arc.asset}] = flow;
      if (objective == Objective::Unit) result.value += static_cast<double>(flow);
    }
    if (objective == Objective::Weighted && arc.kind == NetArcKind::Receive)
      result.value += static_cast<double>(flow) * inst.recv_value_or(arc.owner, arc.asset, 1.0);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Exhaustive optimum for very small instances

namespace {

struct TinySearch {
  const Instance& inst;
  std::vector<LinkKey> links;                       // admissible triples
  std::vector<std::vector<size_t>> links_of_node;   // grouped by sender
  std::map<std::pair<NodeId, AssetId>, Units> recv_used;
  std::map<NodeId, Units> in_total, out_total;
  std::vector<Units> qty;
  Units best = 0;

  explicit TinySearch(const Instance& i) : inst(i) {}

  bool recv_fits(NodeId j, AssetId a, Units add) const {
    auto spec = inst.recv_spec[j].find(a);
    if (spec == inst.recv_spec[j].end()) return false;
    auto used = recv_used.find({j, a});
    Units have = used == recv_used.end() ? 0 : used->second;
    if (have + add > spec->second.upper) return false;
    auto in = in_total.find(j);
    Units node_have = in == in_total.end() ? 0 : in->second;
    return node_have + add <= inst.node_cap[j].upper;
  }

  // Distribute node i's sends one link at a time, then move to node i+1.
  void fill_links(NodeId i, size_t slot, std::map<AssetId, Units>& asset_used,
                  Units used_total) {
    if (slot == links_of_node[i].size()) {
      descend(i + 1);
      return;
    }
    size_t link = links_of_node[i][slot];
    auto [from, to, a] = links[link];
    Units send_left = inst.send_spec[i].at(a).upper - asset_used[a];
    Units node_left = inst.node_cap[i].upper - used_total;
    Units max_q = std::min(send_left, node_left);
    for (Units q = 0; q <= max_q; ++q) {
      if (q > 0 && !recv_fits(to, a, 1)) break;
      if (q > 0) {
        recv_used[{to, a}] += 1;
        in_total[to] += 1;
        out_total[from] += 1;
        asset_used[a] += 1;
        qty[link] += 1;
      }
      fill_links(i, slot + 1, asset_used, used_total + q);
    }
    // Undo the deepest quantity reached before returning to the caller.
    Units reached = qty[link];
    if (reached > 0) {
      recv_used[{to, a}] -= reached;
      in_total[to] -= reached;
      out_total[from] -= reached;
      asset_used[a] -= reached;
      qty[link] = 0;
    }
  }

  void descend(NodeId i) {
    if (i > inst.node_count) {
      Units total = 0;
      for (NodeId v = 1; v <= inst.node_count; ++v) {
        Units in = in_total.count(v) ? in_total[v] : 0;
        Units out = out_total.count(v) ? out_total[v] : 0;
        if (in != out) return;  // every participant must break even
        total += in;
      }
      best = std::max(best, total);
      return;
    }
    std::map<AssetId, Units> asset_used;
    fill_links(i, 0, asset_used, 0);
  }
};

}  // namespace

Units enumerate_tiny(const Instance& inst) {
  if (inst.node_count > 4) throw std::invalid_argument("enumeration guard: more than 4 nodes");
  if (static_cast<int>(inst.assets.size()) > 3)
    throw std::invalid_argument("enumeration guard: more than 3 assets");
  for (NodeId i = 1; i <= inst.node_count; ++i) {
    if (inst.node_cap[i].upper > 2)
      throw std::invalid_argument("enumeration guard: node cap above 2");
    for (const auto& [a, b] : inst.send_spec[i])
      if (b.upper > 2) throw std::invalid_argument("enumeration guard: send cap above 2");
    for (const auto& [a, b] : inst.recv_spec[i])
      if (b.upper > 2) throw std::invalid_argument("enumeration guard: recv cap above 2");
  }

  TinySearch search(inst);
  search.links_of_node.assign(inst.node_count + 1, {});
  for (NodeId i = 1; i <= inst.node_count; ++i)
    for (const auto& [a, b] : inst.send_spec[i])
      for (NodeId j : inst.neighbors[i])
        if (inst.in_recv(j, a)) {
          search.links_of_node[i].push_back(search.links.size());
          search.links.push_back({i, j, a});
        }
  search.qty.assign(search.links.size(), 0);
  search.descend(1);
  return search.best;
}

// ---------------------------------------------------------------------------
// Cycle decomposition

std::vector<ExchangeCycle> decompose_cycles(const FlowTable& flow,
                                            const ExchangeNetwork& net) {
  std::set<LinkKey> known;
  for (const NetArc& arc : net.arcs)
    if (arc.kind == NetArcKind::Linking) known.insert({arc.owner, arc.peer, arc.asset});

  std::map<NodeId, Units> in_total, out_total;
  std::map<LinkKey, Units> left;
  for (const auto& [key, units] : flow) {
    if (units < 0) throw std::invalid_argument("negative flow");
    if (units == 0) continue;
    if (!known.count(key)) throw std::invalid_argument("flow on unknown link");
    auto [i, j, a] = key;
    out_total[i] += units;
    in_total[j] += units;
    left[key] = units;
  }
  for (const auto& [i, out] : out_total)
    if (!in_total.count(i) || in_total[i] != out)
      throw std::invalid_argument("unbalanced flow at node " + std::to_string(i));
  for (const auto& [i, in] : in_total)
    if (!out_total.count(i))
      throw std::invalid_argument("unbalanced flow at node " + std::to_string(i));

  // Walk positive links (lowest asset, then lowest receiver) until a node
  // repeats, peel the cycle at its bottleneck, and repeat until empty.
  auto next_link = [&left](NodeId at) -> const LinkKey* {
    const LinkKey* pick = nullptr;
    for (const auto& [key, units] : left) {
      if (std::get<0>(key) != at || units <= 0) continue;
      if (!pick || std::get<2>(key) < std::get<2>(*pick) ||
          (std::get<2>(key) == std::get<2>(*pick) && std::get<1>(key) < std::get<1>(*pick)))
        pick = &key;
    }
    return pick;
  };

  std::vector<ExchangeCycle> cycles;
  while (!left.empty()) {
    NodeId start = std::get<0>(left.begin()->first);
    std::vector<LinkKey> path;
    std::map<NodeId, size_t> seen_at;
    NodeId at = start;
    while (true) {
      auto found = seen_at.find(at);
      if (found != seen_at.end()) {
        std::vector<LinkKey> loop(path.begin() + static_cast<std::ptrdiff_t>(found->second),
                                  path.end());
        Units bottleneck = std::numeric_limits<Units>::max();
        for (const LinkKey& key : loop) bottleneck = std::min(bottleneck, left[key]);
        ExchangeCycle cycle;
        cycle.root = at;
        for (const LinkKey& key : loop) {
          auto [i, j, a] = key;
          cycle.links.push_back({i, j, a, static_cast<double>(bottleneck)});
          left[key] -= bottleneck;
          if (left[key] == 0) left.erase(key);
        }
        cycles.push_back(std::move(cycle));
        break;
      }
      seen_at[at] = path.size();
      const LinkKey* step = next_link(at);
      if (!step) throw std::logic_error("walk stalled on a balanced flow");
      path.push_back(*step);
      at = std::get<1>(*step);
    }
  }
  return cycles;
}

}  // namespace aep
