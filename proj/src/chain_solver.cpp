#include "aep/chain_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "aep/network.hpp"
#include "canon.hpp"

namespace aep {

using nlohmann::json;

namespace {

void check_config(const SolveConfig& config) {
  if (config.phases != 1 && config.phases != 2)
    throw std::invalid_argument("phases must be 1 or 2");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (config.smoothing) {
    const Smoothing& s = *config.smoothing;
    if (!(s.self_weight > s.neighbor_weight) || s.neighbor_weight < 0.0)
      throw std::invalid_argument("smoothing weights must satisfy self > neighbor >= 0");
    if (s.rounds < 0) throw std::invalid_argument("smoothing rounds must be >= 0");
  }
}

// Pop disciplines share one helper: fifo takes the front, priority the
// highest effective priority (ties to the lowest id), random a uniform draw.
NodeId pop_scan_set(ChainState& state, Policy policy) {
  size_t pick = 0;
  switch (policy) {
    case Policy::Fifo:
      break;
    case Policy::Priority:
      for (size_t k = 1; k < state.scan_set.size(); ++k) {
        double best = state.priority[state.scan_set[pick]];
        double cand = state.priority[state.scan_set[k]];
        if (cand > best || (cand == best && state.scan_set[k] < state.scan_set[pick]))
          pick = k;
      }
      break;
    case Policy::Random:
      pick = static_cast<size_t>(state.rng() % state.scan_set.size());
      break;
  }
  NodeId id = state.scan_set[pick];
  state.scan_set.erase(state.scan_set.begin() + static_cast<std::ptrdiff_t>(pick));
  return id;
}

double recv_deficit(const ChainState& state, const Instance& inst, NodeId i) {
  double worst = 0.0;
  for (const auto& [a, b] : inst.recv_spec[i]) {
    if (b.lower <= 0) continue;
    auto it = state.flow_recv[i].find(a);
    double have = it == state.flow_recv[i].end() ? 0.0 : it->second;
    worst = std::max(worst, static_cast<double>(b.lower) - have);
  }
  return worst;
}

// Bounds met within epsilon no longer count as deficits, or phase 1 would
// chase vanishing increments in generalized mode.
double deficit_floor(const ChainState& state) {
  return state.generalized ? state.epsilon : 0.0;
}

// The residual-set invariant guarantees a meaningful uncapped increment; a
// phase-1 cap may legitimately shrink it afterwards.
double checked_delta(const ChainState& state, double delta, double max_delta) {
  if (delta <= deficit_floor(state))
    throw std::logic_error("breakthrough with non-positive increment");
  if (max_delta >= 0.0) delta = std::min(delta, max_delta);
  return delta;
}

}  // namespace

ChainState init_state(const Instance& inst, const SolveConfig& config) {
  check_config(config);
  const int n = inst.node_count;

  ChainState state;
  state.node_count = n;
  state.epsilon = config.epsilon;
  state.generalized = config.generalized;
  state.rng.seed(config.seed);
  state.phase = 1;

  state.flow_recv.assign(n + 1, {});
  state.flow_send.assign(n + 1, {});
  state.flow_node.assign(n + 1, 0.0);
  state.pred_s.assign(n + 1, kNoNode);
  state.pred_r.assign(n + 1, kNoNode);
  state.asset_s.assign(n + 1, kNoAsset);
  state.asset_r.assign(n + 1, kNoAsset);
  state.residual_send.assign(n + 1, {});
  state.residual_recv.assign(n + 1, {});

  for (NodeId i = 1; i <= n; ++i) {
    for (const auto& [a, b] : inst.recv_spec[i]) state.flow_recv[i][a] = 0.0;
    for (const auto& [a, b] : inst.send_spec[i]) state.flow_send[i][a] = 0.0;
  }

  PrunedSets ps = prune_admissible_sets(inst);
  for (NodeId i = 1; i <= n; ++i) {
    if (!ps.alive[i]) continue;
    for (AssetId a : ps.send_set[i])
      if (inst.send_spec[i].at(a).upper > 0) state.residual_send[i].insert(a);
    for (AssetId a : ps.recv_set[i])
      if (inst.recv_spec[i].at(a).upper > 0) state.residual_recv[i].insert(a);
    if (inst.node_cap[i].upper > 0) state.open_set.insert(i);
  }

  state.priority.assign(n + 1, 0.0);
  for (NodeId i = 1; i <= n; ++i) state.priority[i] = inst.priority_of(i);
  if (config.smoothing)
    for (int round = 0; round < config.smoothing->rounds; ++round)
      state.priority = smooth_priorities(state.priority, inst, *config.smoothing);
  return state;
}

void reset_predecessors(ChainState& state) {
  std::fill(state.pred_s.begin(), state.pred_s.end(), kNoNode);
  std::fill(state.pred_r.begin(), state.pred_r.end(), kNoNode);
  std::fill(state.asset_s.begin(), state.asset_s.end(), kNoAsset);
  std::fill(state.asset_r.begin(), state.asset_r.end(), kNoAsset);
  state.scan_set.clear();
}

std::vector<double> smooth_priorities(const std::vector<double>& priority,
                                      const Instance& inst, const Smoothing& params) {
  std::vector<double> next(priority.size(), 0.0);
  for (NodeId i = 1; i <= inst.node_count; ++i) {
    double mean = 0.0;
    if (!inst.neighbors[i].empty()) {
      for (NodeId j : inst.neighbors[i]) mean += priority[j];
      mean /= static_cast<double>(inst.neighbors[i].size());
    }
    next[i] = params.self_weight * priority[i] + params.neighbor_weight * mean;
  }
  return next;
}

std::optional<NodeId> select_root(ChainState& state, const Instance& inst,
                                  const SolveConfig& config) {
  if (state.open_set.size() < 2) return std::nullopt;

  std::vector<NodeId> candidates;
  if (config.phases == 2 && state.phase == 1) {
    for (NodeId i : state.open_set)
      if (recv_deficit(state, inst, i) > deficit_floor(state)) candidates.push_back(i);
  } else {
    candidates.assign(state.open_set.begin(), state.open_set.end());
  }
  if (candidates.empty()) return std::nullopt;

  switch (config.policy_for_phase(state.phase)) {
    case Policy::Fifo:
      return candidates.front();
    case Policy::Priority: {
      NodeId best = candidates.front();
      for (NodeId i : candidates)
        if (state.priority[i] > state.priority[best]) best = i;
      return best;
    }
    case Policy::Random:
      return candidates[static_cast<size_t>(state.rng() % candidates.size())];
  }
  return std::nullopt;
}

ScanOutcome forward_scan(ChainState& state, const Instance& inst, NodeId root,
                         const SolveConfig& config, SolveStats* stats) {
  const Policy policy = config.policy_for_phase(state.phase);
  const bool fertile_mode = config.mode == ScanMode::ReverseThenForward;
  state.scan_set.assign(1, root);

  while (!state.scan_set.empty()) {
    NodeId i = pop_scan_set(state, policy);
    if (stats) ++stats->scanned_nodes;
    for (AssetId a : state.residual_send[i]) {
      for (NodeId j : inst.neighbors[i]) {
        if (!state.open_set.count(j)) continue;
        if (!state.residual_recv[j].count(a)) continue;
        if (j == root) {
          if (fertile_mode) continue;  // cycles close through fertile nodes instead
          state.pred_s[root] = i;
          state.asset_s[root] = a;
          return {root};
        }
        if (state.pred_s[j] != kNoNode) continue;
        state.pred_s[j] = i;
        state.asset_s[j] = a;
        if (fertile_mode && state.pred_r[j] != kNoNode) return {j};
        state.scan_set.push_back(j);
      }
    }
  }
  return {std::nullopt};
}

bool reverse_scan(ChainState& state, const Instance& inst, NodeId root) {
  bool found = false;
  for (AssetId a : state.residual_recv[root]) {
    for (NodeId j : inst.neighbors[root]) {
      if (!state.open_set.count(j)) continue;
      if (!state.residual_send[j].count(a)) continue;
      state.pred_r[j] = root;  // later assets overwrite earlier marks
      state.asset_r[j] = a;
      found = true;
    }
  }
  return found;
}

namespace {

// Trace pred_s from `last` back to the root and return the chain in flow
// order (first link leaves the root); `last == root` walks the full cycle.
std::vector<CycleLink> trace_chain(const ChainState& state, NodeId root, NodeId last) {
  std::vector<CycleLink> links;
  NodeId at = last;
  do {
    NodeId from = state.pred_s[at];
    if (from == kNoNode)
      throw std::logic_error("breakthrough walk hit an unset predecessor");
    links.push_back({from, at, state.asset_s[at], 0.0});
    at = from;
  } while (at != root);
  std::reverse(links.begin(), links.end());
  return links;
}

Units spec_upper(const std::vector<std::map<AssetId, Bounds>>& table, NodeId i, AssetId a) {
  return table[i].at(a).upper;
}

// Shared tail of every breakthrough: apply per-link send/receive/node
// increments, then close whatever the increments saturated.
ExchangeCycle apply_increments(ChainState& state, const Instance& inst, NodeId root,
                               std::vector<CycleLink> links,
                               const std::vector<double>& sent, double gain) {
  for (size_t t = 0; t < links.size(); ++t) {
    CycleLink& link = links[t];
    link.qty = sent[t];
    const double received = sent[t] * (state.generalized
                                           ? inst.multiplier_for(link.from, link.to, link.asset)
                                           : 1.0);
    state.flow_send[link.from][link.asset] += sent[t];
    state.flow_recv[link.to][link.asset] += received;
    state.flow_node[link.to] += received;
  }
  for (const CycleLink& link : links) {
    if (state.saturated(state.flow_send[link.from][link.asset],
                        spec_upper(inst.send_spec, link.from, link.asset)))
      state.residual_send[link.from].erase(link.asset);
    if (state.saturated(state.flow_recv[link.to][link.asset],
                        spec_upper(inst.recv_spec, link.to, link.asset)))
      state.residual_recv[link.to].erase(link.asset);
    if (state.saturated(state.flow_node[link.to], inst.node_cap[link.to].upper))
      state.open_set.erase(link.to);
  }
  return {root, std::move(links), gain};
}

}  // namespace

ExchangeCycle breakthrough_basic(ChainState& state, const Instance& inst, NodeId root,
                                 double max_delta) {
  std::vector<CycleLink> links = trace_chain(state, root, root);

  double delta = std::numeric_limits<double>::infinity();
  for (const CycleLink& link : links) {
    delta = std::min(delta, static_cast<double>(spec_upper(inst.recv_spec, link.to,
                                                           link.asset)) -
                                state.flow_recv[link.to][link.asset]);
    delta = std::min(delta, static_cast<double>(spec_upper(inst.send_spec, link.from,
                                                           link.asset)) -
                                state.flow_send[link.from][link.asset]);
    delta = std::min(delta, static_cast<double>(inst.node_cap[link.to].upper) -
                                state.flow_node[link.to]);
  }
  delta = checked_delta(state, delta, max_delta);

  std::vector<double> sent(links.size(), delta);
  return apply_increments(state, inst, root, std::move(links), sent, 1.0);
}

ExchangeCycle breakthrough_fertile(ChainState& state, const Instance& inst, NodeId root,
                                   NodeId fertile, double max_delta) {
  std::vector<CycleLink> links;
  if (fertile != root) links = trace_chain(state, root, fertile);
  if (state.asset_r[fertile] == kNoAsset)
    throw std::logic_error("fertile node carries no reverse asset");
  links.push_back({fertile, root, state.asset_r[fertile], 0.0});

  double delta = std::numeric_limits<double>::infinity();
  for (const CycleLink& link : links) {
    delta = std::min(delta, static_cast<double>(spec_upper(inst.recv_spec, link.to,
                                                           link.asset)) -
                                state.flow_recv[link.to][link.asset]);
    delta = std::min(delta, static_cast<double>(spec_upper(inst.send_spec, link.from,
                                                           link.asset)) -
                                state.flow_send[link.from][link.asset]);
    delta = std::min(delta, static_cast<double>(inst.node_cap[link.to].upper) -
                                state.flow_node[link.to]);
  }
  delta = checked_delta(state, delta, max_delta);

  std::vector<double> sent(links.size(), delta);
  return apply_increments(state, inst, root, std::move(links), sent, 1.0);
}

ExchangeCycle breakthrough_generalized(ChainState& state, const Instance& inst, NodeId root,
                                       std::optional<NodeId> fertile, double max_delta) {
  std::vector<CycleLink> links;
  if (fertile) {
    if (*fertile != root) links = trace_chain(state, root, *fertile);
    if (state.asset_r[*fertile] == kNoAsset)
      throw std::logic_error("fertile node carries no reverse asset");
    links.push_back({*fertile, root, state.asset_r[*fertile], 0.0});
  } else {
    links = trace_chain(state, root, root);
  }

  // gain_before[t] converts a root-side unit into units sent on link t;
  // multiplying by the link's rate gives the units received.
  std::vector<double> gain_before(links.size(), 1.0);
  double gain = 1.0;
  double delta = std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < links.size(); ++t) {
    const CycleLink& link = links[t];
    gain_before[t] = gain;
    const double rate = inst.multiplier_for(link.from, link.to, link.asset);
    const double gain_after = gain * rate;
    delta = std::min(delta, (static_cast<double>(spec_upper(inst.send_spec, link.from,
                                                            link.asset)) -
                             state.flow_send[link.from][link.asset]) /
                                gain);
    delta = std::min(delta, (static_cast<double>(spec_upper(inst.recv_spec, link.to,
                                                            link.asset)) -
                             state.flow_recv[link.to][link.asset]) /
                                gain_after);
    delta = std::min(delta, (static_cast<double>(inst.node_cap[link.to].upper) -
                             state.flow_node[link.to]) /
                                gain_after);
    gain = gain_after;
  }
  delta = checked_delta(state, delta, max_delta >= 0.0 ? max_delta / gain : -1.0);

  std::vector<double> sent(links.size());
  for (size_t t = 0; t < links.size(); ++t) sent[t] = delta * gain_before[t];
  return apply_increments(state, inst, root, std::move(links), sent, gain);
}

Solution solve(const Instance& inst, const SolveConfig& config, ChainState* final_state) {
  ValidationResult vr = validate(inst);
  if (!vr.ok()) throw std::invalid_argument("instance invalid: " + vr.violations.front());

  ChainState state = init_state(inst, config);
  const std::set<NodeId> initial_open = state.open_set;

  std::vector<ExchangeCycle> cycles;
  SolveStats stats;

  while (true) {
    std::optional<NodeId> root = select_root(state, inst, config);
    if (!root) {
      if (config.phases == 2 && state.phase == 1) {
        // Lower bounds are settled; reopen every node with spare capacity
        // and run an ordinary pass on top of the retained flows.
        state.phase = 2;
        state.open_set.clear();
        for (NodeId i : initial_open)
          if (!state.saturated(state.flow_node[i], inst.node_cap[i].upper))
            state.open_set.insert(i);
        continue;
      }
      break;
    }

    ++stats.iterations;
    reset_predecessors(state);

    if (config.mode == ScanMode::ReverseThenForward && !reverse_scan(state, inst, *root)) {
      ++stats.failed_scans;
      state.open_set.erase(*root);
      continue;
    }

    ScanOutcome outcome = forward_scan(state, inst, *root, config, &stats);
    if (!outcome.breakthrough_at) {
      ++stats.failed_scans;
      state.open_set.erase(*root);
      continue;
    }

    double cap = -1.0;
    if (config.phases == 2 && state.phase == 1) cap = recv_deficit(state, inst, *root);

    ExchangeCycle cycle;
    if (config.generalized) {
      std::optional<NodeId> fertile;
      if (config.mode == ScanMode::ReverseThenForward) fertile = *outcome.breakthrough_at;
      cycle = breakthrough_generalized(state, inst, *root, fertile, cap);
    } else if (config.mode == ScanMode::ReverseThenForward) {
      cycle = breakthrough_fertile(state, inst, *root, *outcome.breakthrough_at, cap);
    } else {
      cycle = breakthrough_basic(state, inst, *root, cap);
    }
    ++stats.breakthroughs;
    cycles.push_back(std::move(cycle));
    if (config.phases == 2 && state.phase == 1)
      stats.phase1_cycles = static_cast<std::int64_t>(cycles.size());
  }

  Solution sol = extract_solution(state, cycles, inst, config, stats);
  if (final_state) *final_state = std::move(state);
  return sol;
}

Solution extract_solution(const ChainState& state, const std::vector<ExchangeCycle>& cycles,
                          const Instance& inst, const SolveConfig& config,
                          const SolveStats& stats) {
  Solution sol;
  sol.cycles = cycles;
  sol.stats = stats;
  sol.config = config;

  for (const ExchangeCycle& cycle : cycles)
    for (const CycleLink& link : cycle.links)
      sol.aggregate[{link.from, link.to, link.asset}] += link.qty;

  double units = 0.0, weighted = 0.0;
  for (NodeId i = 1; i <= inst.node_count; ++i)
    for (const auto& [a, flow] : state.flow_recv[i]) {
      units += flow;
      weighted += flow * inst.recv_value_or(i, a, 1.0);
    }
  sol.objective_units = units;
  if (!inst.recv_value.empty()) sol.objective_weighted = weighted;

  const double slack = state.generalized ? state.epsilon : 0.0;
  for (NodeId i = 1; i <= inst.node_count; ++i) {
    for (const auto& [a, b] : inst.recv_spec[i]) {
      if (b.lower <= 0) continue;
      double have = state.flow_recv[i].at(a);
      sol.lb_report.push_back(
          {i, a, true, b.lower, have, have >= static_cast<double>(b.lower) - slack});
    }
    for (const auto& [a, b] : inst.send_spec[i]) {
      if (b.lower <= 0) continue;
      double have = state.flow_send[i].at(a);
      sol.lb_report.push_back(
          {i, a, false, b.lower, have, have >= static_cast<double>(b.lower) - slack});
    }
    if (inst.node_cap[i].lower > 0) {
      double have = state.flow_node[i];
      sol.lb_report.push_back({i, kNoAsset, true, inst.node_cap[i].lower, have,
                               have >= static_cast<double>(inst.node_cap[i].lower) - slack});
    }
  }
  return sol;
}

bool breakthrough_possible(const ChainState& state, const Instance& inst) {
  const int n = inst.node_count;
  std::vector<char> open(n + 1, 0);
  for (NodeId i = 1; i <= n; ++i)
    open[i] = !state.saturated(state.flow_node[i], inst.node_cap[i].upper) ? 1 : 0;

  // Fresh breadth-first scan from every capacity-open node over the residual
  // admissibility graph; membership in the solver's open set is irrelevant
  // because failed scans do not consume capacity.
  std::vector<NodeId> pred(n + 1);
  for (NodeId root = 1; root <= n; ++root) {
    if (!open[root]) continue;
    std::fill(pred.begin(), pred.end(), kNoNode);
    std::vector<NodeId> queue{root};
    for (size_t head = 0; head < queue.size(); ++head) {
      NodeId i = queue[head];
      for (AssetId a : state.residual_send[i]) {
        for (NodeId j : inst.neighbors[i]) {
          if (!open[j] || !state.residual_recv[j].count(a)) continue;
          if (j == root) return true;
          if (pred[j] != kNoNode) continue;
          pred[j] = i;
          queue.push_back(j);
        }
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Serialization and reporting

std::string to_string(ScanMode mode) {
  return mode == ScanMode::ForwardOnly ? "forward" : "reverse_forward";
}

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::Fifo: return "fifo";
    case Policy::Priority: return "priority";
    case Policy::Random: return "random";
  }
  return "fifo";
}

namespace {

ScanMode mode_from_string(const std::string& s) {
  if (s == "forward") return ScanMode::ForwardOnly;
  if (s == "reverse_forward") return ScanMode::ReverseThenForward;
  throw ParseError("unknown scan mode: " + s);
}

Policy policy_from_string(const std::string& s) {
  if (s == "fifo") return Policy::Fifo;
  if (s == "priority") return Policy::Priority;
  if (s == "random") return Policy::Random;
  throw ParseError("unknown policy: " + s);
}

json config_to_json(const SolveConfig& config) {
  json doc;
  doc["mode"] = to_string(config.mode);
  doc["policy"] = to_string(config.policy);
  if (config.phase2_policy) doc["phase2_policy"] = to_string(*config.phase2_policy);
  doc["phases"] = config.phases;
  doc["generalized"] = config.generalized;
  doc["epsilon"] = config.epsilon;
  doc["seed"] = config.seed;
  if (config.smoothing) {
    doc["smoothing"] = {{"self_weight", canonical_number(config.smoothing->self_weight)},
                        {"neighbor_weight", canonical_number(config.smoothing->neighbor_weight)},
                        {"rounds", config.smoothing->rounds}};
  }
  return doc;
}

SolveConfig config_from_json(const json& doc) {
  SolveConfig config;
  if (doc.contains("mode")) config.mode = mode_from_string(doc.at("mode").get<std::string>());
  if (doc.contains("policy"))
    config.policy = policy_from_string(doc.at("policy").get<std::string>());
  if (doc.contains("phase2_policy"))
    config.phase2_policy = policy_from_string(doc.at("phase2_policy").get<std::string>());
  if (doc.contains("phases")) config.phases = doc.at("phases").get<int>();
  if (doc.contains("generalized")) config.generalized = doc.at("generalized").get<bool>();
  if (doc.contains("epsilon")) config.epsilon = doc.at("epsilon").get<double>();
  if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("smoothing")) {
    Smoothing s;
    const json& sm = doc.at("smoothing");
    if (sm.contains("self_weight")) s.self_weight = sm.at("self_weight").get<double>();
    if (sm.contains("neighbor_weight"))
      s.neighbor_weight = sm.at("neighbor_weight").get<double>();
    if (sm.contains("rounds")) s.rounds = sm.at("rounds").get<int>();
    config.smoothing = s;
  }
  return config;
}

std::string side_name(const LowerBoundEntry& e) {
  if (e.asset == kNoAsset) return "node";
  return e.recv_side ? "recv" : "send";
}

}  // namespace

std::string solution_to_json(const Solution& sol, const Instance& inst) {
  json doc;
  doc["version"] = 1;

  json cycles = json::array();
  for (const ExchangeCycle& cycle : sol.cycles) {
    json links = json::array();
    for (const CycleLink& link : cycle.links)
      links.push_back({{"from", link.from},
                       {"to", link.to},
                       {"asset", inst.asset_name(link.asset)},
                       {"qty", canonical_number(link.qty)}});
    cycles.push_back(
        {{"root", cycle.root}, {"gain", canonical_number(cycle.gain)}, {"links", links}});
  }
  doc["cycles"] = cycles;

  json aggregate = json::array();
  for (const auto& [key, qty] : sol.aggregate) {
    auto [i, j, a] = key;
    aggregate.push_back({{"from", i},
                         {"to", j},
                         {"asset", inst.asset_name(a)},
                         {"qty", canonical_number(qty)}});
  }
  doc["aggregate"] = aggregate;

  doc["objective_units"] = canonical_number(sol.objective_units);
  if (sol.objective_weighted)
    doc["objective_weighted"] = canonical_number(*sol.objective_weighted);

  json lbs = json::array();
  for (const LowerBoundEntry& e : sol.lb_report) {
    json rec = {{"node", e.node},
                {"side", side_name(e)},
                {"required", e.required},
                {"achieved", canonical_number(e.achieved)},
                {"met", e.met}};
    if (e.asset != kNoAsset) rec["asset"] = inst.asset_name(e.asset);
    lbs.push_back(rec);
  }
  doc["lower_bounds"] = lbs;

  doc["stats"] = {{"breakthroughs", sol.stats.breakthroughs},
                  {"failed_scans", sol.stats.failed_scans},
                  {"scanned_nodes", sol.stats.scanned_nodes},
                  {"iterations", sol.stats.iterations},
                  {"phase1_cycles", sol.stats.phase1_cycles}};
  doc["config"] = config_to_json(sol.config);
  return doc.dump(2) + "\n";
}

Solution parse_solution(const std::string& text, const Instance& inst) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }

  try {
    Solution sol;
    if (doc.contains("version") && doc.at("version").get<int>() != 1)
      throw ParseError("unsupported version");

    auto asset_of = [&inst](const json& rec) {
      std::string name = rec.at("asset").get<std::string>();
      auto a = inst.asset_index(name);
      if (!a) throw ParseError("unknown asset: " + name);
      return *a;
    };

    for (const auto& c : doc.value("cycles", json::array())) {
      ExchangeCycle cycle;
      cycle.root = c.at("root").get<NodeId>();
      cycle.gain = c.value("gain", 1.0);
      for (const auto& l : c.at("links")) {
        cycle.links.push_back({l.at("from").get<NodeId>(), l.at("to").get<NodeId>(),
                               asset_of(l), l.at("qty").get<double>()});
      }
      sol.cycles.push_back(std::move(cycle));
    }
    for (const auto& rec : doc.value("aggregate", json::array()))
      sol.aggregate[{rec.at("from").get<NodeId>(), rec.at("to").get<NodeId>(),
                     asset_of(rec)}] = rec.at("qty").get<double>();
    sol.objective_units = doc.value("objective_units", 0.0);
    if (doc.contains("objective_weighted"))
      sol.objective_weighted = doc.at("objective_weighted").get<double>();

    for (const auto& rec : doc.value("lower_bounds", json::array())) {
      LowerBoundEntry e;
      e.node = rec.at("node").get<NodeId>();
      std::string side = rec.at("side").get<std::string>();
      if (side == "node") {
        e.asset = kNoAsset;
        e.recv_side = true;
      } else {
        e.asset = asset_of(rec);
        e.recv_side = side == "recv";
      }
      e.required = rec.at("required").get<Units>();
      e.achieved = rec.at("achieved").get<double>();
      e.met = rec.at("met").get<bool>();
      sol.lb_report.push_back(e);
    }

    if (doc.contains("stats")) {
      const json& st = doc.at("stats");
      sol.stats.breakthroughs = st.value("breakthroughs", 0);
      sol.stats.failed_scans = st.value("failed_scans", 0);
      sol.stats.scanned_nodes = st.value("scanned_nodes", 0);
      sol.stats.iterations = st.value("iterations", 0);
      sol.stats.phase1_cycles = st.value("phase1_cycles", 0);
    }
    if (doc.contains("config")) sol.config = config_from_json(doc.at("config"));
    return sol;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string render_report(const Solution& sol, const Instance& inst) {
  std::ostringstream out;
  auto num = [](double v) { return canonical_number(v).dump(); };

  int index = 0;
  for (const ExchangeCycle& cycle : sol.cycles) {
    out << "cycle " << ++index << ": ";
    for (size_t t = 0; t < cycle.links.size(); ++t) {
      const CycleLink& link = cycle.links[t];
      if (t == 0) out << link.from;
      out << " -" << inst.asset_name(link.asset) << "-> " << link.to;
    }
    out << " (delta=" << num(cycle.links.empty() ? 0.0 : cycle.links.front().qty);
    if (cycle.gain != 1.0) out << ", gain=" << num(cycle.gain);
    out << ")\n";
  }
  out << "total units " << num(sol.objective_units) << "\n";
  if (sol.objective_weighted) out << "weighted total " << num(*sol.objective_weighted) << "\n";
  for (const LowerBoundEntry& e : sol.lb_report) {
    out << "node " << e.node;
    if (e.asset == kNoAsset)
      out << " throughput";
    else
      out << " asset " << inst.asset_name(e.asset) << (e.recv_side ? "" : " send");
    out << ": " << (e.met ? "met" : "unmet") << " (" << num(e.achieved) << "/" << e.required
        << ")\n";
  }
  return out.str();
}

}  // namespace aep
