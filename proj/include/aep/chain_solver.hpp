// Combinatorial chaining solver: grows predecessor trees from a chosen root
// and augments flow around every exchange cycle a scan discovers. Supports
// forward-only and reverse-then-forward scanning, fifo/priority/random
// selection, a two-phase pass for lower bounds, and generalized arc
// multipliers.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aep/instance.hpp"

namespace aep {

enum class ScanMode { ForwardOnly, ReverseThenForward };
enum class Policy { Fifo, Priority, Random };

struct Smoothing {
  double self_weight = 1.0;      // must exceed neighbor_weight
  double neighbor_weight = 0.0;  // >= 0
  int rounds = 0;
};

struct SolveConfig {
  ScanMode mode = ScanMode::ForwardOnly;
  Policy policy = Policy::Fifo;
  std::optional<Policy> phase2_policy;  // defaults to policy
  int phases = 1;                       // 1 or 2
  bool generalized = false;
  double epsilon = 1e-9;
  std::uint64_t seed = 0;
  std::optional<Smoothing> smoothing;

  Policy policy_for_phase(int phase) const {
    return (phase == 2 && phase2_policy) ? *phase2_policy : policy;
  }
};

// Working state of one solve. Tables are keyed by participant and
// (participant, asset) only; nothing is indexed by linking arc.
struct ChainState {
  int node_count = 0;
  std::set<NodeId> open_set;
  std::vector<std::map<AssetId, double>> flow_recv;  // defined on R_i
  std::vector<std::map<AssetId, double>> flow_send;  // defined on S_i
  std::vector<double> flow_node;
  std::vector<NodeId> pred_s, pred_r;    // kNoNode = unset
  std::vector<AssetId> asset_s, asset_r; // kNoAsset = unset
  std::vector<NodeId> scan_set;          // pop discipline depends on policy
  std::vector<std::set<AssetId>> residual_send;  // shrinks as arcs saturate
  std::vector<std::set<AssetId>> residual_recv;
  double epsilon = 1e-9;
  bool generalized = false;
  std::mt19937_64 rng;
  std::vector<double> priority;  // effective (smoothed) priorities
  int phase = 1;                 // 1 restricts roots to lower-bound deficits

  bool saturated(double flow, Units upper) const {
    return generalized ? flow > static_cast<double>(upper) - epsilon
                       : flow >= static_cast<double>(upper);
  }
};

struct CycleLink {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  AssetId asset = kNoAsset;
  double qty = 0.0;  // units sent; the receiver gets qty * multiplier
};

struct ExchangeCycle {
  NodeId root = kNoNode;
  std::vector<CycleLink> links;  // flow order, first sender = root
  double gain = 1.0;             // product of link multipliers; 1 in basic mode
};

struct LowerBoundEntry {
  NodeId node = kNoNode;
  AssetId asset = kNoAsset;
  bool recv_side = true;
  Units required = 0;
  double achieved = 0.0;
  bool met = false;
};

struct SolveStats {
  std::int64_t breakthroughs = 0;
  std::int64_t failed_scans = 0;
  std::int64_t scanned_nodes = 0;
  std::int64_t iterations = 0;     // main-loop iterations across both phases
  std::int64_t phase1_cycles = 0;  // cycles recorded before phase 2 began
};

struct Solution {
  std::vector<ExchangeCycle> cycles;
  std::map<LinkKey, double> aggregate;
  double objective_units = 0.0;
  std::optional<double> objective_weighted;  // present iff instance has recv values
  std::vector<LowerBoundEntry> lb_report;
  SolveStats stats;
  SolveConfig config;
};

ChainState init_state(const Instance& inst, const SolveConfig& config);

void reset_predecessors(ChainState& state);

// One round per application: p'(i) = w0*p(i) + w1*mean(p(j) : j in N_i).
std::vector<double> smooth_priorities(const std::vector<double>& priority,
                                      const Instance& inst, const Smoothing& params);

// none iff fewer than two open nodes remain (or, in phase 1, no open node
// still has a receive lower-bound deficit).
std::optional<NodeId> select_root(ChainState& state, const Instance& inst,
                                  const SolveConfig& config);

struct ScanOutcome {
  std::optional<NodeId> breakthrough_at;  // nullopt = exhausted
};

ScanOutcome forward_scan(ChainState& state, const Instance& inst, NodeId root,
                         const SolveConfig& config, SolveStats* stats = nullptr);

// Marks every open neighbor that can send the root something it wants.
// Returns false when no fertile node exists; the caller drops the root.
bool reverse_scan(ChainState& state, const Instance& inst, NodeId root);

// Augmentation along the located cycle; max_delta caps the increment (used by
// phase 1). All three update flows and close saturated assets/nodes.
ExchangeCycle breakthrough_basic(ChainState& state, const Instance& inst, NodeId root,
                                 double max_delta = -1.0);
ExchangeCycle breakthrough_fertile(ChainState& state, const Instance& inst, NodeId root,
                                   NodeId fertile, double max_delta = -1.0);
ExchangeCycle breakthrough_generalized(ChainState& state, const Instance& inst,
                                       NodeId root, std::optional<NodeId> fertile,
                                       double max_delta = -1.0);

// Requires validate(inst).ok(). Deterministic for a fixed config (incl. seed).
// When final_state is given it receives the end-of-solve working state.
Solution solve(const Instance& inst, const SolveConfig& config,
               ChainState* final_state = nullptr);

Solution extract_solution(const ChainState& state, const std::vector<ExchangeCycle>& cycles,
                          const Instance& inst, const SolveConfig& config,
                          const SolveStats& stats);

// True when a fresh forward scan from any capacity-open participant of the
// final state could still close a cycle (used to check heuristic maximality).
bool breakthrough_possible(const ChainState& state, const Instance& inst);

std::string solution_to_json(const Solution& sol, const Instance& inst);
Solution parse_solution(const std::string& text, const Instance& inst);

// Human-readable cycle report: "cycle 1: 1 -X-> 3 -Y-> 2 -Z-> 1 (delta=1)".
std::string render_report(const Solution& sol, const Instance& inst);

std::string to_string(ScanMode mode);
std::string to_string(Policy policy);

}  // namespace aep
