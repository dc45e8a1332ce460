// Independent correctness machinery: a constraint verifier that works from
// the aggregate flow table alone, an exact network optimum via negative-cycle
// canceling, a brute-force optimum for tiny instances, and a cycle
// decomposition of feasible flows.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "aep/chain_solver.hpp"
#include "aep/instance.hpp"
#include "aep/network.hpp"

namespace aep {

enum class VerifyMode { Basic, Generalized };

struct FamilyResult {
  std::string family;
  bool pass = true;
  std::string witness;  // first violation, empty when pass
};

struct VerificationReport {
  std::vector<FamilyResult> families;
  std::vector<std::string> notes;  // informational, e.g. generalized cycle gains
  bool pass() const;
  const FamilyResult* family(const std::string& name) const;
};

VerificationReport verify_solution(const Instance& inst, const Solution& sol,
                                   VerifyMode mode);

using FlowTable = std::map<LinkKey, Units>;

struct ExactResult {
  FlowTable flow;
  double value = 0.0;
};

// Exact optimum of the basic network model (lower bounds must all be 0).
// Capacities are re-derived from the instance; the network supplies structure.
ExactResult solve_exact(const Instance& inst, const ExchangeNetwork& net,
                        Objective objective);

// Exhaustive optimum (unit objective). Guard: n <= 4, all caps <= 2, |A| <= 3.
Units enumerate_tiny(const Instance& inst);

// Greedy cycle extraction from a balanced flow table; the returned cycles
// re-aggregate to the input exactly. Throws on unbalanced input.
std::vector<ExchangeCycle> decompose_cycles(const FlowTable& flow,
                                            const ExchangeNetwork& net);

}  // namespace aep
