// Directed exchange network built from an instance: every participant is
// split into a receive half and a send half, each desired/offered asset gets
// its own node, and linking arcs connect matching send/receive asset nodes.
#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aep/instance.hpp"

namespace aep {

constexpr Units kUnbounded = std::numeric_limits<Units>::max();

enum class NetNodeKind { ParticipantRecv, ParticipantSend, RecvAsset, SendAsset };
enum class NetArcKind { Throughput, Receive, Send, Linking };

struct NetNode {
  int index = 0;  // participant halves keep i and i+n even after pruning
  NetNodeKind kind{};
  NodeId owner = kNoNode;
  AssetId asset = kNoAsset;  // kNoAsset for participant halves
};

struct NetArc {
  int from = 0;
  int to = 0;
  Units lower = 0;
  Units upper = 0;  // kUnbounded on linking arcs
  double cost = 0.0;
  double multiplier = 1.0;
  NetArcKind kind{};
  NodeId owner = kNoNode;       // the participant the arc belongs to (sender for linking)
  NodeId peer = kNoNode;        // receiver, linking arcs only
  AssetId asset = kNoAsset;     // kNoAsset for throughput arcs
  double recv_value = 1.0;      // p on receive arcs, used by the weighted objective
};

struct PruneRecord {
  NetNodeKind kind{};
  NodeId owner = kNoNode;
  AssetId asset = kNoAsset;
  std::string reason;
};

struct ExchangeNetwork {
  int participant_count = 0;  // original n, independent of pruning
  std::vector<NetNode> nodes;
  std::vector<NetArc> arcs;
  std::vector<PruneRecord> prune_log;
};

// Participant-level fixed point of the removal rules: an offered asset with no
// admissible receiver is dropped, a desired asset with no admissible sender is
// dropped, and a participant with an empty side is removed outright.
struct PrunedSets {
  std::vector<char> alive;                  // [1..n]
  std::vector<std::set<AssetId>> send_set;  // surviving S_i
  std::vector<std::set<AssetId>> recv_set;  // surviving R_i
  std::vector<PruneRecord> log;             // one entry per removed network node
};

PrunedSets prune_admissible_sets(const Instance& inst);

// Requires validate(inst).ok(); throws std::invalid_argument otherwise.
ExchangeNetwork build_network(const Instance& inst, bool prune);

// Closed-form node/arc counts of the unpruned network.
std::pair<std::int64_t, std::int64_t> compute_size(const Instance& inst);

enum class Objective { Unit, Weighted };

// DIMACS min-cost flow text in circulation form. Requires all lower bounds 0;
// throws std::invalid_argument when the instance needs two-phase treatment.
// Unbounded linking caps are emitted as the sum of all finite receive caps.
std::string export_dimacs(const ExchangeNetwork& net, Objective objective);

// One arc per line with kind/owner/asset annotations, for debugging.
std::string dump_edge_list(const ExchangeNetwork& net, const Instance& inst);

}  // namespace aep
