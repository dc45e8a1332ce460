// Asset exchange instance model: participants, neighbor graph, per-asset
// send/receive bounds, node caps, optional values/priorities/multipliers.
// Instances are immutable once built; the solver and oracle only read them.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace aep {

using NodeId = int;   // participants are 1..n; 0 means "none"
using AssetId = int;  // index into Instance::assets; -1 means "none"
using Units = std::int64_t;

constexpr NodeId kNoNode = 0;
constexpr AssetId kNoAsset = -1;

// Inclusive [lower, upper] limit on exchanged units.
struct Bounds {
  Units lower = 0;
  Units upper = 0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

using LinkKey = std::tuple<NodeId, NodeId, AssetId>;  // (sender, receiver, asset)

struct Instance {
  int node_count = 0;
  std::vector<std::string> assets;  // sorted ascending, unique

  // All per-node tables are indexed 1..node_count; slot 0 is unused.
  std::vector<std::vector<NodeId>> neighbors;        // each list sorted ascending
  std::vector<std::map<AssetId, Bounds>> send_spec;  // keys = S_i
  std::vector<std::map<AssetId, Bounds>> recv_spec;  // keys = R_i
  std::vector<Bounds> node_cap;

  std::map<std::pair<NodeId, AssetId>, double> recv_value;  // optional, receiver-indexed
  std::map<NodeId, double> priority;                        // optional, absent = 0
  std::map<LinkKey, double> multiplier;                     // optional, absent = 1.0

  bool valid_node(NodeId i) const { return i >= 1 && i <= node_count; }
  bool is_neighbor(NodeId i, NodeId j) const;
  bool in_send(NodeId i, AssetId a) const { return send_spec[i].count(a) != 0; }
  bool in_recv(NodeId i, AssetId a) const { return recv_spec[i].count(a) != 0; }

  std::optional<AssetId> asset_index(const std::string& name) const;
  const std::string& asset_name(AssetId a) const { return assets[a]; }

  double priority_of(NodeId i) const;
  double multiplier_for(NodeId i, NodeId j, AssetId a) const;
  double recv_value_or(NodeId i, AssetId a, double fallback) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Violations are data, not failures: validate never throws on bad instances.
struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate(const Instance& inst);

// True iff j is a neighbor of i, i can send a, and j wants a.
// Unknown node or asset ids are contract violations and throw.
bool admissible(const Instance& inst, NodeId i, NodeId j, AssetId a);

struct GeneratorParams {
  int node_count = 10;
  int asset_count = 5;
  double edge_density = 0.5;  // in (0, 1]
  int min_assets_per_side = 1;
  int max_assets_per_side = 2;
  Units recv_upper_min = 1, recv_upper_max = 5;
  Units send_upper_min = 1, send_upper_max = 5;
  Units node_cap_min = 1, node_cap_max = 10;
  double lower_bound_probability = 0.0;  // chance a recv spec gets a nonzero lower bound
  std::uint64_t seed = 0;
};

// Deterministic: identical params yield byte-identical serializations.
Instance generate_random(const GeneratorParams& params);

enum class Format { Json, Text };

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, int line = -1);
  int line() const { return line_; }

 private:
  int line_;
};

Instance parse_instance(const std::string& text, Format format);
std::string serialize_instance(const Instance& inst, Format format);

}  // namespace aep
