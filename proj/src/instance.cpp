#include "aep/instance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "canon.hpp"

namespace aep {

using nlohmann::json;

bool Instance::is_neighbor(NodeId i, NodeId j) const {
  const auto& ns = neighbors[i];
  return std::binary_search(ns.begin(), ns.end(), j);
}

std::optional<AssetId> Instance::asset_index(const std::string& name) const {
  auto it = std::lower_bound(assets.begin(), assets.end(), name);
  if (it == assets.end() || *it != name) return std::nullopt;
  return static_cast<AssetId>(it - assets.begin());
}

double Instance::priority_of(NodeId i) const {
  auto it = priority.find(i);
  return it == priority.end() ? 0.0 : it->second;
}

double Instance::multiplier_for(NodeId i, NodeId j, AssetId a) const {
  auto it = multiplier.find({i, j, a});
  return it == multiplier.end() ? 1.0 : it->second;
}

double Instance::recv_value_or(NodeId i, AssetId a, double fallback) const {
  auto it = recv_value.find({i, a});
  return it == recv_value.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string fmt_node_asset(const Instance& inst, NodeId i, AssetId a) {
  return "node " + std::to_string(i) + ", asset " + inst.asset_name(a);
}

}  // namespace

ValidationResult validate(const Instance& inst) {
  ValidationResult result;
  auto flag = [&result](std::string msg) { result.violations.push_back(std::move(msg)); };

  const int n = inst.node_count;
  if (n < 1) flag("node_count must be >= 1");

  for (NodeId i = 1; i <= n; ++i) {
    NodeId prev = kNoNode;
    for (NodeId j : inst.neighbors[i]) {
      if (j < 1 || j > n) {
        flag("neighbor id out of range at node " + std::to_string(i) + ": " + std::to_string(j));
        continue;
      }
      if (j == i) flag("self-neighbor at node " + std::to_string(i));
      if (j == prev) flag("duplicate neighbor " + std::to_string(j) + " at node " + std::to_string(i));
      prev = j;
      if (j >= 1 && j <= n && !inst.is_neighbor(j, i))
        flag("neighbor asymmetry: " + std::to_string(j) + " in N_" + std::to_string(i) +
             " but not conversely");
    }
  }

  auto check_bounds = [&](const Bounds& b, const std::string& where) {
    if (b.lower < 0 || b.upper < 0) flag("negative bound at " + where);
    if (b.lower > b.upper) flag("lower exceeds upper at " + where);
  };

  for (NodeId i = 1; i <= n; ++i) {
    for (const auto& [a, b] : inst.send_spec[i]) {
      check_bounds(b, "send spec, " + fmt_node_asset(inst, i, a));
      if (inst.in_recv(i, a))
        flag("send/receive overlap at " + fmt_node_asset(inst, i, a));
    }
    for (const auto& [a, b] : inst.recv_spec[i])
      check_bounds(b, "recv spec, " + fmt_node_asset(inst, i, a));
    check_bounds(inst.node_cap[i], "node cap, node " + std::to_string(i));

    Units recv_total = 0, send_total = 0;
    for (const auto& [a, b] : inst.recv_spec[i]) recv_total += b.upper;
    for (const auto& [a, b] : inst.send_spec[i]) send_total += b.upper;
    if (inst.node_cap[i].upper > recv_total)
      flag("node cap exceeds receive capacity at node " + std::to_string(i));
    if (inst.node_cap[i].upper > send_total)
      flag("node cap exceeds send capacity at node " + std::to_string(i));
  }

  for (const auto& [key, value] : inst.recv_value) {
    auto [i, a] = key;
    if (!inst.valid_node(i) || a < 0 || a >= static_cast<AssetId>(inst.assets.size())) {
      flag("recv value references unknown node or asset");
      continue;
    }
    if (!inst.in_recv(i, a))
      flag("recv value for asset outside R_i at " + fmt_node_asset(inst, i, a));
    if (!(value > 0.0)) flag("non-positive recv value at " + fmt_node_asset(inst, i, a));
  }

  for (const auto& [i, p] : inst.priority) {
    if (!inst.valid_node(i)) flag("priority references unknown node " + std::to_string(i));
    (void)p;
  }

  for (const auto& [key, rate] : inst.multiplier) {
    auto [i, j, a] = key;
    if (!inst.valid_node(i) || !inst.valid_node(j) || a < 0 ||
        a >= static_cast<AssetId>(inst.assets.size())) {
      flag("multiplier references unknown node or asset");
      continue;
    }
    if (!inst.is_neighbor(i, j) || !inst.in_send(i, a) || !inst.in_recv(j, a))
      flag("multiplier on inadmissible transfer " + std::to_string(i) + "->" +
           std::to_string(j) + ", asset " + inst.asset_name(a));
    if (!(rate > 0.0))
      flag("non-positive multiplier on " + std::to_string(i) + "->" + std::to_string(j) +
           ", asset " + inst.asset_name(a));
  }

  return result;
}

bool admissible(const Instance& inst, NodeId i, NodeId j, AssetId a) {
  if (!inst.valid_node(i) || !inst.valid_node(j))
    throw std::invalid_argument("admissible: unknown node id");
  if (a < 0 || a >= static_cast<AssetId>(inst.assets.size()))
    throw std::invalid_argument("admissible: unknown asset id");
  return inst.is_neighbor(i, j) && inst.in_send(i, a) && inst.in_recv(j, a);
}

// ---------------------------------------------------------------------------
// Random generation

namespace {

// Bounded draws via modulo keep generated instances stable across standard
// libraries (std::uniform_int_distribution is implementation-defined).
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  std::uint64_t next() { return engine(); }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::string asset_label(int index, int total) {
  int width = 1;
  for (int v = total - 1; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  return "a" + std::string(static_cast<size_t>(width) - digits.size(), '0') + digits;
}

}  // namespace

Instance generate_random(const GeneratorParams& p) {
  if (p.node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  if (p.asset_count < 1) throw std::invalid_argument("asset_count must be >= 1");
  if (!(p.edge_density > 0.0 && p.edge_density <= 1.0))
    throw std::invalid_argument("edge_density must be in (0, 1]");
  if (p.min_assets_per_side < 1 || p.max_assets_per_side < p.min_assets_per_side)
    throw std::invalid_argument("assets_per_side range is empty");
  if (2 * p.min_assets_per_side > p.asset_count)
    throw std::invalid_argument("asset_count too small for disjoint send/receive sets");
  auto check_range = [](Units lo, Units hi, const char* what) {
    if (lo < 0 || hi < lo) throw std::invalid_argument(std::string(what) + " range is empty");
  };
  check_range(p.recv_upper_min, p.recv_upper_max, "recv bound");
  check_range(p.send_upper_min, p.send_upper_max, "send bound");
  check_range(p.node_cap_min, p.node_cap_max, "node cap");
  if (p.lower_bound_probability < 0.0 || p.lower_bound_probability > 1.0)
    throw std::invalid_argument("lower_bound_probability must be in [0, 1]");

  Rng rng(p.seed);
  const int n = p.node_count;

  Instance inst;
  inst.node_count = n;
  inst.assets.reserve(p.asset_count);
  for (int a = 0; a < p.asset_count; ++a) inst.assets.push_back(asset_label(a, p.asset_count));
  inst.neighbors.assign(n + 1, {});
  inst.send_spec.assign(n + 1, {});
  inst.recv_spec.assign(n + 1, {});
  inst.node_cap.assign(n + 1, Bounds{});

  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = i + 1; j <= n; ++j)
      if (rng.unit() < p.edge_density) {
        inst.neighbors[i].push_back(j);
        inst.neighbors[j].push_back(i);
      }
  for (NodeId i = 1; i <= n; ++i) std::sort(inst.neighbors[i].begin(), inst.neighbors[i].end());

  const int per_side_cap = p.asset_count / 2;
  std::vector<AssetId> deck(p.asset_count);
  for (int a = 0; a < p.asset_count; ++a) deck[a] = a;

  for (NodeId i = 1; i <= n; ++i) {
    const int side_max = std::min(p.max_assets_per_side, per_side_cap);
    const int side_min = std::min(p.min_assets_per_side, side_max);
    const int n_send = static_cast<int>(rng.range(side_min, side_max));
    const int n_recv = static_cast<int>(rng.range(side_min, side_max));

    // Fisher-Yates prefix shuffle; first n_send+n_recv entries are distinct.
    for (int k = 0; k < n_send + n_recv; ++k) {
      int swap_with = static_cast<int>(rng.range(k, p.asset_count - 1));
      std::swap(deck[k], deck[swap_with]);
    }
    Units send_total = 0, recv_total = 0;
    for (int k = 0; k < n_send; ++k) {
      Bounds b{0, rng.range(p.send_upper_min, p.send_upper_max)};
      send_total += b.upper;
      inst.send_spec[i].emplace(deck[k], b);
    }
    for (int k = n_send; k < n_send + n_recv; ++k) {
      Bounds b{0, rng.range(p.recv_upper_min, p.recv_upper_max)};
      if (p.lower_bound_probability > 0.0 && rng.unit() < p.lower_bound_probability)
        b.lower = rng.range(1, b.upper);
      recv_total += b.upper;
      inst.recv_spec[i].emplace(deck[k], b);
    }
    Units cap = rng.range(p.node_cap_min, p.node_cap_max);
    inst.node_cap[i] = Bounds{0, std::min({cap, send_total, recv_total})};
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Serialization

ParseError::ParseError(const std::string& msg, int line)
    : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
      line_(line) {}

namespace {

Units get_units(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing ") + key);
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("non-integer bound: ") + key);
  Units u = v.get<Units>();
  if (u < 0) throw ParseError("negative bound");
  return u;
}

NodeId get_node(const json& j, const char* key, int n) {
  if (!j.contains(key)) throw ParseError(std::string("missing ") + key);
  NodeId id = j.at(key).get<NodeId>();
  if (id < 1 || id > n) throw ParseError("node id out of range: " + std::to_string(id));
  return id;
}

AssetId get_asset(const json& j, const char* key, const Instance& inst) {
  if (!j.contains(key)) throw ParseError(std::string("missing ") + key);
  std::string name = j.at(key).get<std::string>();
  auto a = inst.asset_index(name);
  if (!a) throw ParseError("unknown asset: " + name);
  return *a;
}

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) { known = true; break; }
    if (!known)
      throw ParseError(std::string("unknown field in ") + where + ": " + it.key());
  }
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("top-level value must be an object");
  expect_keys(doc,
              {"version", "node_count", "assets", "neighbors", "send", "recv", "node_caps",
               "recv_values", "priorities", "multipliers"},
              "instance");
  if (!doc.contains("node_count")) throw ParseError("missing node_count");
  if (doc.contains("version") && doc.at("version").get<int>() != 1)
    throw ParseError("unsupported version");

  Instance inst;
  inst.node_count = doc.at("node_count").get<int>();
  if (inst.node_count < 1) throw ParseError("node_count must be >= 1");
  const int n = inst.node_count;

  if (!doc.contains("assets")) throw ParseError("missing assets");
  for (const auto& a : doc.at("assets")) inst.assets.push_back(a.get<std::string>());
  std::vector<std::string> sorted = inst.assets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError("duplicate asset name");
  inst.assets = std::move(sorted);

  inst.neighbors.assign(n + 1, {});
  inst.send_spec.assign(n + 1, {});
  inst.recv_spec.assign(n + 1, {});
  inst.node_cap.assign(n + 1, Bounds{});

  if (doc.contains("neighbors")) {
    const json& adj = doc.at("neighbors");
    if (static_cast<int>(adj.size()) != n)
      throw ParseError("neighbors must list exactly node_count adjacency rows");
    for (int i = 1; i <= n; ++i) {
      for (const auto& v : adj.at(i - 1)) {
        NodeId j = v.get<NodeId>();
        if (j < 1 || j > n) throw ParseError("neighbor id out of range: " + std::to_string(j));
        inst.neighbors[i].push_back(j);
      }
      std::sort(inst.neighbors[i].begin(), inst.neighbors[i].end());
    }
  }

  auto read_specs = [&](const char* key, std::vector<std::map<AssetId, Bounds>>& table) {
    if (!doc.contains(key)) return;
    for (const auto& rec : doc.at(key)) {
      expect_keys(rec, {"node", "asset", "lower", "upper"}, key);
      NodeId i = get_node(rec, "node", n);
      AssetId a = get_asset(rec, "asset", inst);
      Bounds b{get_units(rec, "lower"), get_units(rec, "upper")};
      if (!table[i].emplace(a, b).second)
        throw ParseError(std::string("duplicate ") + key + " spec for node " +
                         std::to_string(i) + ", asset " + inst.asset_name(a));
    }
  };
  read_specs("send", inst.send_spec);
  read_specs("recv", inst.recv_spec);

  if (doc.contains("node_caps")) {
    for (const auto& rec : doc.at("node_caps")) {
      expect_keys(rec, {"node", "lower", "upper"}, "node_caps");
      NodeId i = get_node(rec, "node", n);
      inst.node_cap[i] = Bounds{get_units(rec, "lower"), get_units(rec, "upper")};
    }
  }
  if (doc.contains("recv_values")) {
    for (const auto& rec : doc.at("recv_values")) {
      expect_keys(rec, {"node", "asset", "value"}, "recv_values");
      inst.recv_value[{get_node(rec, "node", n), get_asset(rec, "asset", inst)}] =
          rec.at("value").get<double>();
    }
  }
  if (doc.contains("priorities")) {
    for (const auto& rec : doc.at("priorities")) {
      expect_keys(rec, {"node", "value"}, "priorities");
      inst.priority[get_node(rec, "node", n)] = rec.at("value").get<double>();
    }
  }
  if (doc.contains("multipliers")) {
    for (const auto& rec : doc.at("multipliers")) {
      expect_keys(rec, {"from", "to", "asset", "rate"}, "multipliers");
      NodeId i = get_node(rec, "from", n);
      NodeId j = get_node(rec, "to", n);
      AssetId a = get_asset(rec, "asset", inst);
      double rate = rec.at("rate").get<double>();
      if (!(rate > 0.0)) throw ParseError("non-positive multiplier rate");
      inst.multiplier[{i, j, a}] = rate;
    }
  }
  return inst;
}

json instance_to_json(const Instance& inst) {
  json doc;
  doc["version"] = 1;
  doc["node_count"] = inst.node_count;
  doc["assets"] = inst.assets;

  json adj = json::array();
  for (NodeId i = 1; i <= inst.node_count; ++i) adj.push_back(inst.neighbors[i]);
  doc["neighbors"] = adj;

  auto spec_list = [&](const std::vector<std::map<AssetId, Bounds>>& table) {
    json list = json::array();
    for (NodeId i = 1; i <= inst.node_count; ++i)
      for (const auto& [a, b] : table[i])
        list.push_back({{"node", i},
                        {"asset", inst.asset_name(a)},
                        {"lower", b.lower},
                        {"upper", b.upper}});
    return list;
  };
  doc["send"] = spec_list(inst.send_spec);
  doc["recv"] = spec_list(inst.recv_spec);

  json caps = json::array();
  for (NodeId i = 1; i <= inst.node_count; ++i)
    caps.push_back({{"node", i},
                    {"lower", inst.node_cap[i].lower},
                    {"upper", inst.node_cap[i].upper}});
  doc["node_caps"] = caps;

  json values = json::array();
  for (const auto& [key, v] : inst.recv_value)
    values.push_back({{"node", key.first},
                      {"asset", inst.asset_name(key.second)},
                      {"value", canonical_number(v)}});
  doc["recv_values"] = values;

  json prios = json::array();
  for (const auto& [i, v] : inst.priority)
    prios.push_back({{"node", i}, {"value", canonical_number(v)}});
  doc["priorities"] = prios;

  json mults = json::array();
  for (const auto& [key, rate] : inst.multiplier) {
    auto [i, j, a] = key;
    mults.push_back({{"from", i},
                     {"to", j},
                     {"asset", inst.asset_name(a)},
                     {"rate", canonical_number(rate)}});
  }
  doc["multipliers"] = mults;
  return doc;
}

// Text format: one record per line, mirroring the JSON records.
//   version 1 | nodes N | assets X Y Z | edge i j | send i X lo hi |
//   recv i X lo hi | cap i lo hi | value i X v | priority i v | mult i j X r
Instance instance_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  Instance inst;
  bool have_nodes = false;
  std::vector<std::pair<NodeId, NodeId>> edges;

  auto parse_units = [&](const std::string& tok) -> Units {
    Units u = 0;
    try {
      size_t pos = 0;
      u = std::stoll(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("malformed integer: " + tok, lineno);
    }
    if (u < 0) throw ParseError("negative bound", lineno);
    return u;
  };
  auto parse_node = [&](const std::string& tok) -> NodeId {
    NodeId id = 0;
    try {
      id = std::stoi(tok);
    } catch (const std::exception&) {
      throw ParseError("malformed node id: " + tok, lineno);
    }
    if (!have_nodes) throw ParseError("record before nodes line", lineno);
    if (id < 1 || id > inst.node_count)
      throw ParseError("node id out of range: " + tok, lineno);
    return id;
  };
  auto parse_asset = [&](const std::string& tok) -> AssetId {
    auto a = inst.asset_index(tok);
    if (!a) throw ParseError("unknown asset: " + tok, lineno);
    return *a;
  };
  auto parse_real = [&](const std::string& tok) -> double {
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError("malformed number: " + tok, lineno);
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) {
      if (t[0] == '#') break;
      tok.push_back(t);
    }
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto want = [&](size_t count) {
      if (tok.size() != count + 1)
        throw ParseError(kw + " expects " + std::to_string(count) + " fields", lineno);
    };

    if (kw == "version") {
      want(1);
      if (tok[1] != "1") throw ParseError("unsupported version", lineno);
    } else if (kw == "nodes") {
      want(1);
      int n = static_cast<int>(parse_units(tok[1]));
      if (n < 1) throw ParseError("node count must be >= 1", lineno);
      inst.node_count = n;
      inst.neighbors.assign(n + 1, {});
      inst.send_spec.assign(n + 1, {});
      inst.recv_spec.assign(n + 1, {});
      inst.node_cap.assign(n + 1, Bounds{});
      have_nodes = true;
    } else if (kw == "assets") {
      inst.assets.assign(tok.begin() + 1, tok.end());
      std::sort(inst.assets.begin(), inst.assets.end());
      if (std::adjacent_find(inst.assets.begin(), inst.assets.end()) != inst.assets.end())
        throw ParseError("duplicate asset name", lineno);
    } else if (kw == "edge") {
      want(2);
      edges.emplace_back(parse_node(tok[1]), parse_node(tok[2]));
    } else if (kw == "send" || kw == "recv") {
      want(4);
      NodeId i = parse_node(tok[1]);
      AssetId a = parse_asset(tok[2]);
      Bounds b{parse_units(tok[3]), parse_units(tok[4])};
      auto& table = (kw == "send") ? inst.send_spec : inst.recv_spec;
      if (!table[i].emplace(a, b).second)
        throw ParseError("duplicate " + kw + " spec", lineno);
    } else if (kw == "cap") {
      want(3);
      NodeId i = parse_node(tok[1]);
      inst.node_cap[i] = Bounds{parse_units(tok[2]), parse_units(tok[3])};
    } else if (kw == "value") {
      want(3);
      NodeId i = parse_node(tok[1]);
      AssetId a = parse_asset(tok[2]);
      inst.recv_value[{i, a}] = parse_real(tok[3]);
    } else if (kw == "priority") {
      want(2);
      NodeId i = parse_node(tok[1]);
      inst.priority[i] = parse_real(tok[2]);
    } else if (kw == "mult") {
      want(4);
      NodeId i = parse_node(tok[1]);
      NodeId j = parse_node(tok[2]);
      AssetId a = parse_asset(tok[3]);
      double rate = parse_real(tok[4]);
      if (!(rate > 0.0)) throw ParseError("non-positive multiplier rate", lineno);
      inst.multiplier[{i, j, a}] = rate;
    } else {
      throw ParseError("unknown record: " + kw, lineno);
    }
  }
  if (!have_nodes) throw ParseError("missing node_count");

  for (auto [i, j] : edges) {
    inst.neighbors[i].push_back(j);
    inst.neighbors[j].push_back(i);
  }
  for (NodeId i = 1; i <= inst.node_count; ++i) {
    auto& ns = inst.neighbors[i];
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  }
  return inst;
}

std::string real_token(double v) {
  json j = canonical_number(v);
  return j.dump();
}

std::string instance_to_text(const Instance& inst) {
  std::ostringstream out;
  out << "version 1\n";
  out << "nodes " << inst.node_count << "\n";
  out << "assets";
  for (const auto& a : inst.assets) out << ' ' << a;
  out << "\n";
  for (NodeId i = 1; i <= inst.node_count; ++i)
    for (NodeId j : inst.neighbors[i])
      if (i < j) out << "edge " << i << ' ' << j << "\n";
  for (NodeId i = 1; i <= inst.node_count; ++i)
    for (const auto& [a, b] : inst.send_spec[i])
      out << "send " << i << ' ' << inst.asset_name(a) << ' ' << b.lower << ' ' << b.upper
          << "\n";
  for (NodeId i = 1; i <= inst.node_count; ++i)
    for (const auto& [a, b] : inst.recv_spec[i])
      out << "recv " << i << ' ' << inst.asset_name(a) << ' ' << b.lower << ' ' << b.upper
          << "\n";
  for (NodeId i = 1; i <= inst.node_count; ++i)
    out << "cap " << i << ' ' << inst.node_cap[i].lower << ' ' << inst.node_cap[i].upper
        << "\n";
  for (const auto& [key, v] : inst.recv_value)
    out << "value " << key.first << ' ' << inst.asset_name(key.second) << ' '
        << real_token(v) << "\n";
  for (const auto& [i, v] : inst.priority)
    out << "priority " << i << ' ' << real_token(v) << "\n";
  for (const auto& [key, rate] : inst.multiplier) {
    auto [i, j, a] = key;
    out << "mult " << i << ' ' << j << ' ' << inst.asset_name(a) << ' ' << real_token(rate)
        << "\n";
  }
  return out.str();
}

}  // namespace

Instance parse_instance(const std::string& text, Format format) {
  if (format == Format::Text) return instance_from_text(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    return instance_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_instance(const Instance& inst, Format format) {
  if (format == Format::Text) return instance_to_text(inst);
  return instance_to_json(inst).dump(2) + "\n";
}

}  // namespace aep
