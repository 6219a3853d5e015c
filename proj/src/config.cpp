#include "crn/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace crn {

namespace {

std::string where(const YAML::Node& node, const std::string& origin) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return origin;
  return origin + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& origin, const std::string& msg) {
  throw ConfigError(where(node, origin) + ": " + msg);
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& section,
                const std::string& origin) {
  if (!map.IsMap()) fail(map, origin, "'" + section + "' must be a mapping");
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(kv.first, origin, "unknown key '" + key + "' in " + section + " (expected one of: " + list + ")");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& name, const std::string& origin) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, origin, "'" + name + "' has an invalid value");
  }
}

template <typename T>
void read(const YAML::Node& map, const char* key, T& out, const std::string& origin) {
  if (const YAML::Node n = map[key]) out = scalar<T>(n, key, origin);
}

void read_matrix(const YAML::Node& map, const char* key, std::vector<std::vector<double>>& out,
                 const std::string& origin) {
  const YAML::Node n = map[key];
  if (!n) return;
  if (!n.IsSequence()) fail(n, origin, std::string("'") + key + "' must be a list of lists");
  out.clear();
  for (const auto& row : n) {
    if (!row.IsSequence()) fail(row, origin, std::string("'") + key + "' rows must be lists");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(scalar<double>(v, key, origin));
    out.push_back(std::move(r));
  }
}

// Overlays `over` on `base`: mappings merge key by key, anything else replaces.
YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!base.IsMap() || !over.IsMap()) return over;
  YAML::Node out(YAML::NodeType::Map);
  for (const auto& kv : base) out[kv.first.as<std::string>()] = kv.second;
  for (const auto& kv : over) {
    const std::string key = kv.first.as<std::string>();
    out[key] = out[key] ? merge(out[key], kv.second) : kv.second;
  }
  return out;
}

void check_schema(const YAML::Node& root, const std::string& origin) {
  check_keys(root,
             {"preset", "seed", "algorithm", "spectrum", "topology", "flows", "phy", "learning",
              "trust", "adversary", "run"},
             "the top level", origin);
  if (root["spectrum"])
    check_keys(root["spectrum"], {"channels", "slot_length", "lambda", "mu", "cluster_lambda", "cluster_mu"},
               "spectrum", origin);
  if (root["topology"])
    check_keys(root["topology"],
               {"arena", "radius", "clusters", "cluster_polygons", "nodes", "relays", "flows",
                "min_flow_distance", "max_attempts"},
               "topology", origin);
  if (root["phy"]) check_keys(root["phy"], {"ett", "packet_bits", "rate", "error_rate"}, "phy", origin);
  if (root["learning"])
    check_keys(root["learning"],
               {"temperature", "alpha_exponent", "beta_exponent", "gamma_near", "gamma_far",
                "min_gamma_spacing", "explore_floor", "explore_exponent", "state_limit"},
               "learning", origin);
  if (root["trust"]) check_keys(root["trust"], {"enabled", "p_ack", "temperature"}, "trust", origin);
  if (root["adversary"])
    check_keys(root["adversary"], {"ids", "per_source", "sh_scale", "rpu", "temperature", "rpu_weight"},
               "adversary", origin);
  if (root["run"])
    check_keys(root["run"], {"warmup", "measure", "checkpoints", "flow_window", "snapshot"}, "run", origin);
  const YAML::Node topology = root["topology"];
  if (const YAML::Node nodes = topology ? topology["nodes"] : topology) {
    if (!nodes.IsSequence()) fail(nodes, origin, "'topology.nodes' must be a list");
    for (const auto& n : nodes) check_keys(n, {"x", "y", "role", "cluster"}, "a node entry", origin);
  }
}

ExperimentConfig from_yaml(const YAML::Node& root, const std::string& origin) {
  ExperimentConfig c;
  read(root, "preset", c.preset, origin);
  read(root, "seed", c.seed, origin);
  if (const YAML::Node a = root["algorithm"]) {
    const auto alg = parse_algorithm(scalar<std::string>(a, "algorithm", origin));
    if (!alg) fail(a, origin, "algorithm must be sfp_exact, sfp_approx or baseline_ocr_ctt");
    c.algorithm = *alg;
  }
  if (const YAML::Node s = root["spectrum"]) {
    read(s, "channels", c.spectrum.channels, origin);
    read(s, "slot_length", c.spectrum.slot_length, origin);
    read(s, "lambda", c.spectrum.lambda, origin);
    read(s, "mu", c.spectrum.mu, origin);
    read_matrix(s, "cluster_lambda", c.spectrum.cluster_lambda, origin);
    read_matrix(s, "cluster_mu", c.spectrum.cluster_mu, origin);
    if (s["lambda"] && !(c.spectrum.lambda > 0.0)) fail(s["lambda"], origin, "lambda must be positive");
    if (s["mu"] && !(c.spectrum.mu > 0.0)) fail(s["mu"], origin, "mu must be positive");
  }
  if (const YAML::Node t = root["topology"]) {
    if (const YAML::Node a = t["arena"]) {
      if (!a.IsSequence() || a.size() != 2) fail(a, origin, "'arena' must be [width, height]");
      c.topology.arena_width = scalar<double>(a[0], "arena", origin);
      c.topology.arena_height = scalar<double>(a[1], "arena", origin);
    }
    read(t, "radius", c.topology.radius, origin);
    read(t, "clusters", c.topology.clusters, origin);
    read(t, "relays", c.topology.relays, origin);
    read(t, "flows", c.topology.flows, origin);
    read(t, "min_flow_distance", c.topology.min_flow_distance, origin);
    read(t, "max_attempts", c.topology.max_attempts, origin);
    if (const YAML::Node polys = t["cluster_polygons"]) {
      c.topology.cluster_polygons.clear();
      for (const auto& poly : polys) {
        std::vector<Vec2> pts;
        for (const auto& p : poly) {
          if (!p.IsSequence() || p.size() != 2) fail(p, origin, "polygon vertices must be [x, y]");
          pts.push_back({scalar<double>(p[0], "x", origin), scalar<double>(p[1], "y", origin)});
        }
        c.topology.cluster_polygons.push_back(std::move(pts));
      }
    }
    if (const YAML::Node nodes = t["nodes"]) {
      c.topology.nodes.clear();
      for (const auto& n : nodes) {
        NodeConfig nc;
        read(n, "x", nc.x, origin);
        read(n, "y", nc.y, origin);
        if (const YAML::Node r = n["role"]) {
          const auto role = parse_role(scalar<std::string>(r, "role", origin));
          if (!role) fail(r, origin, "role must be source, relay, sink or malicious_relay");
          nc.role = *role;
        }
        if (const YAML::Node q = n["cluster"]) nc.cluster = scalar<int>(q, "cluster", origin);
        c.topology.nodes.push_back(nc);
      }
    }
  }
  if (const YAML::Node f = root["flows"]) {
    if (!f.IsSequence()) fail(f, origin, "'flows' must be a list of [source, sink] pairs");
    c.flows.clear();
    for (const auto& pair : f) {
      if (!pair.IsSequence() || pair.size() != 2) fail(pair, origin, "a flow must be [source, sink]");
      c.flows.emplace_back(scalar<int>(pair[0], "flow source", origin), scalar<int>(pair[1], "flow sink", origin));
    }
  }
  if (const YAML::Node p = root["phy"]) {
    if (const YAML::Node e = p["ett"]) {
      if (e.IsNull()) {
        c.phy.fixed_ett.reset();
      } else {
        c.phy.fixed_ett = scalar<double>(e, "ett", origin);
      }
    }
    read(p, "packet_bits", c.phy.packet_bits, origin);
    read(p, "rate", c.phy.rate, origin);
    if (const YAML::Node e = p["error_rate"]) {
      c.phy.error_rate.clear();
      for (const auto& v : e) c.phy.error_rate.push_back(scalar<double>(v, "error_rate", origin));
    }
  }
  if (const YAML::Node l = root["learning"]) {
    read(l, "temperature", c.learning.temperature, origin);
    read(l, "alpha_exponent", c.learning.band.alpha_exponent, origin);
    read(l, "beta_exponent", c.learning.band.beta_exponent, origin);
    read(l, "gamma_near", c.learning.band.gamma_near, origin);
    read(l, "gamma_far", c.learning.band.gamma_far, origin);
    read(l, "min_gamma_spacing", c.learning.band.min_spacing, origin);
    read(l, "explore_floor", c.learning.explore_floor, origin);
    read(l, "explore_exponent", c.learning.explore_exponent, origin);
    read(l, "state_limit", c.learning.state_limit, origin);
  }
  if (const YAML::Node t = root["trust"]) {
    read(t, "enabled", c.trust.enabled, origin);
    read(t, "p_ack", c.trust.p_ack, origin);
    read(t, "temperature", c.trust.temperature, origin);
  }
  if (const YAML::Node a = root["adversary"]) {
    if (const YAML::Node ids = a["ids"]) {
      c.adversary.ids.clear();
      for (const auto& v : ids) c.adversary.ids.push_back(scalar<int>(v, "adversary id", origin));
    }
    read(a, "per_source", c.adversary.per_source, origin);
    read(a, "sh_scale", c.adversary.sh_scale, origin);
    read(a, "rpu", c.adversary.rpu, origin);
    read(a, "temperature", c.adversary.temperature, origin);
    read(a, "rpu_weight", c.adversary.rpu_weight, origin);
    if (a["sh_scale"] && !(c.adversary.sh_scale >= 1.0)) fail(a["sh_scale"], origin, "sh_scale must be at least 1");
  }
  if (const YAML::Node r = root["run"]) {
    read(r, "warmup", c.run.warmup, origin);
    read(r, "measure", c.run.measure, origin);
    read(r, "checkpoints", c.run.checkpoints, origin);
    read(r, "flow_window", c.run.flow_window, origin);
    if (const YAML::Node s = r["snapshot"]) {
      const std::string v = scalar<std::string>(s, "snapshot", origin);
      if (v != "sources" && v != "all") fail(s, origin, "snapshot must be 'sources' or 'all'");
      c.run.snapshot_all = v == "all";
    }
  }
  return c;
}

YAML::Node load(const std::string& text, const std::string& origin) {
  try {
    YAML::Node n = YAML::Load(text);
    if (n.IsNull()) return YAML::Node(YAML::NodeType::Map);
    return n;
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
}

YAML::Node expand(const std::string& text, const std::string& origin, int depth = 0) {
  if (depth > 8) throw ConfigError(origin + ": preset chain too deep");
  YAML::Node root = load(text, origin);
  if (!root.IsMap()) fail(root, origin, "a config must be a mapping");
  check_schema(root, origin);
  if (const YAML::Node p = root["preset"]) {
    const std::string name = scalar<std::string>(p, "preset", origin);
    const auto base = preset_text(name);
    if (!base) fail(p, origin, "unknown preset '" + name + "'");
    YAML::Node merged = merge(expand(*base, "preset:" + name, depth + 1), root);
    merged["preset"] = name;
    return merged;
  }
  return root;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

YAML::Node at_path(YAML::Node root, const std::string& dotted) {
  YAML::Node cur = root;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty override key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur[parts[i]]) cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
    cur.reset(cur[parts[i]]);
  }
  return cur[parts.back()];
}

}  // namespace

void validate(const ExperimentConfig& c) {
  auto bad = [](const std::string& m) { throw ConfigError(m); };
  if (c.spectrum.channels < 1) bad("spectrum.channels must be at least 1");
  if (!(c.spectrum.slot_length > 0.0)) bad("spectrum.slot_length must be positive");
  if (!(c.spectrum.lambda > 0.0) || !(c.spectrum.mu > 0.0)) bad("spectrum rates must be positive");
  auto check_rates = [&](const std::vector<std::vector<double>>& m, const char* name) {
    if (m.empty()) return;
    const int q = c.topology.cluster_polygons.empty() ? c.topology.clusters
                                                      : static_cast<int>(c.topology.cluster_polygons.size());
    if (static_cast<int>(m.size()) != q) bad(std::string("spectrum.") + name + " needs one row per cluster");
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != c.spectrum.channels)
        bad(std::string("spectrum.") + name + " rows need one entry per channel");
      for (double v : row)
        if (!(v > 0.0)) bad(std::string("spectrum.") + name + " entries must be positive");
    }
  };
  check_rates(c.spectrum.cluster_lambda, "cluster_lambda");
  check_rates(c.spectrum.cluster_mu, "cluster_mu");
  if (c.topology.clusters < 1) bad("topology.clusters must be at least 1");
  if (!(c.topology.radius > 0.0)) bad("topology.radius must be positive");
  if (!(c.topology.arena_width > 0.0) || !(c.topology.arena_height > 0.0)) bad("topology.arena must be positive");
  const int n = static_cast<int>(c.topology.nodes.size());
  if (n > 0) {
    if (c.flows.empty()) bad("an explicit node list needs explicit flows");
    for (const auto& [s, t] : c.flows)
      if (s < 0 || s >= n || t < 0 || t >= n)
        bad("flow [" + std::to_string(s) + ", " + std::to_string(t) + "] references an unknown node");
    for (int id : c.adversary.ids)
      if (id < 0 || id >= n || (c.topology.nodes[id].role != Role::relay &&
                                c.topology.nodes[id].role != Role::malicious_relay))
        bad("adversary id " + std::to_string(id) + " is not a relay");
    for (const auto& node : c.topology.nodes)
      if (node.cluster && (*node.cluster < 0 || *node.cluster >= c.topology.clusters))
        bad("node cluster outside 0.." + std::to_string(c.topology.clusters - 1));
  } else {
    if (!c.flows.empty()) bad("explicit flows need an explicit node list");
    if (!c.adversary.ids.empty()) bad("adversary.ids needs an explicit node list");
    if (c.topology.relays < 0 || c.topology.flows < 0) bad("topology counts must be non-negative");
  }
  if (c.phy.fixed_ett && !(*c.phy.fixed_ett > 0.0)) bad("phy.ett must be positive");
  if (!c.phy.fixed_ett && (!(c.phy.rate > 0.0) || !(c.phy.packet_bits > 0.0)))
    bad("phy.rate and phy.packet_bits must be positive");
  for (double pe : c.phy.error_rate)
    if (!(pe >= 0.0 && pe < 1.0)) bad("phy.error_rate entries must lie in [0, 1)");
  if (!(c.learning.temperature >= 0.0)) bad("learning.temperature must be non-negative");
  if (!(c.learning.explore_floor >= 0.0 && c.learning.explore_floor <= 1.0)) bad("learning.explore_floor must lie in [0, 1]");
  if (!(c.trust.p_ack >= 0.0 && c.trust.p_ack <= 1.0)) bad("trust.p_ack must lie in [0, 1]");
  if (!(c.trust.temperature >= 0.0)) bad("trust.temperature must be non-negative");
  try {
    validate(c.adversary);
    make_rate_schedules(1, c.learning.band);
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  if (c.run.warmup < 0 || c.run.measure < 0) bad("run windows must be non-negative");
  if (c.run.checkpoints < 0) bad("run.checkpoints must be non-negative");
  if (c.run.flow_window < 1) bad("run.flow_window must be at least 1");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig c = from_yaml(expand(text, origin), origin);
  validate(c);
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream o;
  if (!c.preset.empty()) o << "preset: " << c.preset << "\n";
  o << "seed: " << c.seed << "\n";
  o << "algorithm: " << algorithm_name(c.algorithm) << "\n";
  o << "spectrum:\n"
    << "  channels: " << c.spectrum.channels << "\n"
    << "  slot_length: " << num(c.spectrum.slot_length) << "\n"
    << "  lambda: " << num(c.spectrum.lambda) << "\n"
    << "  mu: " << num(c.spectrum.mu) << "\n";
  auto matrix = [&](const char* name, const std::vector<std::vector<double>>& m) {
    o << "  " << name << ": [";
    for (std::size_t i = 0; i < m.size(); ++i) o << (i ? ", " : "") << list(m[i]);
    o << "]\n";
  };
  matrix("cluster_lambda", c.spectrum.cluster_lambda);
  matrix("cluster_mu", c.spectrum.cluster_mu);
  o << "topology:\n"
    << "  arena: [" << num(c.topology.arena_width) << ", " << num(c.topology.arena_height) << "]\n"
    << "  radius: " << num(c.topology.radius) << "\n"
    << "  clusters: " << c.topology.clusters << "\n"
    << "  cluster_polygons: [";
  for (std::size_t i = 0; i < c.topology.cluster_polygons.size(); ++i) {
    o << (i ? ", " : "") << "[";
    const auto& poly = c.topology.cluster_polygons[i];
    for (std::size_t j = 0; j < poly.size(); ++j) o << (j ? ", " : "") << "[" << num(poly[j].x) << ", " << num(poly[j].y) << "]";
    o << "]";
  }
  o << "]\n"
    << "  relays: " << c.topology.relays << "\n"
    << "  flows: " << c.topology.flows << "\n"
    << "  min_flow_distance: " << num(c.topology.min_flow_distance) << "\n"
    << "  max_attempts: " << c.topology.max_attempts << "\n"
    << "  nodes:";
  if (c.topology.nodes.empty()) o << " []";
  o << "\n";
  for (const auto& n : c.topology.nodes) {
    o << "    - {x: " << num(n.x) << ", y: " << num(n.y) << ", role: " << role_name(n.role);
    if (n.cluster) o << ", cluster: " << *n.cluster;
    o << "}\n";
  }
  o << "flows: [";
  for (std::size_t i = 0; i < c.flows.size(); ++i)
    o << (i ? ", " : "") << "[" << c.flows[i].first << ", " << c.flows[i].second << "]";
  o << "]\n";
  o << "phy:\n"
    << "  ett: " << (c.phy.fixed_ett ? num(*c.phy.fixed_ett) : std::string("null")) << "\n"
    << "  packet_bits: " << num(c.phy.packet_bits) << "\n"
    << "  rate: " << num(c.phy.rate) << "\n"
    << "  error_rate: " << list(c.phy.error_rate) << "\n";
  o << "learning:\n"
    << "  temperature: " << num(c.learning.temperature) << "\n"
    << "  alpha_exponent: " << num(c.learning.band.alpha_exponent) << "\n"
    << "  beta_exponent: " << num(c.learning.band.beta_exponent) << "\n"
    << "  gamma_near: " << num(c.learning.band.gamma_near) << "\n"
    << "  gamma_far: " << num(c.learning.band.gamma_far) << "\n"
    << "  min_gamma_spacing: " << num(c.learning.band.min_spacing) << "\n"
    << "  explore_floor: " << num(c.learning.explore_floor) << "\n"
    << "  explore_exponent: " << num(c.learning.explore_exponent) << "\n"
    << "  state_limit: " << c.learning.state_limit << "\n";
  o << "trust:\n"
    << "  enabled: " << (c.trust.enabled ? "true" : "false") << "\n"
    << "  p_ack: " << num(c.trust.p_ack) << "\n"
    << "  temperature: " << num(c.trust.temperature) << "\n";
  o << "adversary:\n  ids: [";
  for (std::size_t i = 0; i < c.adversary.ids.size(); ++i) o << (i ? ", " : "") << c.adversary.ids[i];
  o << "]\n"
    << "  per_source: " << c.adversary.per_source << "\n"
    << "  sh_scale: " << num(c.adversary.sh_scale) << "\n"
    << "  rpu: " << (c.adversary.rpu ? "true" : "false") << "\n"
    << "  temperature: " << num(c.adversary.temperature) << "\n"
    << "  rpu_weight: " << num(c.adversary.rpu_weight) << "\n";
  o << "run:\n"
    << "  warmup: " << c.run.warmup << "\n"
    << "  measure: " << c.run.measure << "\n"
    << "  checkpoints: " << c.run.checkpoints << "\n"
    << "  flow_window: " << c.run.flow_window << "\n"
    << "  snapshot: " << (c.run.snapshot_all ? "all" : "sources") << "\n";
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.seed = 0;
  c.preset.clear();
  return fnv1a(serialize(c));
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  ExperimentConfig base = config;
  base.preset.clear();
  YAML::Node root = load(serialize(base), "<override>");
  YAML::Node target = at_path(root, key);
  target = load(value, "<override " + key + ">");
  std::ostringstream out;
  out << root;
  ExperimentConfig next = parse_config_text(out.str(), "<override " + key + ">");
  next.preset = config.preset;
  config = std::move(next);
}

Scenario build_scenario(const ExperimentConfig& c) {
  validate(c);
  const int q = c.topology.cluster_polygons.empty() ? c.topology.clusters
                                                    : static_cast<int>(c.topology.cluster_polygons.size());
  std::vector<std::vector<ChannelParams>> rates(q, std::vector<ChannelParams>(c.spectrum.channels,
                                                                              {c.spectrum.lambda, c.spectrum.mu}));
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < c.spectrum.channels; ++k) {
      if (!c.spectrum.cluster_lambda.empty()) rates[i][k].lambda = c.spectrum.cluster_lambda[i][k];
      if (!c.spectrum.cluster_mu.empty()) rates[i][k].mu = c.spectrum.cluster_mu[i][k];
    }
  SpectrumModel spectrum(c.spectrum.slot_length, rates);

  ClusterLayout layout;
  layout.count = q;
  layout.arena_width = c.topology.arena_width;
  layout.arena_height = c.topology.arena_height;
  layout.polygons = c.topology.cluster_polygons;

  std::optional<NetworkTopology> topo;
  if (!c.topology.nodes.empty()) {
    std::vector<NodeRecord> nodes;
    for (std::size_t i = 0; i < c.topology.nodes.size(); ++i) {
      const NodeConfig& nc = c.topology.nodes[i];
      const Vec2 p{nc.x, nc.y};
      nodes.push_back({static_cast<int>(i), p, nc.role, nc.cluster ? *nc.cluster : layout.cluster_of(p)});
    }
    for (int id : c.adversary.ids) nodes[id].role = Role::malicious_relay;
    std::vector<Flow> flows;
    for (std::size_t i = 0; i < c.flows.size(); ++i)
      flows.push_back({static_cast<int>(i), c.flows[i].first, c.flows[i].second});
    topo.emplace(std::move(nodes), c.topology.radius, c.spectrum.channels, q, std::move(flows));
  } else {
    GeneratorSpec g;
    g.arena_width = c.topology.arena_width;
    g.arena_height = c.topology.arena_height;
    g.relays = c.topology.relays;
    g.flows = c.topology.flows;
    g.radius = c.topology.radius;
    g.channels = c.spectrum.channels;
    g.layout = layout;
    g.min_flow_distance = c.topology.min_flow_distance;
    g.malicious_per_source = c.adversary.per_source;
    g.max_attempts = c.topology.max_attempts;
    Rng rng = Rng::derive(c.seed, "topology");
    topo.emplace(generate_topology(g, rng));
  }

  EngineOptions o;
  o.algorithm = c.algorithm;
  o.seed = c.seed;
  o.temperature = c.learning.temperature;
  o.band = c.learning.band;
  o.explore_floor = c.learning.explore_floor;
  o.explore_exponent = c.learning.explore_exponent;
  o.state_limit = c.learning.state_limit;
  o.trust = c.trust.enabled;
  o.p_ack = c.trust.p_ack;
  o.trust_temperature = c.trust.temperature;
  o.adversary = c.adversary;
  o.flow_window = c.run.flow_window;
  o.warmup = c.run.warmup;
  o.measure = c.run.measure;
  o.checkpoints = c.run.checkpoints;
  o.snapshot_all = c.run.snapshot_all;
  return Scenario{std::move(*topo), std::move(spectrum), c.phy, o};
}

RunResults run_experiment(const ExperimentConfig& config) {
  Scenario s = build_scenario(config);
  Simulation sim(std::move(s.topology), std::move(s.spectrum), std::move(s.phy), s.options);
  return sim.run();
}

}  // namespace crn
