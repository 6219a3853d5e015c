#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crn/config.hpp"

namespace crn {

namespace {

// Channel rates, slot length and ETT shared by every preset.
const char* kDefaults = R"(
seed: 1
algorithm: sfp_approx
spectrum:
  channels: 2
  slot_length: 0.5
  lambda: 5
  mu: 2.3809523809523809
phy:
  ett: 0.01
learning:
  temperature: 0.5
run:
  warmup: 20000
  measure: 10000
  checkpoints: 10
)";

// Two flows crossing a three-band deployment. Sources and their outer relays
// share a band; the relays between the flows sit in the middle band and are
// within reach of both sources.
const char* kTwoFlows = R"(
preset: paper_defaults
algorithm: sfp_approx
topology:
  arena: [200, 120]
  radius: 35
  cluster_polygons:
    - [[0, 75], [200, 75], [200, 120], [0, 120]]
    - [[0, 45], [200, 45], [200, 75], [0, 75]]
    - [[0, 0], [200, 0], [200, 45], [0, 45]]
  nodes:
    - {x: 5, y: 85, role: source}
    - {x: 5, y: 35, role: source}
    - {x: 18, y: 60, role: relay}
    - {x: 28, y: 67, role: relay}
    - {x: 28, y: 53, role: relay}
    - {x: 30, y: 95, role: relay}
    - {x: 30, y: 25, role: relay}
    - {x: 52, y: 88, role: relay}
    - {x: 52, y: 32, role: relay}
    - {x: 82, y: 95, role: relay}
    - {x: 82, y: 25, role: relay}
    - {x: 112, y: 95, role: relay}
    - {x: 112, y: 25, role: relay}
    - {x: 142, y: 95, role: relay}
    - {x: 142, y: 25, role: relay}
    - {x: 172, y: 95, role: sink}
    - {x: 172, y: 25, role: sink}
flows: [[0, 15], [1, 16]]
learning:
  temperature: 5
run:
  warmup: 20000
  measure: 10000
)";

const char* kRandomArena = R"(
preset: paper_defaults
topology:
  arena: [250, 250]
  radius: 35
  clusters: 3
  relays: 100
  flows: 8
  min_flow_distance: 100
run:
  warmup: 20000
  measure: 10000
)";

const char* kAttacks = R"(
preset: random_arena
topology:
  flows: 4
adversary:
  per_source: 1
  sh_scale: 1
  rpu: true
learning:
  temperature: 0.01
trust:
  enabled: false
  p_ack: 0.05
)";

const std::map<std::string, const char*>& table() {
  static const std::map<std::string, const char*> presets{
      {"paper_defaults", kDefaults},
      {"two_flows", kTwoFlows},
      {"random_arena", kRandomArena},
      {"attacks", kAttacks},
  };
  return presets;
}

}  // namespace

std::optional<std::string> preset_text(const std::string& name) {
  const auto& t = table();
  auto it = t.find(name);
  if (it == t.end()) return std::nullopt;
  return std::string(it->second);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : table()) out.push_back(name);
  return out;
}

}  // namespace crn
