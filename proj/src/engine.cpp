#include "crn/engine.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>
#include <string>

namespace crn {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::sfp_exact: return "sfp_exact";
    case Algorithm::sfp_approx: return "sfp_approx";
    case Algorithm::baseline_ocr_ctt: return "baseline_ocr_ctt";
  }
  return "sfp_approx";
}

std::optional<Algorithm> parse_algorithm(const std::string& text) {
  if (text == "sfp_exact") return Algorithm::sfp_exact;
  if (text == "sfp_approx") return Algorithm::sfp_approx;
  if (text == "baseline_ocr_ctt") return Algorithm::baseline_ocr_ctt;
  return std::nullopt;
}

double mean_delay(const std::vector<PacketRecord>& packets) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& p : packets)
    if (p.delivered) {
      sum += p.delay;
      ++count;
    }
  return count ? sum / static_cast<double>(count) : 0.0;
}

namespace {

struct Probe {
  int agent;
  std::uint64_t request;
  Slot issued;
};

struct Packet {
  std::int64_t id = 0;
  int flow = 0;
  int sink = 0;
  Slot created = 0;
  Slot last_hop = -1;
  std::vector<Probe> probes;
};

struct Agent {
  int node = 0;
  int sink = 0;
  int sink_index = 0;
  PlayerRole role = PlayerRole::normal;
  int rank = 1;
  const std::vector<Action>* actions = nullptr;
  std::vector<int> next_agent;  // per action; -1 is the sink
  LearnerState learner;
  std::optional<TrustState> trust;
  std::int64_t trust_slots = 0;

  // Per-slot scratch.
  std::uint64_t key = 0;
  StateTable* table = nullptr;
  int action = 0;
  bool transmitting = false;
  double local = 0.0;
  double path = 0.0;
  Eigen::VectorXd reports;

  Agent(int actions, double temperature, PlayerRole r) : role(r), learner(actions, temperature, r) {}
};

}  // namespace

struct Simulation::Impl {
  NetworkTopology topo;
  SpectrumModel spectrum;
  LinkPhyParams phy;
  EngineOptions opt;

  std::vector<ClusterSpectrumState> clusters;
  std::vector<int> sinks;
  std::vector<RoutingGraph> graphs;
  std::vector<Agent> agents;
  std::vector<std::vector<int>> agent_of;   // [sink index][node]
  std::vector<std::vector<int>> path_order; // per sink: agents nearest the sink first
  RateSchedule rates;
  bool full_state = true;
  std::vector<std::vector<int>> node_clusters;
  std::vector<std::uint64_t> node_key;

  std::vector<std::deque<Packet>> queues;
  std::vector<std::uint8_t> flow_active;
  std::vector<int> outstanding;  // per flow: packets in the network
  Rng rng_spectrum, rng_policy, rng_mac, rng_trust;
  std::unique_ptr<OcrCttRouter> router;

  Slot n = 0;
  std::int64_t next_packet = 0;
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::vector<PacketRecord> deliveries;
  std::vector<Probe> acks_due;
  std::vector<double> ack_delay_due;

  std::vector<std::int64_t> malicious_hits;
  std::vector<std::int64_t> measured_plays;

  std::vector<Slot> checkpoint_slots;
  std::vector<double> recent_residual;  // ring of per-slot residuals
  std::vector<double> residuals;
  std::vector<StrategyRecord> strategies;

  Impl(NetworkTopology t, SpectrumModel s, LinkPhyParams p, EngineOptions o)
      : topo(std::move(t)),
        spectrum(std::move(s)),
        phy(std::move(p)),
        opt(std::move(o)),
        rng_spectrum(Rng::derive(opt.seed, "spectrum")),
        rng_policy(Rng::derive(opt.seed, "policy")),
        rng_mac(Rng::derive(opt.seed, "mac")),
        rng_trust(Rng::derive(opt.seed, "trust")) {
    if (topo.clusters() != spectrum.clusters())
      throw ParameterError("topology has " + std::to_string(topo.clusters()) +
                           " clusters but the spectrum model has " + std::to_string(spectrum.clusters()));
    if (topo.channels() != spectrum.channels())
      throw ParameterError("topology and spectrum disagree on the channel count");
    validate(opt.adversary);
    for (int q = 0; q < spectrum.clusters(); ++q)
      clusters.push_back(initial_cluster_state(q, spectrum.cluster_params(q), rng_spectrum));

    const int nn = topo.size();
    queues.assign(nn, {});
    std::map<int, int> sources_per_node;
    for (const Flow& f : topo.flows())
      if (++sources_per_node[f.source] > 1)
        throw TopologyError("node " + std::to_string(f.source) + " is the source of several flows");

    sinks = topo.sinks();
    const int bits = topo.clusters() * topo.channels();
    full_state = bits < 56 && (std::uint64_t{1} << bits) * static_cast<std::uint64_t>(topo.channels()) <= opt.state_limit;
    node_clusters.assign(nn, {});
    for (int v = 0; v < nn; ++v) {
      auto& cs = node_clusters[v];
      cs.push_back(topo.node(v).cluster_id);
      for (int u : topo.neighbors(v)) cs.push_back(topo.node(u).cluster_id);
      std::sort(cs.begin(), cs.end());
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    }
    node_key.assign(nn, 0);

    flow_active.assign(topo.flows().size(), 1);
    int max_rank = 1;
    for (std::size_t si = 0; si < sinks.size(); ++si) {
      graphs.emplace_back(topo, sinks[si]);
      const RoutingGraph& g = graphs.back();
      std::vector<int> sources;
      for (std::size_t fi = 0; fi < topo.flows().size(); ++fi) {
        const Flow& f = topo.flows()[fi];
        if (f.sink != sinks[si]) continue;
        if (!g.reaches_sink(f.source)) {
          flow_active[fi] = 0;
          std::cerr << "flow " << f.id << ": source " << f.source
                    << " has no admissible path to sink " << f.sink << "; flow disabled\n";
          continue;
        }
        sources.push_back(f.source);
      }
      for (int v : g.participants(sources)) max_rank = std::max(max_rank, g.hop_rank(v));
    }
    rates = make_rate_schedules(max_rank, opt.band);

    if (opt.algorithm == Algorithm::baseline_ocr_ctt) {
      router = std::make_unique<OcrCttRouter>(topo);
    } else {
      agent_of.assign(sinks.size(), std::vector<int>(nn, -1));
      for (std::size_t si = 0; si < sinks.size(); ++si) {
        const RoutingGraph& g = graphs[si];
        std::vector<int> sources;
        for (std::size_t fi = 0; fi < topo.flows().size(); ++fi)
          if (flow_active[fi] && topo.flows()[fi].sink == sinks[si])
            sources.push_back(topo.flows()[fi].source);
        for (int v : g.participants(sources)) {
          const PlayerRole role = topo.is_malicious(v) ? PlayerRole::malicious : PlayerRole::normal;
          const double temp = role == PlayerRole::normal ? opt.temperature : opt.adversary.temperature;
          Agent a(static_cast<int>(g.actions(v).size()), temp, role);
          a.node = v;
          a.sink = sinks[si];
          a.sink_index = static_cast<int>(si);
          a.rank = std::max(g.hop_rank(v), 1);
          a.actions = &g.actions(v);
          if (opt.trust && opt.algorithm == Algorithm::sfp_approx && role == PlayerRole::normal)
            a.trust.emplace(static_cast<int>(g.actions(v).size()), spectrum.slot_length());
          agent_of[si][v] = static_cast<int>(agents.size());
          agents.push_back(std::move(a));
        }
      }
      for (Agent& a : agents) {
        for (const Action& act : *a.actions)
          a.next_agent.push_back(act.relay == a.sink ? -1 : agent_of[a.sink_index][act.relay]);
        a.reports = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.actions->size()));
      }
      path_order.assign(sinks.size(), {});
      for (std::size_t i = 0; i < agents.size(); ++i) path_order[agents[i].sink_index].push_back(static_cast<int>(i));
      for (std::size_t si = 0; si < sinks.size(); ++si)
        std::sort(path_order[si].begin(), path_order[si].end(), [&](int x, int y) {
          const double dx = topo.distance(agents[x].node, sinks[si]);
          const double dy = topo.distance(agents[y].node, sinks[si]);
          return dx != dy ? dx < dy : agents[x].node < agents[y].node;
        });
    }

    malicious_hits.assign(topo.flows().size(), 0);
    measured_plays.assign(topo.flows().size(), 0);
    outstanding.assign(topo.flows().size(), 0);
    const Slot total = opt.warmup + opt.measure;
    for (int c = 1; c <= opt.checkpoints; ++c)
      checkpoint_slots.push_back(std::max<Slot>(0, (total * c) / opt.checkpoints - 1));
    recent_residual.assign(1000, 0.0);
  }

  std::size_t flow_index(int flow_id) const {
    for (std::size_t fi = 0; fi < topo.flows().size(); ++fi)
      if (topo.flows()[fi].id == flow_id) return fi;
    throw std::logic_error("unknown flow id");
  }

  int sink_index(int sink) const {
    return static_cast<int>(std::lower_bound(sinks.begin(), sinks.end(), sink) - sinks.begin());
  }

  // Observed bits (cluster-major, channel-minor) times K, plus the sensing
  // phase n mod K. The phase tells which channel was refreshed this slot; the
  // observed vector alone is not Markov under round-robin sensing.
  std::uint64_t key_for(int node) const {
    const int k = topo.channels();
    std::uint64_t bits = 0;
    int shift = 0;
    if (full_state) {
      for (const auto& c : clusters)
        for (int ch = 0; ch < k; ++ch) bits |= std::uint64_t{c.observed_state[ch]} << shift++;
    } else {
      for (int q : node_clusters[node])
        for (int ch = 0; ch < k; ++ch) bits |= std::uint64_t{clusters[q].observed_state[ch]} << shift++;
    }
    return bits * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(n % k);
  }

  double report_of(int agent_index) const {
    const Agent& m = agents[agent_index];
    const double truth = opt.algorithm == Algorithm::sfp_exact ? m.path : m.table->path_estimate;
    return m.role == PlayerRole::malicious ? distort_report(truth, opt.adversary) : truth;
  }

  void step();
  void snapshot(int checkpoint);
};

void Simulation::Impl::step() {
  const double slot_len = spectrum.slot_length();
  for (auto& c : clusters) sense_update(c, n);
  const LinkContext ctx{topo, spectrum, clusters, n, phy};
  const int nn = topo.size();
  if (full_state) {
    const std::uint64_t k = key_for(0);
    std::fill(node_key.begin(), node_key.end(), k);
  } else {
    for (int v = 0; v < nn; ++v) node_key[v] = key_for(v);
  }

  // Sources always have data; a flow injects whenever it is below its window.
  for (std::size_t fi = 0; fi < topo.flows().size(); ++fi) {
    if (!flow_active[fi]) continue;
    const Flow& f = topo.flows()[fi];
    while (outstanding[fi] < opt.flow_window) {
      ++outstanding[fi];
      Packet p;
      p.id = next_packet++;
      p.flow = f.id;
      p.sink = f.sink;
      p.created = n;
      queues[f.source].push_back(std::move(p));
      ++generated;
    }
  }

  // Action selection.
  JointActionView joint(nn);
  std::vector<int> sender_agent(nn, -1);
  const bool learning = opt.algorithm != Algorithm::baseline_ocr_ctt;
  if (learning) {
    for (Agent& a : agents) {
      a.key = node_key[a.node];
      a.table = &a.learner.table(a.key);
      a.transmitting = false;
      const double eps = exploration_rate(a.table->visits + 1, opt.explore_floor, opt.explore_exponent);
      const auto& pi = a.table->strategy;
      a.action = rng_policy.uniform() < eps
                     ? static_cast<int>(rng_policy.below(static_cast<std::size_t>(pi.size())))
                     : static_cast<int>(rng_policy.categorical(std::span<const double>(pi.data(), pi.size())));
    }
    for (int v = 0; v < nn; ++v) {
      if (queues[v].empty()) continue;
      const Packet& head = queues[v].front();
      const int idx = agent_of[sink_index(head.sink)][v];
      if (idx < 0) continue;
      Agent& a = agents[idx];
      a.transmitting = true;
      sender_agent[v] = idx;
      joint.set(v, (*a.actions)[a.action]);
      if (a.trust && rng_trust.bernoulli(opt.p_ack)) {
        const std::uint64_t req = a.trust->issue_request(a.key, a.action, n);
        queues[v].front().probes.push_back({idx, req, n});
      }
    }
  } else {
    std::vector<int> head_flow(nn, -1);
    for (int v = 0; v < nn; ++v)
      if (!queues[v].empty()) head_flow[v] = queues[v].front().flow;
    joint = router->route(ctx, head_flow).joint;
  }

  // Negotiation: indicator products, and a receiver with several valid RTS
  // answers one at random.
  std::vector<std::vector<int>> rts_at(nn);
  for (int v = 0; v < nn; ++v) {
    if (!joint[v]) continue;
    const Action a = *joint[v];
    const auto [s, r] = rts_success_probs(joint, topo, v, a.relay, a.channel);
    if (s * r == 0) continue;
    rts_at[a.relay].push_back(v);
  }

  // Data phase: the link carries a packet only if the channel is truly idle at
  // both ends.
  acks_due.clear();
  ack_delay_due.clear();
  for (int j = 0; j < nn; ++j) {
    if (rts_at[j].empty()) continue;
    const int v = rts_at[j].size() == 1 ? rts_at[j][0] : rts_at[j][rng_mac.below(rts_at[j].size())];
    const Action a = *joint[v];
    const int qv = topo.node(v).cluster_id, qj = topo.node(j).cluster_id;
    if (clusters[qv].true_state[a.channel] != kIdle || clusters[qj].true_state[a.channel] != kIdle) continue;
    Packet p = std::move(queues[v].front());
    queues[v].pop_front();
    p.last_hop = n;
    const double tx = ett(phy, a.channel);
    if (j == p.sink) {
      const double delay = static_cast<double>(n - p.created) * slot_len + tx;
      deliveries.push_back({n, p.flow, delay, true});
      ++delivered;
      --outstanding[flow_index(p.flow)];
      for (const Probe& pr : p.probes) {
        acks_due.push_back(pr);
        ack_delay_due.push_back(static_cast<double>(n - pr.issued) * slot_len + tx);
      }
    } else {
      queues[j].push_back(std::move(p));
    }
  }

  double slot_residual = 0.0;
  if (learning) {
    // Realized local utilities, then reports read before any estimate moves.
    for (Agent& a : agents)
      a.local = local_utility(ctx, joint, a.node, (*a.actions)[a.action], a.sink);
    if (opt.algorithm == Algorithm::sfp_exact) {
      for (const auto& order : path_order)
        for (int idx : order) {
          Agent& a = agents[idx];
          const int next = a.next_agent[a.action];
          a.path = a.local + (next < 0 ? 0.0 : report_of(next));
        }
    } else {
      for (Agent& a : agents)
        for (std::size_t b = 0; b < a.next_agent.size(); ++b)
          a.reports(static_cast<Eigen::Index>(b)) = a.next_agent[b] < 0 ? 0.0 : report_of(a.next_agent[b]);
    }

    for (Agent& a : agents) {
      StateTable& t = *a.table;
      ++t.visits;
      const std::int64_t count = ++t.action_visits[a.action];
      const double signal = opt.algorithm == Algorithm::sfp_exact ? a.path : a.local;
      update_action_value(t, a.action, signal, rates.alpha(count));
    }
    if (opt.algorithm == Algorithm::sfp_approx) {
      std::vector<std::optional<double>> slots;
      for (Agent& a : agents) {
        slots.assign(a.reports.data(), a.reports.data() + a.reports.size());
        ++a.table->path_updates;
        update_path_estimate(*a.table, slots, rates.gamma(a.rank, a.table->visits));
      }
    }
    for (Agent& a : agents) {
      StateTable& t = *a.table;
      const Eigen::VectorXd values =
          opt.algorithm == Algorithm::sfp_exact ? Eigen::VectorXd(t.action_value)
                                                : Eigen::VectorXd(t.action_value + a.reports);
      Eigen::VectorXd br;
      if (a.role == PlayerRole::malicious) {
        Eigen::VectorXd busy;
        if (opt.adversary.rpu) busy = rpu_action_values(ctx, a.node, *a.actions);
        br = malicious_response(values, busy, opt.adversary);
      } else if (a.trust) {
        const double temp = opt.trust_temperature * static_cast<double>(std::max<std::int64_t>(a.trust_slots, 1));
        br = trusted_logit_response(t.action_value, a.reports, a.trust->trust_weights(a.key, temp),
                                    a.learner.temperature());
      } else {
        br = logit_response(values, a.learner.temperature());
      }
      const Eigen::VectorXd before = t.strategy;
      ++t.strategy_updates;
      update_strategy(t, br, rates.beta(t.visits));
      slot_residual = std::max(slot_residual, (t.strategy - before).cwiseAbs().maxCoeff());
    }

    // Trust: ACKs that reached their sink this slot, then this slot's plays.
    for (std::size_t i = 0; i < acks_due.size(); ++i)
      agents[acks_due[i].agent].trust->receive_ack(acks_due[i].request, ack_delay_due[i]);
    for (Agent& a : agents)
      if (a.trust && a.transmitting) a.trust->record_slot(a.key, a.action, std::nullopt, ++a.trust_slots);
  }
  recent_residual[static_cast<std::size_t>(n % static_cast<Slot>(recent_residual.size()))] = slot_residual;

  for (int q = 0; q < spectrum.clusters(); ++q)
    advance_true_states(clusters[q], spectrum.cluster_params(q), slot_len, rng_spectrum);

  // Learners play every slot, so their choice counts whether or not a packet
  // is waiting; the baseline only chooses for packet holders.
  if (n >= opt.warmup) {
    for (std::size_t fi = 0; fi < topo.flows().size(); ++fi) {
      if (!flow_active[fi]) continue;
      const Flow& f = topo.flows()[fi];
      std::optional<Action> played = joint[f.source];
      if (learning) {
        const Agent& a = agents[agent_of[sink_index(f.sink)][f.source]];
        played = (*a.actions)[a.action];
      }
      if (!played) continue;
      ++measured_plays[fi];
      if (topo.is_malicious(played->relay)) ++malicious_hits[fi];
    }
  }
  for (std::size_t c = 0; c < checkpoint_slots.size(); ++c)
    if (checkpoint_slots[c] == n) snapshot(static_cast<int>(c));
  ++n;
}

void Simulation::Impl::snapshot(int checkpoint) {
  residuals.push_back(std::accumulate(recent_residual.begin(), recent_residual.end(), 0.0));
  for (const Agent& a : agents) {
    if (!opt.snapshot_all && topo.node(a.node).role != Role::source) continue;
    std::vector<std::uint64_t> keys;
    for (const auto& [key, table] : a.learner.tables()) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t key : keys) {
      const StateTable& t = *a.learner.find(key);
      for (int b = 0; b < t.actions(); ++b)
        strategies.push_back({checkpoint, a.node, a.sink, key, (*a.actions)[b], t.strategy(b)});
    }
  }
}

Simulation::Simulation(NetworkTopology topology, SpectrumModel spectrum, LinkPhyParams phy,
                       EngineOptions options)
    : impl_(std::make_unique<Impl>(std::move(topology), std::move(spectrum), std::move(phy),
                                   std::move(options))) {}

Simulation::~Simulation() = default;

void Simulation::run_slot() { impl_->step(); }

RunResults Simulation::run() {
  const Slot total = impl_->opt.warmup + impl_->opt.measure;
  while (impl_->n < total) impl_->step();
  return results();
}

Slot Simulation::slot() const { return impl_->n; }
const NetworkTopology& Simulation::topology() const { return impl_->topo; }
std::span<const ClusterSpectrumState> Simulation::clusters() const { return impl_->clusters; }
std::int64_t Simulation::generated() const { return impl_->generated; }
std::int64_t Simulation::delivered() const { return impl_->delivered; }
std::int64_t Simulation::dropped() const { return impl_->dropped; }
const std::vector<PacketRecord>& Simulation::deliveries() const { return impl_->deliveries; }

std::int64_t Simulation::in_flight() const {
  std::int64_t total = 0;
  for (const auto& q : impl_->queues) total += static_cast<std::int64_t>(q.size());
  return total;
}

std::uint64_t Simulation::state_key(int node) const { return impl_->key_for(node); }

const LearnerState* Simulation::learner(int node, int sink) const {
  if (impl_->agent_of.empty()) return nullptr;
  const int si = impl_->sink_index(sink);
  if (si >= static_cast<int>(impl_->sinks.size()) || impl_->sinks[si] != sink) return nullptr;
  const int idx = impl_->agent_of[si].at(node);
  return idx < 0 ? nullptr : &impl_->agents[idx].learner;
}

const TrustState* Simulation::trust(int node, int sink) const {
  if (impl_->agent_of.empty()) return nullptr;
  const int si = impl_->sink_index(sink);
  if (si >= static_cast<int>(impl_->sinks.size()) || impl_->sinks[si] != sink) return nullptr;
  const int idx = impl_->agent_of[si].at(node);
  if (idx < 0 || !impl_->agents[idx].trust) return nullptr;
  return &*impl_->agents[idx].trust;
}

RunResults Simulation::results() const {
  const Impl& s = *impl_;
  RunResults r;
  r.seed = s.opt.seed;
  for (const auto& p : s.deliveries)
    if (p.slot >= s.opt.warmup) r.packets.push_back(p);
  r.strategies = s.strategies;
  r.residuals = s.residuals;
  r.mean_delay = mean_delay(r.packets);
  double freq = 0.0;
  int flows = 0;
  for (std::size_t fi = 0; fi < s.topo.flows().size(); ++fi) {
    if (!s.flow_active[fi]) continue;
    ++flows;
    if (s.measured_plays[fi] > 0)
      freq += static_cast<double>(s.malicious_hits[fi]) / static_cast<double>(s.measured_plays[fi]);
  }
  r.malicious_frequency = flows ? freq / flows : 0.0;
  r.generated = s.generated;
  r.delivered = s.delivered;
  r.in_flight = in_flight();
  r.dropped = s.dropped;
  for (const Agent& a : s.agents)
    for (const auto& entry : a.learner.tables()) r.stale_reports += entry.second.stale_reports;
  if (!s.agent_of.empty()) {
    for (std::size_t fi = 0; fi < s.topo.flows().size(); ++fi) {
      const Flow& f = s.topo.flows()[fi];
      if (!s.flow_active[fi]) continue;
      const int idx = s.agent_of[s.sink_index(f.sink)][f.source];
      if (idx < 0) continue;
      const Agent& a = s.agents[idx];
      SourceMix mix{f.id, f.source, *a.actions, Eigen::VectorXd::Zero(a.learner.actions())};
      double visits = 0.0;
      std::vector<std::uint64_t> keys;
      for (const auto& entry : a.learner.tables()) keys.push_back(entry.first);
      std::sort(keys.begin(), keys.end());
      for (std::uint64_t key : keys) {
        const StateTable& t = *a.learner.find(key);
        mix.mass += static_cast<double>(t.visits) * t.strategy;
        visits += static_cast<double>(t.visits);
      }
      if (visits > 0.0) mix.mass /= visits;
      r.source_mix.push_back(std::move(mix));
    }
  }
  return r;
}

}  // namespace crn
