#pragma once

// Brute-force reference evaluators shared by the unit tests and the acceptance
// binary. They work from raw positions and scalar formulas and never call the
// library's link or spectrum code.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

struct Node {
  double x = 0.0;
  double y = 0.0;
  int cluster = 0;
};

struct Move {
  int relay = -1;
  int channel = -1;
};

struct Channel {
  int observed = 0;  // 0 idle, 1 busy
  long lag = 0;      // slots since the last sensing
};

struct World {
  std::vector<Node> nodes;
  double radius = 35.0;
  double lambda = 5.0;
  double mu = 1.0 / 0.42;
  double slot = 0.5;
  double ett = 0.01;
  std::vector<std::vector<Channel>> clusters;  // [cluster][channel]

  double dist(int a, int b) const { return std::hypot(nodes[a].x - nodes[b].x, nodes[a].y - nodes[b].y); }
  bool near(int a, int b) const { return a != b && dist(a, b) <= radius; }

  // P(idle at t | state s at 0) of the two-state chain.
  double to_idle(int s, double t) const {
    const double sum = lambda + mu;
    const double e = std::exp(-sum * t);
    return s == 0 ? (mu + lambda * e) / sum : (mu - mu * e) / sum;
  }

  double cluster_free(int q, int k) const {
    const Channel& c = clusters[q][k];
    return std::exp(-lambda * slot) * to_idle(c.observed, static_cast<double>(c.lag) * slot);
  }

  double p_free(int i, int j, int k) const {
    const int qi = nodes[i].cluster, qj = nodes[j].cluster;
    return qi == qj ? cluster_free(qi, k) : cluster_free(qi, k) * cluster_free(qj, k);
  }
};

using Joint = std::vector<std::optional<Move>>;

// Sender side: nobody else within i's range uses k.
inline int sender_ok(const World& w, const Joint& joint, int i, int k) {
  int ok = 1;
  for (int m = 0; m < static_cast<int>(w.nodes.size()); ++m)
    if (w.near(i, m) && joint[m] && joint[m]->channel == k) ok *= 0;
  return ok;
}

// Receiver side: nobody within j's range other than i uses k.
inline int receiver_ok(const World& w, const Joint& joint, int i, int j, int k) {
  int ok = 1;
  for (int m = 0; m < static_cast<int>(w.nodes.size()); ++m)
    if (m != i && w.near(j, m) && joint[m] && joint[m]->channel == k) ok *= 0;
  return ok;
}

inline int load(const World& w, const Joint& joint, int i) {
  int total = 0;
  for (int m = 0; m < static_cast<int>(w.nodes.size()); ++m) {
    if (!w.near(i, m) || !joint[m] || joint[m]->relay != i) continue;
    const int k = joint[m]->channel;
    total += sender_ok(w, joint, m, k) * receiver_ok(w, joint, m, i, k);
  }
  return total;
}

inline double delay(const World& w, const Joint& joint, int i) {
  const Move a = *joint[i];
  const int negotiated = sender_ok(w, joint, i, a.channel) * receiver_ok(w, joint, i, a.relay, a.channel);
  if (!negotiated) return w.slot;
  const double pf = w.p_free(i, a.relay, a.channel);
  int n = load(w, joint, i);
  if (n < 1) n = 1;
  return w.slot * (1.0 - pf) + n * w.ett * pf;
}

inline double utility(const World& w, const Joint& joint, int i, int sink) {
  const double adv = w.dist(i, sink) - w.dist(joint[i]->relay, sink);
  if (adv <= 0.0) return 0.0;
  return adv / delay(w, joint, i);
}

// Softmax of temperature * values, straight from the definition.
inline std::vector<double> softmax(const std::vector<double>& values, double temperature) {
  double top = values[0];
  for (double v : values) top = v > top ? v : top;
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) sum += out[a] = std::exp(temperature * (values[a] - top));
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace oracle
