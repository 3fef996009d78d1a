// Copyright 2026 The Pufferfish Calibration Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PUFFERFISH_TESTS_TEST_UTIL_H_
#define PUFFERFISH_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "pufferfish/prior_model.h"

namespace pufferfish::testing {

// Random pmf from normalized exponential draws (a flat Dirichlet). With
// `full_support` false, each entry is zeroed with probability 1/3 (at least
// one entry survives).
inline std::vector<double> RandomPmf(std::mt19937_64& rng, size_t size,
                                     bool full_support = true) {
  std::exponential_distribution<double> draw(1.0);
  std::bernoulli_distribution drop(1.0 / 3.0);
  std::vector<double> pmf(size);
  double total = 0.0;
  for (double& p : pmf) {
    p = draw(rng);
    if (!full_support && drop(rng)) p = 0.0;
    total += p;
  }
  if (total == 0.0) {
    pmf[0] = 1.0;
    total = 1.0;
  }
  for (double& p : pmf) p /= total;
  return pmf;
}

inline PufferfishInstance RandomInstance(std::mt19937_64& rng, size_t size,
                                         bool full_support = true) {
  return *MakeInstance(RandomPmf(rng, size, full_support),
                       RandomPmf(rng, size, full_support));
}

// Minimum |x - x'| coupling cost by successive shortest augmenting paths
// (Bellman-Ford on the residual transportation network). Independent of the
// cumulative-mass construction under test.
inline double MinCouplingCostOracle(const std::vector<double>& p,
                                    const std::vector<double>& q) {
  const int m = static_cast<int>(p.size());
  // Nodes: 0 source, 1..m rows, m+1..2m columns, 2m+1 sink.
  const int nodes = 2 * m + 2;
  const int source = 0;
  const int sink = 2 * m + 1;
  struct Edge {
    int to;
    double cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Edge>> graph(nodes);
  auto add = [&](int u, int v, double cap, double cost) {
    graph[u].push_back({v, cap, cost, static_cast<int>(graph[v].size())});
    graph[v].push_back({u, 0.0, -cost, static_cast<int>(graph[u].size()) - 1});
  };
  for (int x = 0; x < m; ++x) add(source, 1 + x, p[x], 0.0);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      add(1 + x, 1 + m + y, 2.0, std::abs(x - y));
    }
  }
  for (int y = 0; y < m; ++y) add(1 + m + y, sink, q[y], 0.0);

  constexpr double kEps = 1e-15;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double cost = 0.0;
  double flow = 0.0;
  for (int round = 0; round < 10000 && flow < 1.0 - 1e-13; ++round) {
    std::vector<double> dist(nodes, kInf);
    std::vector<int> prev_node(nodes, -1);
    std::vector<int> prev_edge(nodes, -1);
    dist[source] = 0.0;
    for (int pass = 0; pass < nodes; ++pass) {
      bool changed = false;
      for (int u = 0; u < nodes; ++u) {
        if (dist[u] == kInf) continue;
        for (int k = 0; k < static_cast<int>(graph[u].size()); ++k) {
          const Edge& e = graph[u][k];
          if (e.cap > kEps && dist[u] + e.cost < dist[e.to] - 1e-12) {
            dist[e.to] = dist[u] + e.cost;
            prev_node[e.to] = u;
            prev_edge[e.to] = k;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == kInf) break;
    double push = kInf;
    for (int v = sink; v != source; v = prev_node[v]) {
      push = std::min(push, graph[prev_node[v]][prev_edge[v]].cap);
    }
    for (int v = sink; v != source; v = prev_node[v]) {
      Edge& e = graph[prev_node[v]][prev_edge[v]];
      e.cap -= push;
      graph[v][e.rev].cap += push;
    }
    flow += push;
    cost += push * dist[sink];
  }
  return cost;
}

// log of sum_x p(x) exp(-|y - x| / theta) / (2 theta), written directly
// with long double accumulation.
inline long double DirectLogDensity(const std::vector<double>& p, double theta,
                                    long double y) {
  long double best = -std::numeric_limits<long double>::infinity();
  for (size_t x = 0; x < p.size(); ++x) {
    if (p[x] > 0) {
      best = std::max(best, std::log(static_cast<long double>(p[x])) -
                                std::fabs(y - static_cast<long double>(x)) /
                                    theta);
    }
  }
  long double sum = 0.0L;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p[x] > 0) {
      sum += std::exp(std::log(static_cast<long double>(p[x])) -
                      std::fabs(y - static_cast<long double>(x)) / theta -
                      best);
    }
  }
  return best + std::log(sum) - std::log(2.0L * theta);
}

// max |log ratio| over an evenly spaced grid of `points` values on [lo, hi].
inline double DenseGridMaxLogRatio(const std::vector<double>& p_i,
                                   const std::vector<double>& p_j,
                                   double theta, double lo, double hi,
                                   int points) {
  auto log_mass = [](const std::vector<double>& p) {
    std::vector<std::pair<double, double>> terms;
    for (size_t x = 0; x < p.size(); ++x) {
      if (p[x] > 0) terms.emplace_back(static_cast<double>(x), std::log(p[x]));
    }
    return terms;
  };
  const auto terms_i = log_mass(p_i);
  const auto terms_j = log_mass(p_j);
  auto log_sum = [theta](const std::vector<std::pair<double, double>>& terms,
                         double y) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [x, log_p] : terms) {
      best = std::max(best, log_p - std::fabs(y - x) / theta);
    }
    double sum = 0.0;
    for (const auto& [x, log_p] : terms) {
      sum += std::exp(log_p - std::fabs(y - x) / theta - best);
    }
    return best + std::log(sum);
  };
  double best = 0.0;
  for (int k = 0; k < points; ++k) {
    const double y = lo + (hi - lo) * static_cast<double>(k) / (points - 1);
    best = std::max(best, std::fabs(log_sum(terms_i, y) - log_sum(terms_j, y)));
  }
  return best;
}

}  // namespace pufferfish::testing

#endif  // PUFFERFISH_TESTS_TEST_UTIL_H_
