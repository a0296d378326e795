// Copyright 2026 the rsched authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSCHED_SRC_FLOW_UTIL_HPP
#define RSCHED_SRC_FLOW_UTIL_HPP

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "rsched/common.hpp"

namespace rsched::flowutil {

// Compact Dinic max-flow.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes) : head_(num_nodes, -1) {}

  int add_edge(int from, int to, i64 cap) {
    int id = static_cast<int>(edges_.size()) / 2;
    edges_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], 0});
    head_[to] = static_cast<int>(edges_.size()) - 1;
    return id;
  }

  i64 run(int s, int t) {
    i64 total = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      i64 f;
      while ((f = dfs(s, t, std::numeric_limits<i64>::max())) > 0) total += f;
    }
    return total;
  }

  i64 flow_on(int edge_id) const { return edges_[2 * edge_id + 1].cap; }

 private:
  struct Edge {
    int to;
    int next;
    i64 cap;
  };

  bool bfs(int s, int t) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e = head_[v]; e >= 0; e = edges_[e].next)
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[v] + 1;
          q.push(edges_[e].to);
        }
    }
    return level_[t] >= 0;
  }

  i64 dfs(int v, int t, i64 limit) {
    if (v == t) return limit;
    for (int& e = iter_[v]; e >= 0; e = edges_[e].next) {
      Edge& ed = edges_[e];
      if (ed.cap > 0 && level_[ed.to] == level_[v] + 1) {
        i64 got = dfs(ed.to, t, std::min(limit, ed.cap));
        if (got > 0) {
          ed.cap -= got;
          edges_[e ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0;
  }

  std::vector<int> head_, level_, iter_;
  std::vector<Edge> edges_;
};

// Fractional assignment problem in time units: route supply[j] from each
// job into its arc machines without exceeding machine_cap. After run(),
// cancel_cycles() makes the support a forest (shifting a uniform amount
// around an alternating cycle keeps job totals and machine loads), and
// round_to_assignment() gives each job one machine so that every machine
// carries its flow intake plus at most one whole extra job.
struct BipartiteTimeFlow {
  std::vector<i64> supply;              // per local job
  std::vector<std::vector<int>> arcs;   // per local job: machine ids
  std::vector<i64> machine_cap;         // per machine id
  std::vector<std::vector<std::pair<int, i64>>> flow;  // (machine, amount)

  bool run() {
    const int jn = static_cast<int>(supply.size());
    const int mn = static_cast<int>(machine_cap.size());
    const int source = jn + mn, sink = jn + mn + 1;
    MaxFlow net(jn + mn + 2);
    i64 demand = 0;
    std::vector<std::vector<std::pair<int, int>>> job_arcs(jn);
    for (int j = 0; j < jn; ++j) {
      demand += supply[j];
      net.add_edge(source, j, supply[j]);
      for (int i : arcs[j])
        job_arcs[j].emplace_back(i, net.add_edge(j, jn + i, supply[j]));
    }
    for (int i = 0; i < mn; ++i) net.add_edge(jn + i, sink, machine_cap[i]);
    if (net.run(source, sink) != demand) return false;
    flow.assign(jn, {});
    for (int j = 0; j < jn; ++j)
      for (auto [i, arc] : job_arcs[j]) {
        i64 f = net.flow_on(arc);
        if (f > 0) flow[j].emplace_back(i, f);
      }
    return true;
  }

  void cancel_cycles() {
    const int jn = static_cast<int>(supply.size());
    const int mn = static_cast<int>(machine_cap.size());
    auto find_flow = [&](int j, int machine) -> i64* {
      for (auto& [mi, f] : flow[j])
        if (mi == machine) return &f;
      return nullptr;
    };

    while (true) {
      std::vector<std::vector<int>> adj(jn + mn);
      for (int j = 0; j < jn; ++j)
        for (auto& [mi, f] : flow[j]) {
          adj[j].push_back(jn + mi);
          adj[jn + mi].push_back(j);
        }
      // Peel to the 2-core.
      std::vector<int> degree(adj.size());
      std::vector<int> queue;
      for (std::size_t v = 0; v < adj.size(); ++v) {
        degree[v] = static_cast<int>(adj[v].size());
        if (degree[v] == 1) queue.push_back(static_cast<int>(v));
      }
      std::vector<bool> gone(adj.size(), false);
      while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (gone[v] || degree[v] > 1) continue;
        gone[v] = true;
        for (int u : adj[v])
          if (!gone[u] && --degree[u] == 1) queue.push_back(u);
      }
      int start = -1;
      for (std::size_t v = 0; v < adj.size(); ++v)
        if (!gone[v] && degree[v] >= 2) {
          start = static_cast<int>(v);
          break;
        }
      if (start < 0) return;

      // Forward walk inside the core until a node repeats.
      std::vector<int> path;
      std::vector<int> pos(adj.size(), -1);
      int prev = -1, cur = start;
      std::vector<int> cycle;
      while (cycle.empty()) {
        pos[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        int next = -1;
        for (int u : adj[cur])
          if (!gone[u] && u != prev) {
            next = u;
            break;
          }
        if (pos[next] >= 0)
          cycle.assign(path.begin() + pos[next], path.end());
        else {
          prev = cur;
          cur = next;
        }
      }

      const std::size_t len = cycle.size();
      i64 shift = std::numeric_limits<i64>::max();
      for (std::size_t k = 0; k < len; ++k) {
        int a = cycle[k], b = cycle[(k + 1) % len];
        if (a >= jn) shift = std::min(shift, *find_flow(b, a - jn));
      }
      for (std::size_t k = 0; k < len; ++k) {
        int a = cycle[k], b = cycle[(k + 1) % len];
        if (a < jn) {
          i64* f = find_flow(a, b - jn);
          if (!f) {
            flow[a].emplace_back(b - jn, 0);
            f = &flow[a].back().second;
          }
          *f += shift;
        } else {
          *find_flow(b, a - jn) -= shift;
        }
      }
      for (int j = 0; j < jn; ++j)
        std::erase_if(flow[j], [](const auto& e) { return e.second == 0; });
    }
  }

  // Requires an acyclic support. Jobs with one support edge keep it; the
  // fractional rest forms a forest where each job picks a child machine,
  // so a machine gains at most its (unique) parent job.
  std::vector<int> round_to_assignment() const {
    const int jn = static_cast<int>(supply.size());
    const int mn = static_cast<int>(machine_cap.size());
    std::vector<int> assign(jn, -1);
    std::vector<int> frac;
    for (int j = 0; j < jn; ++j) {
      if (flow[j].size() == 1)
        assign[j] = flow[j][0].first;
      else if (!flow[j].empty())
        frac.push_back(j);
    }
    std::vector<std::vector<int>> machine_jobs(mn);
    for (int j : frac)
      for (auto& [mi, f] : flow[j]) machine_jobs[mi].push_back(j);

    std::vector<bool> job_done(jn, false), machine_seen(mn, false);
    for (int root_j : frac) {
      if (job_done[root_j]) continue;
      int root = flow[root_j][0].first;
      std::vector<std::pair<int, int>> stack{{root, -1}};  // (machine, via job)
      machine_seen[root] = true;
      while (!stack.empty()) {
        auto [mi, pj] = stack.back();
        stack.pop_back();
        for (int j : machine_jobs[mi]) {
          if (j == pj || job_done[j]) continue;
          job_done[j] = true;
          int child = -1;
          for (auto& [mi2, f] : flow[j])
            if (mi2 != mi && (child == -1 || mi2 < child)) child = mi2;
          assign[j] = child == -1 ? mi : child;
          for (auto& [mi2, f] : flow[j])
            if (!machine_seen[mi2]) {
              machine_seen[mi2] = true;
              stack.emplace_back(mi2, j);
            }
        }
      }
    }
    return assign;
  }
};

}  // namespace rsched::flowutil

#endif  // RSCHED_SRC_FLOW_UTIL_HPP
