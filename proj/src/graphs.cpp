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

#include "rsched/graphs.hpp"

#include <algorithm>
#include <sstream>

namespace rsched {

const char* graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::kPrimal:
      return "primal";
    case GraphKind::kDual:
      return "dual";
    case GraphKind::kIncidence:
      return "incidence";
  }
  return "?";
}

GraphKind graph_kind_from_name(const std::string& name) {
  if (name == "primal") return GraphKind::kPrimal;
  if (name == "dual") return GraphKind::kDual;
  if (name == "incidence") return GraphKind::kIncidence;
  throw InputError("unknown graph kind: " + name);
}

RestrictionGraph::RestrictionGraph(GraphKind kind, int num_vertices)
    : kind_(kind),
      adj_list_(num_vertices),
      adj_bits_(num_vertices, Bitset(num_vertices)) {}

void RestrictionGraph::add_edge(int u, int v) {
  if (u == v || adj_bits_[u].test(v)) return;
  adj_bits_[u].set(v);
  adj_bits_[v].set(u);
  adj_list_[u].push_back(v);
  adj_list_[v].push_back(u);
  ++num_edges_;
}

void RestrictionGraph::finalize() {
  for (auto& row : adj_list_) std::sort(row.begin(), row.end());
}

std::vector<std::vector<int>> RestrictionGraph::connected_components() const {
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(num_vertices(), false);
  for (int s = 0; s < num_vertices(); ++s) {
    if (seen[s]) continue;
    std::vector<int> comp, stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u : adj_list_[v])
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

RestrictionGraph build_graph(const Instance& inst, GraphKind kind) {
  const int n = inst.num_jobs();
  const int m = inst.num_machines();
  std::vector<std::string> names;
  switch (kind) {
    case GraphKind::kPrimal: {
      RestrictionGraph g(kind, n);
      // Jobs sharing a machine form cliques per J(i); building per machine
      // is O(sum |J(i)|^2) which beats the n^2 pairwise intersection test.
      for (int i = 0; i < m; ++i) {
        auto jobs = inst.jobs_of(i).to_vector();
        for (std::size_t a = 0; a < jobs.size(); ++a)
          for (std::size_t b = a + 1; b < jobs.size(); ++b)
            g.add_edge(jobs[a], jobs[b]);
      }
      g.finalize();
      g.set_vertex_names(inst.job_ids());
      return g;
    }
    case GraphKind::kDual: {
      RestrictionGraph g(kind, m);
      for (int j = 0; j < n; ++j) {
        auto machines = inst.machines_of(j).to_vector();
        for (std::size_t a = 0; a < machines.size(); ++a)
          for (std::size_t b = a + 1; b < machines.size(); ++b)
            g.add_edge(machines[a], machines[b]);
      }
      g.finalize();
      g.set_vertex_names(inst.machine_ids());
      return g;
    }
    case GraphKind::kIncidence: {
      RestrictionGraph g(kind, n + m);
      for (int j = 0; j < n; ++j)
        for (int i : inst.machines_of(j).to_vector())
          g.add_edge(incidence_job_vertex(j),
                     incidence_machine_vertex(inst, i));
      g.finalize();
      for (const auto& id : inst.job_ids()) names.push_back("j:" + id);
      for (const auto& id : inst.machine_ids()) names.push_back("m:" + id);
      g.set_vertex_names(std::move(names));
      return g;
    }
  }
  throw InputError("bad graph kind");
}

int cut_rank(const RestrictionGraph& g, const Bitset& x) {
  const int n = g.num_vertices();
  Bitset y(n);
  for (int v = 0; v < n; ++v)
    if (!x.test(v)) y.set(v);

  // Row-reduce the X rows restricted to Y columns.
  std::vector<Bitset> basis;
  int rank = 0;
  for (std::size_t v = x.next(0); v < x.size(); v = x.next(v + 1)) {
    Bitset row = g.neighbor_bits(static_cast<int>(v)) & y;
    for (const Bitset& b : basis) {
      std::size_t pivot = b.next(0);
      if (row.test(pivot)) row ^= b;
    }
    if (row.any()) {
      basis.push_back(row);
      ++rank;
    }
  }
  return rank;
}

namespace {

ConnectionTypePartition partition_by_neighborhood(
    const std::vector<int>& jobs, const std::vector<Bitset>& hoods) {
  std::vector<int> order(jobs.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (hoods[a] == hoods[b]) return jobs[a] < jobs[b];
    return hoods[a] < hoods[b];
  });

  ConnectionTypePartition part;
  for (int k : order) {
    if (part.groups.empty() || !(part.groups.back().machines == hoods[k])) {
      ConnectionTypePartition::Group grp;
      grp.machines = hoods[k];
      part.groups.push_back(std::move(grp));
    }
    part.groups.back().jobs.push_back(jobs[k]);
  }
  return part;
}

}  // namespace

ConnectionTypePartition connection_types(const Instance& inst, const Bitset& x,
                                         const Bitset& y) {
  std::vector<int> jobs = x.to_vector();
  std::vector<Bitset> hoods;
  hoods.reserve(jobs.size());
  for (int j : jobs) hoods.push_back(inst.machines_of(j) & y);
  return partition_by_neighborhood(jobs, hoods);
}

ConnectionTypePartition connection_types(const RestrictionGraph& incidence,
                                         const Instance& inst, const Bitset& x,
                                         const Bitset& y) {
  std::vector<int> jobs;
  std::vector<Bitset> hoods;
  for (std::size_t v = x.next(0); v < x.size(); v = x.next(v + 1)) {
    jobs.push_back(static_cast<int>(v));
    Bitset nb = incidence.neighbor_bits(static_cast<int>(v));
    Bitset machines(inst.num_machines());
    for (std::size_t w = y.next(0); w < y.size(); w = y.next(w + 1))
      if (nb.test(w))
        machines.set(w - static_cast<std::size_t>(inst.num_jobs()));
    hoods.push_back(std::move(machines));
  }
  return partition_by_neighborhood(jobs, hoods);
}

GraphStats graph_stats(const Instance& inst, GraphKind kind) {
  RestrictionGraph g = build_graph(inst, kind);
  GraphStats s;
  s.kind = kind;
  s.num_vertices = g.num_vertices();
  s.num_edges = g.num_edges();
  for (int v = 0; v < g.num_vertices(); ++v)
    s.max_degree = std::max(s.max_degree, g.degree(v));
  s.num_components = static_cast<int>(g.connected_components().size());
  for (int i = 0; i < inst.num_machines(); ++i)
    s.max_jobs_per_machine = std::max(
        s.max_jobs_per_machine, static_cast<int>(inst.jobs_of(i).count()));
  for (int j = 0; j < inst.num_jobs(); ++j)
    s.max_machines_per_job = std::max(
        s.max_machines_per_job, static_cast<int>(inst.machines_of(j).count()));
  return s;
}

std::string to_dot(const RestrictionGraph& g) {
  std::ostringstream out;
  out << "graph " << graph_kind_name(g.kind()) << " {\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::string name = g.vertex_names().empty() ? std::to_string(v)
                                                : g.vertex_names()[v];
    out << "  v" << v << " [label=\"" << name << "\"];\n";
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int u : g.neighbors(v))
      if (v < u) out << "  v" << v << " -- v" << u << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace rsched
