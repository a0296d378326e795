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

#ifndef RSCHED_GRAPHS_HPP
#define RSCHED_GRAPHS_HPP

#include <string>
#include <vector>

#include "rsched/instance.hpp"

namespace rsched {

enum class GraphKind { kPrimal, kDual, kIncidence };

const char* graph_kind_name(GraphKind kind);
GraphKind graph_kind_from_name(const std::string& name);

/// Restriction-structure graph of an instance.
///   primal:    vertices = jobs, {j,j'} iff M(j) and M(j') intersect.
///   dual:      vertices = machines, {i,i'} iff J(i) and J(i') intersect.
///   incidence: bipartite, jobs 0..n-1 then machines n..n+m-1, {j,i} iff
///              i in M(j).
/// Adjacency is kept both as sorted lists (iteration) and bitset rows
/// (GF(2) elimination, neighborhood hashing). Immutable after build.
class RestrictionGraph {
 public:
  RestrictionGraph(GraphKind kind, int num_vertices);

  GraphKind kind() const { return kind_; }
  int num_vertices() const { return static_cast<int>(adj_list_.size()); }
  int num_edges() const { return num_edges_; }

  void add_edge(int u, int v);
  /// Sorts adjacency lists; call once after the last add_edge.
  void finalize();

  bool has_edge(int u, int v) const { return adj_bits_[u].test(v); }
  const std::vector<int>& neighbors(int v) const { return adj_list_[v]; }
  const Bitset& neighbor_bits(int v) const { return adj_bits_[v]; }

  int degree(int v) const { return static_cast<int>(adj_list_[v].size()); }

  /// Vertex naming for exports; set by build_graph.
  const std::vector<std::string>& vertex_names() const { return names_; }
  void set_vertex_names(std::vector<std::string> names) {
    names_ = std::move(names);
  }

  std::vector<std::vector<int>> connected_components() const;

 private:
  GraphKind kind_;
  int num_edges_ = 0;
  std::vector<std::vector<int>> adj_list_;
  std::vector<Bitset> adj_bits_;
  std::vector<std::string> names_;
};

RestrictionGraph build_graph(const Instance& inst, GraphKind kind);

/// For incidence graphs: vertex index of job j is j, of machine i is n + i.
inline int incidence_job_vertex(int job) { return job; }
inline int incidence_machine_vertex(const Instance& inst, int machine) {
  return inst.num_jobs() + machine;
}

/// Rank of the adjacency submatrix A[X, V\X] over GF(2), by bitset Gaussian
/// elimination on the rows of X restricted to columns V\X.
int cut_rank(const RestrictionGraph& g, const Bitset& x);

/// Partition of job set X by identical neighborhood within machine set Y.
struct ConnectionTypePartition {
  struct Group {
    std::vector<int> jobs;   // ascending
    Bitset machines;         // N(group) within Y
  };
  std::vector<Group> groups;  // ordered by machine bitset, ascending

  int num_types() const { return static_cast<int>(groups.size()); }
};

/// Groups jobs X of an instance by M(j) ∩ Y. Groups are nonempty, disjoint
/// and cover X; computed by sorting neighborhood bitsets.
ConnectionTypePartition connection_types(const Instance& inst, const Bitset& x,
                                         const Bitset& y);

/// Same, over an explicit incidence graph (X job vertices, Y machine
/// vertices in incidence indexing).
ConnectionTypePartition connection_types(const RestrictionGraph& incidence,
                                         const Instance& inst, const Bitset& x,
                                         const Bitset& y);

struct GraphStats {
  GraphKind kind;
  int num_vertices = 0;
  int num_edges = 0;
  int max_degree = 0;
  int num_components = 0;
  int max_jobs_per_machine = 0;  // max |J(i)|
  int max_machines_per_job = 0;  // max |M(j)|
};

GraphStats graph_stats(const Instance& inst, GraphKind kind);

std::string to_dot(const RestrictionGraph& g);

}  // namespace rsched

#endif  // RSCHED_GRAPHS_HPP
