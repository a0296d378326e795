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

#ifndef RSCHED_BRANCH_DECOMP_HPP
#define RSCHED_BRANCH_DECOMP_HPP

#include <string>
#include <vector>

#include "rsched/graphs.hpp"

namespace rsched {

/// Branch decomposition (T, eta): a tree whose |V(G)| leaves are in
/// bijection with the graph vertices and whose internal nodes have degree 3.
struct BranchDecomposition {
  int num_graph_vertices = 0;
  std::vector<std::vector<int>> adj;      // tree adjacency
  std::vector<int> vertex_of_node;        // graph vertex at a leaf, else -1
  std::vector<int> leaf_of_vertex;        // inverse of eta

  int num_nodes() const { return static_cast<int>(adj.size()); }
  std::vector<std::pair<int, int>> edges() const;
};

/// Removing edge {a,b} cuts the leaves in two; returns the vertex set on
/// b's side.
Bitset branch_edge_side(const BranchDecomposition& bd, int a, int b);

struct BranchDecompositionCheck {
  bool ok = true;
  std::string problem;
  int rankwidth = 0;
  std::vector<std::pair<int, int>> edge_list;
  std::vector<int> edge_rank;   // aligned with edge_list
  std::vector<Bitset> edge_side;  // vertices on the second endpoint's side
};

/// Checks the leaf bijection, internal degrees and tree shape, then scores
/// every edge cut with cut_rank; rankwidth = max edge rank.
BranchDecompositionCheck validate_branch_decomposition(
    const RestrictionGraph& g, const BranchDecomposition& bd);

/// Leaves chained along a spine in vertex order; valid for any graph.
BranchDecomposition caterpillar_branch_decomposition(int num_vertices);

/// Record of reducing a bipartite graph to isolated vertices by recursively
/// bi-complementing its connected subgraphs. `complemented` marks nodes
/// where a bi-complement was applied; children are the connected components
/// that emerged (or the top-level components, for the synthetic root of a
/// disconnected input).
struct BiCotree {
  struct Node {
    std::vector<int> vertices;  // sorted graph vertex ids
    bool complemented = false;
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  int root = -1;
};

struct BicographResult {
  bool is_bicograph = false;
  BiCotree tree;
  /// On failure: a connected subgraph whose bi-complement is connected on
  /// the same vertex set, so the reduction stalls.
  std::vector<int> witness;
};

/// side_a holds one side of the bipartition; every edge must cross sides.
/// Throws InputError if g is not bipartite with the declared sides.
BicographResult bicograph_recognize(const RestrictionGraph& g,
                                    const Bitset& side_a);

/// Caterpillar-binarized branch decomposition of the recognized graph.
BranchDecomposition bicotree_to_branch_decomposition(const BiCotree& bct,
                                                     int num_vertices);

// JSON: {"leaves":{vertexName: leafNodeId}, "edges":[[id,id],...]}
BranchDecomposition parse_branch_decomposition(const std::string& json_text,
                                               const RestrictionGraph& g);
BranchDecomposition load_branch_decomposition(const std::string& path,
                                              const RestrictionGraph& g);
std::string branch_decomposition_to_json(const BranchDecomposition& bd,
                                         const RestrictionGraph& g);

}  // namespace rsched

#endif  // RSCHED_BRANCH_DECOMP_HPP
