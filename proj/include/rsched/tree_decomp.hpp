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

#ifndef RSCHED_TREE_DECOMP_HPP
#define RSCHED_TREE_DECOMP_HPP

#include <optional>
#include <string>
#include <vector>

#include "rsched/graphs.hpp"

namespace rsched {

/// Tree decomposition (T, {X_t}): bags over V(G) on an unrooted tree.
struct TreeDecomposition {
  std::vector<std::vector<int>> bags;        // sorted vertex lists
  std::vector<std::pair<int, int>> edges;    // tree edges between node ids

  int num_nodes() const { return static_cast<int>(bags.size()); }
  /// max |X_t| - 1; -1 for the empty decomposition of an empty graph.
  int width() const;
};

/// Outcome of checking the three tree-decomposition conditions. `ok` or the
/// first violated condition with a witness vertex/edge.
struct TreeDecompositionCheck {
  enum class Violation {
    kNone,
    kNotATree,        // disconnected or cyclic node graph
    kVertexUncovered,  // (T1)
    kEdgeUncovered,    // (T2)
    kDisconnected,     // (T3)
  };
  Violation violation = Violation::kNone;
  int witness_a = -1;  // vertex (T1, T3) or edge endpoint (T2)
  int witness_b = -1;  // second edge endpoint (T2)
  bool ok() const { return violation == Violation::kNone; }
  std::string describe() const;
};

TreeDecompositionCheck validate_tree_decomposition(const RestrictionGraph& g,
                                                   const TreeDecomposition& td);

enum class EliminationHeuristic { kMinDegree, kMinFill };

/// Valid decomposition from an elimination ordering; width is an upper bound
/// on tw(G) with no guarantee. Ties break toward the lowest vertex id.
TreeDecomposition heuristic_tree_decomposition(const RestrictionGraph& g,
                                               EliminationHeuristic heuristic);

/// Optimal width by exhaustive elimination-order search with memoization.
/// Throws ResourceLimitError above max_vertices (default 12).
std::pair<int, TreeDecomposition> exact_treewidth(const RestrictionGraph& g,
                                                  int max_vertices = 12);

/// Rooted decomposition in the simple form the per-node DPs consume: the
/// root is an empty-bag leaf of the underlying tree, every childless node
/// has an empty bag, and every other node has one or two children. A node
/// with one child behaves exactly like one whose second child is an empty
/// dummy leaf.
struct SimpleFormDecomposition {
  std::vector<std::vector<int>> bags;      // sorted
  std::vector<int> parent;                 // -1 for root
  std::vector<std::vector<int>> children;  // size <= 2
  int root = -1;

  int num_nodes() const { return static_cast<int>(bags.size()); }
  int width() const;
  /// Post-order (children before parents, root last).
  std::vector<int> post_order() const;
  TreeDecomposition as_tree_decomposition() const;
};

/// Check the simple-form shape invariants (not the DP activity conditions).
struct SimpleFormCheck {
  bool ok = true;
  std::string problem;
};
SimpleFormCheck validate_simple_form(const RestrictionGraph& g,
                                     const SimpleFormDecomposition& sfd);

/// Rebuilds td into simple form without increasing the width; dummy bags
/// are empty or copies of their parent. root_choice picks the original node
/// the fresh empty root is attached above (-1: node 0).
SimpleFormDecomposition normalize_simple_form(const TreeDecomposition& td,
                                              int root_choice = -1);

// JSON: {"nodes":[{"id":int,"bag":[names]}], "edges":[[id,id]], "root": id?}
// Vertex names use the owning graph's vertex_names() convention ("j:"/"m:"
// prefixes for incidence graphs).
TreeDecomposition parse_tree_decomposition(const std::string& json_text,
                                           const RestrictionGraph& g,
                                           std::optional<int>* root_out);
TreeDecomposition load_tree_decomposition(const std::string& path,
                                          const RestrictionGraph& g,
                                          std::optional<int>* root_out);
std::string tree_decomposition_to_json(const TreeDecomposition& td,
                                       const RestrictionGraph& g,
                                       std::optional<int> root);

}  // namespace rsched

#endif  // RSCHED_TREE_DECOMP_HPP
