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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "rsched/branch_decomp.hpp"
#include "rsched/graphs.hpp"
#include "rsched/harness.hpp"
#include "rsched/tree_decomp.hpp"

using namespace rsched;

namespace {

RestrictionGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  RestrictionGraph g(GraphKind::kPrimal, n);
  for (auto [a, b] : edges) g.add_edge(a, b);
  g.finalize();
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  g.set_vertex_names(std::move(names));
  return g;
}

RestrictionGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return make_graph(n, edges);
}

RestrictionGraph random_graph(int n, int percent, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.chance(percent)) edges.emplace_back(a, b);
  return make_graph(n, edges);
}

// Exhaustive elimination-ordering oracle for tiny graphs, independent of
// the memoized search: tries every permutation.
int permutation_treewidth(const RestrictionGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = n;
  do {
    std::vector<Bitset> adj(n);
    for (int v = 0; v < n; ++v) adj[v] = g.neighbor_bits(v);
    int peak = 0;
    for (int v : order) {
      auto nb = adj[v].to_vector();
      peak = std::max(peak, static_cast<int>(nb.size()));
      for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b) {
          adj[nb[a]].set(nb[b]);
          adj[nb[b]].set(nb[a]);
        }
      for (int u : nb) adj[u].reset(v);
    }
    best = std::min(best, peak);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("tree decomposition validation finds violations with witnesses") {
  RestrictionGraph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});

  TreeDecomposition trivial;
  trivial.bags = {{0, 1, 2, 3}};
  CHECK(validate_tree_decomposition(g, trivial).ok());
  CHECK(trivial.width() == 3);

  TreeDecomposition missing;  // vertex 3 in no bag
  missing.bags = {{0, 1}, {1, 2}};
  missing.edges = {{0, 1}};
  auto r1 = validate_tree_decomposition(g, missing);
  CHECK(r1.violation == TreeDecompositionCheck::Violation::kVertexUncovered);
  CHECK(r1.witness_a == 3);

  TreeDecomposition uncovered;  // edge {2,3} in no bag
  uncovered.bags = {{0, 1}, {1, 2}, {3}};
  uncovered.edges = {{0, 1}, {1, 2}};
  auto r2 = validate_tree_decomposition(g, uncovered);
  CHECK(r2.violation == TreeDecompositionCheck::Violation::kEdgeUncovered);

  // Vertex 1's bags split into two components of the decomposition tree.
  TreeDecomposition torn;
  torn.bags = {{0, 1}, {1, 2}, {2, 3}, {1, 2}};
  torn.edges = {{0, 1}, {1, 2}, {2, 3}};
  // Make node 3 contain vertex 1 but hang it off node 2 while vertex 1 is
  // absent from node 2: bags are {0,1},{1,2},{3},{1,2} instead.
  torn.bags = {{0, 1}, {1, 2}, {3}, {1, 2}};
  auto r3 = validate_tree_decomposition(g, torn);
  // Edge {2,3} is uncovered in this arrangement; build a cleaner T3 case.
  TreeDecomposition t3;
  t3.bags = {{0, 1}, {2}, {1, 2, 3}};
  t3.edges = {{0, 1}, {1, 2}};
  auto r4 = validate_tree_decomposition(g, t3);
  CHECK(r4.violation == TreeDecompositionCheck::Violation::kDisconnected);
  CHECK(r4.witness_a == 1);
  (void)r3;
}

TEST_CASE("heuristic decompositions are valid with known widths") {
  // A random tree has treewidth 1 and both heuristics find it.
  Rng rng(3);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < 9; ++v)
    edges.emplace_back(static_cast<int>(rng.uniform(0, v - 1)), v);
  RestrictionGraph tree = make_graph(9, edges);
  for (auto h : {EliminationHeuristic::kMinDegree,
                 EliminationHeuristic::kMinFill}) {
    TreeDecomposition td = heuristic_tree_decomposition(tree, h);
    CHECK(validate_tree_decomposition(tree, td).ok());
    CHECK(td.width() == 1);
  }

  RestrictionGraph k5 = complete_graph(5);
  TreeDecomposition td =
      heuristic_tree_decomposition(k5, EliminationHeuristic::kMinFill);
  CHECK(validate_tree_decomposition(k5, td).ok());
  CHECK(td.width() == 4);
}

TEST_CASE("exact treewidth on named graphs") {
  RestrictionGraph p4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(exact_treewidth(p4).first == 1);

  RestrictionGraph k4 = complete_graph(4);
  CHECK(exact_treewidth(k4).first == 3);

  // 3x3 grid: treewidth 3, exhaustive elimination orderings agree.
  std::vector<std::pair<int, int>> grid_edges;
  auto id = [](int r, int c) { return 3 * r + c; };
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if (c + 1 < 3) grid_edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < 3) grid_edges.emplace_back(id(r, c), id(r + 1, c));
    }
  RestrictionGraph grid = make_graph(9, grid_edges);
  auto [width, td] = exact_treewidth(grid);
  CHECK(width == 3);
  CHECK(validate_tree_decomposition(grid, td).ok());
  CHECK(td.width() == 3);

  RestrictionGraph big = complete_graph(13);
  CHECK_THROWS_AS(exact_treewidth(big), ResourceLimitError);
}

TEST_CASE("exact treewidth matches the permutation oracle on tiny graphs") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RestrictionGraph g = random_graph(6, 40, seed);
    auto [width, td] = exact_treewidth(g);
    CHECK(width == permutation_treewidth(g));
    CHECK(validate_tree_decomposition(g, td).ok());
    CHECK(td.width() == width);
    // Heuristic width never beats the optimum.
    for (auto h : {EliminationHeuristic::kMinDegree,
                   EliminationHeuristic::kMinFill})
      CHECK(heuristic_tree_decomposition(g, h).width() >= width);
  }
}

TEST_CASE("normalize_simple_form shapes and preserves width") {
  RestrictionGraph single = complete_graph(3);
  TreeDecomposition td;
  td.bags = {{0, 1, 2}};
  SimpleFormDecomposition sfd = normalize_simple_form(td);
  // Single-node decomposition becomes the 3-node path
  // empty root - original bag - empty leaf.
  CHECK(sfd.num_nodes() == 3);
  CHECK(sfd.bags[sfd.root].empty());
  CHECK(sfd.children[sfd.root].size() == 1);
  int mid = sfd.children[sfd.root][0];
  CHECK(sfd.bags[mid] == std::vector<int>{0, 1, 2});
  CHECK(sfd.children[mid].size() == 1);
  CHECK(sfd.bags[sfd.children[mid][0]].empty());
  CHECK(validate_simple_form(single, sfd).ok);

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RestrictionGraph g = random_graph(8, 35, seed);
    TreeDecomposition base =
        heuristic_tree_decomposition(g, EliminationHeuristic::kMinFill);
    SimpleFormDecomposition out = normalize_simple_form(base);
    CHECK(validate_simple_form(g, out).ok);
    CHECK(out.width() == base.width());
    CHECK(out.num_nodes() <= 4 * base.num_nodes() + 2);
  }
}

TEST_CASE("branch decomposition validation and rankwidth") {
  // Any branch decomposition of a complete graph has rankwidth 1.
  RestrictionGraph k5 = complete_graph(5);
  BranchDecomposition bd = caterpillar_branch_decomposition(5);
  auto check = validate_branch_decomposition(k5, bd);
  REQUIRE(check.ok);
  CHECK(check.rankwidth == 1);

  RestrictionGraph edgeless = make_graph(4, {});
  auto check2 = validate_branch_decomposition(
      edgeless, caterpillar_branch_decomposition(4));
  REQUIRE(check2.ok);
  CHECK(check2.rankwidth == 0);

  // Per-edge ranks agree with direct recomputation of each cut.
  RestrictionGraph g = random_graph(7, 45, 12);
  BranchDecomposition cat = caterpillar_branch_decomposition(7);
  auto check3 = validate_branch_decomposition(g, cat);
  REQUIRE(check3.ok);
  int peak = 0;
  for (std::size_t e = 0; e < check3.edge_list.size(); ++e) {
    int direct = cut_rank(g, check3.edge_side[e]);
    CHECK(direct == check3.edge_rank[e]);
    peak = std::max(peak, direct);
  }
  CHECK(peak == check3.rankwidth);

  // Malformed: a leaf mapped twice.
  BranchDecomposition bad = caterpillar_branch_decomposition(4);
  bad.vertex_of_node[bad.leaf_of_vertex[1]] = 0;
  CHECK_FALSE(validate_branch_decomposition(edgeless, bad).ok);
}

TEST_CASE("bicograph recognition") {
  SUBCASE("complete bipartite graphs reduce in one step") {
    Instance kab = parse_instance(R"({"jobs":["a","b","c"],
      "machines":["x","y"],"proc":{"x":{"a":1,"b":1,"c":1},
      "y":{"a":1,"b":1,"c":1}},"identical":true})");
    RestrictionGraph inc = build_graph(kab, GraphKind::kIncidence);
    Bitset jobs = Bitset::of(5, {0, 1, 2});
    BicographResult rec = bicograph_recognize(inc, jobs);
    CHECK(rec.is_bicograph);
    BranchDecomposition bd = bicotree_to_branch_decomposition(rec.tree, 5);
    auto check = validate_branch_decomposition(inc, bd);
    REQUIRE(check.ok);
    CHECK(check.rankwidth <= 1);
  }

  SUBCASE("P7 stalls under bi-complementation") {
    RestrictionGraph p7(GraphKind::kIncidence, 7);
    for (int v = 0; v + 1 < 7; ++v) p7.add_edge(v, v + 1);
    p7.finalize();
    Bitset even = Bitset::of(7, {0, 2, 4, 6});
    BicographResult rec = bicograph_recognize(p7, even);
    CHECK_FALSE(rec.is_bicograph);
    CHECK(rec.witness.size() == 7);
  }

  SUBCASE("nested and hierarchical incidence graphs are bicographs") {
    for (auto cls : {InstanceClass::kNested, InstanceClass::kPathHierarchical,
                     InstanceClass::kTreeHierarchical}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GeneratorSpec spec;
        spec.cls = cls;
        spec.num_jobs = 6;
        spec.num_machines = 4;
        spec.seed = seed;
        Instance inst = generate(spec);
        RestrictionGraph inc = build_graph(inst, GraphKind::kIncidence);
        Bitset jobs(inc.num_vertices());
        for (int j = 0; j < inst.num_jobs(); ++j) jobs.set(j);
        BicographResult rec = bicograph_recognize(inc, jobs);
        REQUIRE(rec.is_bicograph);

        BranchDecomposition bd =
            bicotree_to_branch_decomposition(rec.tree, inc.num_vertices());
        auto check = validate_branch_decomposition(inc, bd);
        REQUIRE(check.ok);
        CHECK(check.rankwidth <= 4);
        // Job connection types stay within 2 on each side of every cut.
        for (const Bitset& side : check.edge_side) {
          Bitset below_jobs(inst.num_jobs()), below_machines(
                                                  inst.num_machines());
          for (std::size_t v = side.next(0); v < side.size();
               v = side.next(v + 1)) {
            if (static_cast<int>(v) < inst.num_jobs())
              below_jobs.set(v);
            else
              below_machines.set(v - inst.num_jobs());
          }
          Bitset above_jobs(inst.num_jobs()), above_machines(
                                                  inst.num_machines());
          for (int j = 0; j < inst.num_jobs(); ++j)
            if (!below_jobs.test(j)) above_jobs.set(j);
          for (int i = 0; i < inst.num_machines(); ++i)
            if (!below_machines.test(i)) above_machines.set(i);
          CHECK(connection_types(inst, below_jobs, above_machines)
                    .num_types() <= 2);
          CHECK(connection_types(inst, above_jobs, below_machines)
                    .num_types() <= 2);
        }
      }
    }
  }

  SUBCASE("replaying the recorded bi-complements reduces to singletons") {
    GeneratorSpec spec;
    spec.cls = InstanceClass::kTreeHierarchical;
    spec.num_jobs = 6;
    spec.num_machines = 4;
    spec.seed = 5;
    Instance inst = generate(spec);
    RestrictionGraph inc = build_graph(inst, GraphKind::kIncidence);
    Bitset jobs(inc.num_vertices());
    for (int j = 0; j < inst.num_jobs(); ++j) jobs.set(j);
    BicographResult rec = bicograph_recognize(inc, jobs);
    REQUIRE(rec.is_bicograph);

    // Walk the tree replaying each recorded step: a node's children must be
    // exactly the components of its (possibly bi-complemented) subgraph.
    const int n = inc.num_vertices();
    auto replay = [&](auto&& self, int id,
                      std::vector<Bitset> adj) -> void {
      const BiCotree::Node& node = rec.tree.nodes[id];
      if (node.children.empty()) {
        CHECK(node.vertices.size() == 1);
        return;
      }
      Bitset in_set(n), a_side(n), b_side(n);
      for (int v : node.vertices) {
        in_set.set(v);
        (jobs.test(v) ? a_side : b_side).set(v);
      }
      if (node.complemented)
        for (int v : node.vertices) {
          const Bitset& opposite = jobs.test(v) ? b_side : a_side;
          adj[v] = opposite.minus(adj[v] & in_set);
        }
      // The children partition the vertex set, and no recorded child is
      // split further by the current adjacency (each child is connected or
      // a singleton, with no edges leaving it inside this node).
      Bitset covered(n);
      for (int c : node.children) {
        Bitset child_set(n);
        for (int v : rec.tree.nodes[c].vertices) child_set.set(v);
        CHECK_FALSE(covered.intersects(child_set));
        covered |= child_set;
        for (int v : rec.tree.nodes[c].vertices)
          CHECK_FALSE((adj[v] & in_set).minus(child_set).any());
        self(self, c, adj);
      }
      CHECK(covered == in_set);
    };
    std::vector<Bitset> adj;
    for (int v = 0; v < n; ++v) adj.push_back(inc.neighbor_bits(v));
    replay(replay, rec.tree.root, adj);
  }

  SUBCASE("non-bipartite input is rejected") {
    RestrictionGraph tri(GraphKind::kIncidence, 3);
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(0, 2);
    tri.finalize();
    CHECK_THROWS_AS(bicograph_recognize(tri, Bitset::of(3, {0})), InputError);
  }
}

TEST_CASE("connection type count is bounded by 2^cutrank") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GeneratorSpec spec;
    spec.cls = InstanceClass::kRandomRestricted;
    spec.num_jobs = 5;
    spec.num_machines = 3;
    spec.seed = seed;
    Instance inst = generate(spec);
    RestrictionGraph inc = build_graph(inst, GraphKind::kIncidence);
    BranchDecomposition bd =
        caterpillar_branch_decomposition(inc.num_vertices());
    auto check = validate_branch_decomposition(inc, bd);
    REQUIRE(check.ok);
    for (std::size_t e = 0; e < check.edge_list.size(); ++e) {
      const Bitset& side = check.edge_side[e];
      Bitset below_jobs(inst.num_jobs()), below_machines(inst.num_machines());
      for (std::size_t v = side.next(0); v < side.size();
           v = side.next(v + 1)) {
        if (static_cast<int>(v) < inst.num_jobs())
          below_jobs.set(v);
        else
          below_machines.set(v - inst.num_jobs());
      }
      Bitset above_machines(inst.num_machines());
      for (int i = 0; i < inst.num_machines(); ++i)
        if (!below_machines.test(i)) above_machines.set(i);
      int types =
          connection_types(inst, below_jobs, above_machines).num_types();
      CHECK(types <= (1 << check.edge_rank[e]));
    }
  }
}

TEST_CASE("decomposition JSON round trips") {
  RestrictionGraph g = random_graph(6, 40, 4);
  TreeDecomposition td =
      heuristic_tree_decomposition(g, EliminationHeuristic::kMinFill);
  std::optional<int> root;
  TreeDecomposition back =
      parse_tree_decomposition(tree_decomposition_to_json(td, g, 2), g, &root);
  CHECK(back.bags == td.bags);
  CHECK(back.edges.size() == td.edges.size());
  REQUIRE(root.has_value());
  CHECK(*root == 2);

  BranchDecomposition bd = caterpillar_branch_decomposition(6);
  BranchDecomposition bback =
      parse_branch_decomposition(branch_decomposition_to_json(bd, g), g);
  auto c1 = validate_branch_decomposition(g, bd);
  auto c2 = validate_branch_decomposition(g, bback);
  REQUIRE(c1.ok);
  REQUIRE(c2.ok);
  CHECK(c1.rankwidth == c2.rankwidth);
}
