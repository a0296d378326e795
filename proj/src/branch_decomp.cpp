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

#include "rsched/branch_decomp.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace rsched {

std::vector<std::pair<int, int>> BranchDecomposition::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < num_nodes(); ++a)
    for (int b : adj[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

Bitset branch_edge_side(const BranchDecomposition& bd, int a, int b) {
  Bitset side(bd.num_graph_vertices);
  std::vector<int> stack{b};
  std::vector<bool> seen(bd.num_nodes(), false);
  seen[a] = seen[b] = true;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    if (bd.vertex_of_node[t] >= 0) side.set(bd.vertex_of_node[t]);
    for (int u : bd.adj[t])
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
  }
  return side;
}

BranchDecompositionCheck validate_branch_decomposition(
    const RestrictionGraph& g, const BranchDecomposition& bd) {
  BranchDecompositionCheck res;
  auto fail = [&](std::string why) {
    res.ok = false;
    res.problem = std::move(why);
    return res;
  };

  const int n = g.num_vertices();
  if (bd.num_graph_vertices != n) return fail("vertex count mismatch");
  if (n == 0) return bd.num_nodes() == 0 ? res : fail("nonempty tree for empty graph");

  int leaves = 0;
  for (int t = 0; t < bd.num_nodes(); ++t) {
    int deg = static_cast<int>(bd.adj[t].size());
    if (bd.vertex_of_node[t] >= 0) {
      ++leaves;
      if (deg > 1) return fail("leaf with degree > 1");
    } else if (deg != 3 && bd.num_nodes() > 1) {
      return fail("internal node with degree != 3");
    }
  }
  if (leaves != n) return fail("leaf count != |V(G)|");
  std::vector<bool> mapped(n, false);
  for (int v = 0; v < n; ++v) {
    int leaf = bd.leaf_of_vertex[v];
    if (leaf < 0 || leaf >= bd.num_nodes() || bd.vertex_of_node[leaf] != v)
      return fail("eta is not a bijection");
    mapped[v] = true;
  }

  // Tree shape: connected with num_nodes-1 edges.
  auto edge_list = bd.edges();
  if (static_cast<int>(edge_list.size()) != bd.num_nodes() - 1)
    return fail("node graph is not a tree");
  std::vector<bool> seen(bd.num_nodes(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 0;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    ++reached;
    for (int u : bd.adj[t])
      if (!seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
  }
  if (reached != bd.num_nodes()) return fail("node graph is not a tree");

  for (auto [a, b] : edge_list) {
    Bitset side = branch_edge_side(bd, a, b);
    int rank = cut_rank(g, side);
    res.edge_list.emplace_back(a, b);
    res.edge_rank.push_back(rank);
    res.edge_side.push_back(std::move(side));
    res.rankwidth = std::max(res.rankwidth, rank);
  }
  return res;
}

BranchDecomposition caterpillar_branch_decomposition(int num_vertices) {
  BranchDecomposition bd;
  bd.num_graph_vertices = num_vertices;
  bd.leaf_of_vertex.assign(num_vertices, -1);
  auto add_node = [&bd](int vertex) {
    bd.adj.emplace_back();
    bd.vertex_of_node.push_back(vertex);
    if (vertex >= 0) bd.leaf_of_vertex[vertex] = bd.num_nodes() - 1;
    return bd.num_nodes() - 1;
  };
  auto link = [&bd](int a, int b) {
    bd.adj[a].push_back(b);
    bd.adj[b].push_back(a);
  };

  if (num_vertices == 0) return bd;
  int first = add_node(0);
  if (num_vertices == 1) return bd;
  if (num_vertices == 2) {
    link(first, add_node(1));
    return bd;
  }
  int spine = add_node(-1);
  link(spine, first);
  link(spine, add_node(1));
  for (int v = 2; v < num_vertices; ++v) {
    if (v + 1 == num_vertices) {
      link(spine, add_node(v));
    } else {
      int next = add_node(-1);
      link(spine, next);
      link(next, add_node(v));
      spine = next;
    }
  }
  return bd;
}

// --- bi-cograph recognition -------------------------------------------

namespace {

// Components of the subgraph on `verts` under the adjacency rows `adj`.
std::vector<std::vector<int>> subgraph_components(
    const std::vector<int>& verts, const std::vector<Bitset>& adj) {
  std::vector<std::vector<int>> comps;
  std::map<int, bool> seen;
  Bitset in_set(adj.empty() ? 0 : adj[0].size());
  for (int v : verts) {
    seen[v] = false;
    in_set.set(v);
  }
  for (int s : verts) {
    if (seen[s]) continue;
    std::vector<int> comp, stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      Bitset nb = adj[v] & in_set;
      for (std::size_t u = nb.next(0); u < nb.size(); u = nb.next(u + 1))
        if (!seen[static_cast<int>(u)]) {
          seen[static_cast<int>(u)] = true;
          stack.push_back(static_cast<int>(u));
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

BicographResult bicograph_recognize(const RestrictionGraph& g,
                                    const Bitset& side_a) {
  const int n = g.num_vertices();
  for (int v = 0; v < n; ++v)
    for (int u : g.neighbors(v))
      if (side_a.test(v) == side_a.test(u))
        throw InputError("graph is not bipartite with the declared sides");

  BicographResult res;
  BiCotree& tree = res.tree;
  auto add_node = [&tree](std::vector<int> verts, bool complemented) {
    BiCotree::Node node;
    node.vertices = std::move(verts);
    node.complemented = complemented;
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };

  std::vector<Bitset> adj(n);
  for (int v = 0; v < n; ++v) adj[v] = g.neighbor_bits(v);

  // Work item: component vertices + current adjacency rows + output slot.
  struct Item {
    std::vector<int> verts;
    std::vector<Bitset> adj;
    int parent;  // -1: becomes the root
  };
  std::vector<int> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;

  std::vector<Item> work;
  auto push_components = [&](const std::vector<int>& verts,
                             const std::vector<Bitset>& cur, int parent) {
    for (auto& comp : subgraph_components(verts, cur))
      work.push_back(Item{std::move(comp), cur, parent});
  };

  auto top_comps = subgraph_components(all, adj);
  if (n == 0) {
    tree.root = add_node({}, false);
    res.is_bicograph = true;
    return res;
  }
  if (top_comps.size() == 1) {
    work.push_back(Item{std::move(top_comps[0]), adj, -1});
  } else {
    tree.root = add_node(all, false);
    push_components(all, adj, tree.root);
  }

  while (!work.empty()) {
    Item item = std::move(work.back());
    work.pop_back();
    if (item.verts.size() == 1) {
      int id = add_node(item.verts, false);
      if (item.parent < 0)
        tree.root = id;
      else
        tree.nodes[item.parent].children.push_back(id);
      continue;
    }
    // Bi-complement within the component.
    Bitset in_set(n), a_side(n), b_side(n);
    for (int v : item.verts) {
      in_set.set(v);
      (side_a.test(v) ? a_side : b_side).set(v);
    }
    std::vector<Bitset> comp_adj = item.adj;
    for (int v : item.verts) {
      const Bitset& opposite = side_a.test(v) ? b_side : a_side;
      comp_adj[v] = opposite.minus(item.adj[v] & in_set);
    }
    auto pieces = subgraph_components(item.verts, comp_adj);
    if (pieces.size() == 1) {
      res.is_bicograph = false;
      res.witness = item.verts;
      return res;
    }
    int id = add_node(item.verts, true);
    if (item.parent < 0)
      tree.root = id;
    else
      tree.nodes[item.parent].children.push_back(id);
    for (auto& piece : pieces)
      work.push_back(Item{std::move(piece), comp_adj, id});
  }
  res.is_bicograph = true;
  return res;
}

BranchDecomposition bicotree_to_branch_decomposition(const BiCotree& bct,
                                                     int num_vertices) {
  BranchDecomposition bd;
  bd.num_graph_vertices = num_vertices;
  bd.leaf_of_vertex.assign(num_vertices, -1);
  auto add_node = [&bd](int vertex) {
    bd.adj.emplace_back();
    bd.vertex_of_node.push_back(vertex);
    if (vertex >= 0) bd.leaf_of_vertex[vertex] = bd.num_nodes() - 1;
    return bd.num_nodes() - 1;
  };
  auto link = [&bd](int a, int b) {
    bd.adj[a].push_back(b);
    bd.adj[b].push_back(a);
  };

  if (num_vertices == 0) return bd;

  // Bottom-up caterpillar combination; each conversion returns a tree node
  // with one free slot for its parent edge.
  auto convert = [&](auto&& self, int bn) -> int {
    const BiCotree::Node& node = bct.nodes[bn];
    if (node.children.empty()) return add_node(node.vertices.at(0));
    int attach = self(self, node.children[0]);
    for (std::size_t c = 1; c < node.children.size(); ++c) {
      int x = add_node(-1);
      link(x, attach);
      link(x, self(self, node.children[c]));
      attach = x;
    }
    return attach;
  };
  int top = convert(convert, bct.root);

  // The top node has a dangling slot (degree 2 if internal); dissolve it.
  if (bd.vertex_of_node[top] < 0 && bd.adj[top].size() == 2) {
    int a = bd.adj[top][0], b = bd.adj[top][1];
    auto drop = [&](int from, int what) {
      auto& row = bd.adj[from];
      row.erase(std::find(row.begin(), row.end(), what));
    };
    drop(a, top);
    drop(b, top);
    link(a, b);
    bd.adj[top].clear();
    // Swap the dead node to the back and pop to keep ids compact.
    int last = bd.num_nodes() - 1;
    if (top != last) {
      std::swap(bd.adj[top], bd.adj[last]);
      std::swap(bd.vertex_of_node[top], bd.vertex_of_node[last]);
      for (auto& row : bd.adj)
        for (int& u : row)
          if (u == last) u = top;
      if (bd.vertex_of_node[top] >= 0) bd.leaf_of_vertex[bd.vertex_of_node[top]] = top;
    }
    bd.adj.pop_back();
    bd.vertex_of_node.pop_back();
  }
  return bd;
}

// --- JSON ------------------------------------------------------------------

namespace {
using nlohmann::json;
}

BranchDecomposition parse_branch_decomposition(const std::string& json_text,
                                               const RestrictionGraph& g) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("decomposition parse error: ") + e.what());
  }
  std::map<std::string, int> names;
  for (int v = 0; v < g.num_vertices(); ++v) names[g.vertex_names()[v]] = v;

  std::map<i64, int> node_ids;
  auto intern = [&](i64 id) {
    auto [it, fresh] = node_ids.emplace(id, static_cast<int>(node_ids.size()));
    return it->second;
  };
  BranchDecomposition bd;
  bd.num_graph_vertices = g.num_vertices();
  bd.leaf_of_vertex.assign(g.num_vertices(), -1);

  std::vector<std::pair<int, int>> leaf_claims;  // (node, vertex)
  for (const auto& [vname, leaf] : doc.at("leaves").items()) {
    auto it = names.find(vname);
    if (it == names.end())
      throw InputError("branch decomposition names unknown vertex: " + vname);
    leaf_claims.emplace_back(intern(leaf.get<i64>()), it->second);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : doc.at("edges"))
    edges.emplace_back(intern(e.at(0).get<i64>()), intern(e.at(1).get<i64>()));

  bd.adj.assign(node_ids.size(), {});
  bd.vertex_of_node.assign(node_ids.size(), -1);
  for (auto [node, vertex] : leaf_claims) {
    if (bd.vertex_of_node[node] != -1 || bd.leaf_of_vertex[vertex] != -1)
      throw InputError("branch decomposition leaves are not a bijection");
    bd.vertex_of_node[node] = vertex;
    bd.leaf_of_vertex[vertex] = node;
  }
  for (auto [a, b] : edges) {
    bd.adj[a].push_back(b);
    bd.adj[b].push_back(a);
  }
  return bd;
}

BranchDecomposition load_branch_decomposition(const std::string& path,
                                              const RestrictionGraph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open decomposition file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_branch_decomposition(buf.str(), g);
}

std::string branch_decomposition_to_json(const BranchDecomposition& bd,
                                         const RestrictionGraph& g) {
  json doc;
  doc["leaves"] = json::object();
  for (int v = 0; v < bd.num_graph_vertices; ++v)
    doc["leaves"][g.vertex_names()[v]] = bd.leaf_of_vertex[v];
  doc["edges"] = json::array();
  for (auto [a, b] : bd.edges()) doc["edges"].push_back(json::array({a, b}));
  return doc.dump(2);
}

}  // namespace rsched
