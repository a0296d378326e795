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

#include "rsched/tree_decomp.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace rsched {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
  return w;
}

std::string TreeDecompositionCheck::describe() const {
  using V = Violation;
  switch (violation) {
    case V::kNone:
      return "ok";
    case V::kNotATree:
      return "node graph is not a tree";
    case V::kVertexUncovered:
      return "vertex " + std::to_string(witness_a) + " is in no bag (T1)";
    case V::kEdgeUncovered:
      return "edge {" + std::to_string(witness_a) + "," +
             std::to_string(witness_b) + "} is in no bag (T2)";
    case V::kDisconnected:
      return "bags containing vertex " + std::to_string(witness_a) +
             " are not connected (T3)";
  }
  return "?";
}

TreeDecompositionCheck validate_tree_decomposition(
    const RestrictionGraph& g, const TreeDecomposition& td) {
  TreeDecompositionCheck res;
  const int k = td.num_nodes();

  // Tree shape: connected with exactly k-1 edges.
  if (k > 0) {
    if (static_cast<int>(td.edges.size()) != k - 1) {
      res.violation = TreeDecompositionCheck::Violation::kNotATree;
      return res;
    }
    std::vector<std::vector<int>> adj(k);
    for (auto [a, b] : td.edges) {
      if (a < 0 || a >= k || b < 0 || b >= k || a == b) {
        res.violation = TreeDecompositionCheck::Violation::kNotATree;
        return res;
      }
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<bool> seen(k, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 0;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      ++reached;
      for (int u : adj[t])
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
    }
    if (reached != k) {
      res.violation = TreeDecompositionCheck::Violation::kNotATree;
      return res;
    }
  }

  const int n = g.num_vertices();
  std::vector<std::vector<int>> nodes_of(n);
  for (int t = 0; t < k; ++t)
    for (int v : td.bags[t]) {
      if (v < 0 || v >= n) {
        res.violation = TreeDecompositionCheck::Violation::kNotATree;
        return res;
      }
      nodes_of[v].push_back(t);
    }

  // (T1)
  for (int v = 0; v < n; ++v)
    if (nodes_of[v].empty()) {
      res.violation = TreeDecompositionCheck::Violation::kVertexUncovered;
      res.witness_a = v;
      return res;
    }

  // (T2)
  for (int v = 0; v < n; ++v)
    for (int u : g.neighbors(v)) {
      if (u < v) continue;
      bool covered = false;
      for (int t : nodes_of[v]) {
        if (std::binary_search(td.bags[t].begin(), td.bags[t].end(), u)) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        res.violation = TreeDecompositionCheck::Violation::kEdgeUncovered;
        res.witness_a = v;
        res.witness_b = u;
        return res;
      }
    }

  // (T3): the nodes containing v induce a connected subtree.
  std::vector<std::vector<int>> adj(k);
  for (auto [a, b] : td.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> in_set(k, 0), seen(k, 0);
  for (int v = 0; v < n; ++v) {
    for (int t : nodes_of[v]) in_set[t] = 1;
    std::vector<int> stack{nodes_of[v][0]};
    seen[nodes_of[v][0]] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int u : adj[t])
        if (in_set[u] && !seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
    }
    bool connected = reached == nodes_of[v].size();
    for (int t : nodes_of[v]) {
      in_set[t] = 0;
      seen[t] = 0;
    }
    if (!connected) {
      res.violation = TreeDecompositionCheck::Violation::kDisconnected;
      res.witness_a = v;
      return res;
    }
  }
  return res;
}

namespace {

// Decomposition from an elimination order: bag of v is {v} plus its
// neighbors in the fill graph at elimination time; the bag links to the bag
// of the earliest-eliminated remaining bag member.
TreeDecomposition decomposition_from_order(const RestrictionGraph& g,
                                           const std::vector<int>& order) {
  const int n = g.num_vertices();
  TreeDecomposition td;
  if (n == 0) {
    td.bags.push_back({});
    return td;
  }
  std::vector<int> pos(n);
  for (int k = 0; k < n; ++k) pos[order[k]] = k;
  std::vector<Bitset> adj(n);
  for (int v = 0; v < n; ++v) adj[v] = g.neighbor_bits(v);

  td.bags.resize(n);
  for (int k = 0; k < n; ++k) {
    int v = order[k];
    std::vector<int> later;
    for (std::size_t u = adj[v].next(0); u < adj[v].size();
         u = adj[v].next(u + 1))
      if (pos[static_cast<int>(u)] > k) later.push_back(static_cast<int>(u));
    std::vector<int> bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags[k] = std::move(bag);
    // Fill edges among the later neighbors.
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b) {
        adj[later[a]].set(later[b]);
        adj[later[b]].set(later[a]);
      }
    if (!later.empty()) {
      int next = later[0];
      for (int u : later)
        if (pos[u] < pos[next]) next = u;
      td.edges.emplace_back(k, pos[next]);
    } else if (k + 1 < n) {
      td.edges.emplace_back(k, k + 1);  // isolated remainder: chain the bags
    }
  }
  return td;
}

}  // namespace

TreeDecomposition heuristic_tree_decomposition(const RestrictionGraph& g,
                                               EliminationHeuristic heuristic) {
  const int n = g.num_vertices();
  std::vector<Bitset> adj(n);
  for (int v = 0; v < n; ++v) adj[v] = g.neighbor_bits(v);
  std::vector<bool> gone(n, false);
  std::vector<int> order;
  order.reserve(n);

  for (int step = 0; step < n; ++step) {
    int best = -1;
    long long best_score = -1;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      long long score;
      if (heuristic == EliminationHeuristic::kMinDegree) {
        score = static_cast<long long>(adj[v].count());
      } else {
        // Fill-in: non-adjacent pairs among the remaining neighborhood.
        auto nb = adj[v].to_vector();
        score = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
          for (std::size_t b = a + 1; b < nb.size(); ++b)
            if (!adj[nb[a]].test(nb[b])) ++score;
      }
      if (best == -1 || score < best_score) {
        best = v;
        best_score = score;
      }
    }
    order.push_back(best);
    gone[best] = true;
    auto nb = adj[best].to_vector();
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        adj[nb[a]].set(nb[b]);
        adj[nb[b]].set(nb[a]);
      }
    for (int u : nb) adj[u].reset(best);
  }
  return decomposition_from_order(g, order);
}

namespace {

// Neighbors of v among the not-yet-eliminated vertices, in the fill graph
// induced by eliminating `gone`: u counts if reachable from v through gone
// vertices only.
int elimination_degree(const RestrictionGraph& g, int v, const Bitset& gone,
                       Bitset* scratch_seen) {
  const int n = g.num_vertices();
  Bitset& seen = *scratch_seen;
  seen = Bitset(n);
  seen.set(v);
  std::vector<int> stack{v};
  int deg = 0;
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    const Bitset& nb = g.neighbor_bits(w);
    for (std::size_t u = nb.next(0); u < nb.size(); u = nb.next(u + 1)) {
      if (seen.test(u)) continue;
      seen.set(u);
      if (gone.test(u))
        stack.push_back(static_cast<int>(u));
      else
        ++deg;
    }
  }
  return deg;
}

}  // namespace

std::pair<int, TreeDecomposition> exact_treewidth(const RestrictionGraph& g,
                                                  int max_vertices) {
  const int n = g.num_vertices();
  if (n > max_vertices)
    throw ResourceLimitError("exact_treewidth limited to " +
                             std::to_string(max_vertices) + " vertices, got " +
                             std::to_string(n));
  if (n == 0) return {-1, decomposition_from_order(g, {})};

  // f[S] = best possible maximum elimination degree over orderings of S
  // eliminated first; choice[S] = vertex eliminated last within S.
  const std::size_t full = std::size_t{1} << n;
  std::vector<int> f(full, 0), choice(full, -1);
  Bitset scratch(n);
  for (std::size_t s = 1; s < full; ++s) {
    int best = -1, best_v = -1;
    for (int v = 0; v < n; ++v) {
      if (!(s >> v & 1)) continue;
      std::size_t prev = s & ~(std::size_t{1} << v);
      Bitset gone(n);
      for (int u = 0; u < n; ++u)
        if (prev >> u & 1) gone.set(u);
      int deg = elimination_degree(g, v, gone, &scratch);
      int val = std::max(f[prev], deg);
      if (best == -1 || val < best) {
        best = val;
        best_v = v;
      }
    }
    f[s] = best;
    choice[s] = best_v;
  }

  std::vector<int> order(n);
  std::size_t s = full - 1;
  for (int k = n - 1; k >= 0; --k) {
    order[k] = choice[s];
    s &= ~(std::size_t{1} << choice[s]);
  }
  TreeDecomposition td = decomposition_from_order(g, order);
  return {f[full - 1], td};
}

// --- simple form -------------------------------------------------------

int SimpleFormDecomposition::width() const {
  int w = -1;
  for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
  return w;
}

std::vector<int> SimpleFormDecomposition::post_order() const {
  std::vector<int> out;
  out.reserve(num_nodes());
  std::vector<std::pair<int, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [t, next_child] = stack.back();
    if (next_child < static_cast<int>(children[t].size())) {
      int c = children[t][next_child++];
      stack.emplace_back(c, 0);
    } else {
      out.push_back(t);
      stack.pop_back();
    }
  }
  return out;
}

TreeDecomposition SimpleFormDecomposition::as_tree_decomposition() const {
  TreeDecomposition td;
  td.bags = bags;
  for (int t = 0; t < num_nodes(); ++t)
    if (parent[t] >= 0) td.edges.emplace_back(parent[t], t);
  return td;
}

SimpleFormCheck validate_simple_form(const RestrictionGraph& g,
                                     const SimpleFormDecomposition& sfd) {
  SimpleFormCheck res;
  auto fail = [&](std::string why) {
    res.ok = false;
    res.problem = std::move(why);
    return res;
  };
  if (sfd.root < 0 || sfd.root >= sfd.num_nodes()) return fail("bad root");
  if (!sfd.bags[sfd.root].empty()) return fail("root bag not empty");
  if (sfd.children[sfd.root].size() > 1)
    return fail("root must be a leaf of the underlying tree");
  for (int t = 0; t < sfd.num_nodes(); ++t) {
    if (sfd.children[t].size() > 2)
      return fail("node " + std::to_string(t) + " has >2 children");
    if (sfd.children[t].empty() && !sfd.bags[t].empty())
      return fail("leaf " + std::to_string(t) + " has a nonempty bag");
  }
  auto check = validate_tree_decomposition(g, sfd.as_tree_decomposition());
  if (!check.ok()) return fail(check.describe());
  return res;
}

SimpleFormDecomposition normalize_simple_form(const TreeDecomposition& td,
                                              int root_choice) {
  SimpleFormDecomposition out;
  auto add_node = [&out](std::vector<int> bag, int parent) {
    out.bags.push_back(std::move(bag));
    out.parent.push_back(parent);
    out.children.emplace_back();
    int id = out.num_nodes() - 1;
    if (parent >= 0) out.children[parent].push_back(id);
    return id;
  };

  if (td.num_nodes() == 0) {
    out.root = add_node({}, -1);
    return out;
  }

  const int k = td.num_nodes();
  std::vector<std::vector<int>> adj(k);
  for (auto [a, b] : td.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  int start = (root_choice >= 0 && root_choice < k) ? root_choice : 0;

  // Fresh empty root above the chosen original node; then copy the original
  // tree below it, binarizing >2-child nodes with duplicate-bag dummies and
  // hanging an empty leaf under every original leaf with a nonempty bag.
  out.root = add_node({}, -1);
  // (original node, parent in output, original parent)
  std::vector<std::tuple<int, int, int>> stack{{start, out.root, -1}};
  while (!stack.empty()) {
    auto [t, out_parent, orig_parent] = stack.back();
    stack.pop_back();
    int id = add_node(td.bags[t], out_parent);
    std::vector<int> kids;
    for (int u : adj[t])
      if (u != orig_parent) kids.push_back(u);
    if (kids.empty()) {
      if (!td.bags[t].empty()) add_node({}, id);
      continue;
    }
    // Binarize: >2 children hang off a chain of duplicate-bag dummies.
    int attach = id;
    std::size_t c = 0;
    while (kids.size() - c > 2) {
      stack.emplace_back(kids[c], attach, t);
      attach = add_node(td.bags[t], attach);
      ++c;
    }
    for (; c < kids.size(); ++c) stack.emplace_back(kids[c], attach, t);
  }
  return out;
}

// --- JSON ------------------------------------------------------------------

namespace {

using nlohmann::json;

std::map<std::string, int> name_index(const RestrictionGraph& g) {
  std::map<std::string, int> idx;
  for (int v = 0; v < g.num_vertices(); ++v) idx[g.vertex_names()[v]] = v;
  return idx;
}

}  // namespace

TreeDecomposition parse_tree_decomposition(const std::string& json_text,
                                           const RestrictionGraph& g,
                                           std::optional<int>* root_out) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("decomposition parse error: ") + e.what());
  }
  auto names = name_index(g);
  TreeDecomposition td;
  std::map<i64, int> node_ids;
  for (const auto& node : doc.at("nodes")) {
    i64 id = node.at("id").get<i64>();
    if (!node_ids.emplace(id, td.num_nodes()).second)
      throw InputError("duplicate decomposition node id");
    std::vector<int> bag;
    for (const auto& vname : node.at("bag")) {
      auto it = names.find(vname.get<std::string>());
      if (it == names.end())
        throw InputError("decomposition bag names unknown vertex: " +
                         vname.get<std::string>());
      bag.push_back(it->second);
    }
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    td.bags.push_back(std::move(bag));
  }
  for (const auto& e : doc.at("edges")) {
    i64 a = e.at(0).get<i64>(), b = e.at(1).get<i64>();
    if (!node_ids.count(a) || !node_ids.count(b))
      throw InputError("decomposition edge references unknown node");
    td.edges.emplace_back(node_ids[a], node_ids[b]);
  }
  if (root_out) {
    *root_out = std::nullopt;
    if (doc.contains("root")) *root_out = node_ids.at(doc["root"].get<i64>());
  }
  return td;
}

TreeDecomposition load_tree_decomposition(const std::string& path,
                                          const RestrictionGraph& g,
                                          std::optional<int>* root_out) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open decomposition file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tree_decomposition(buf.str(), g, root_out);
}

std::string tree_decomposition_to_json(const TreeDecomposition& td,
                                       const RestrictionGraph& g,
                                       std::optional<int> root) {
  json doc;
  doc["nodes"] = json::array();
  for (int t = 0; t < td.num_nodes(); ++t) {
    json node;
    node["id"] = t;
    node["bag"] = json::array();
    for (int v : td.bags[t]) node["bag"].push_back(g.vertex_names()[v]);
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = json::array();
  for (auto [a, b] : td.edges) doc["edges"].push_back(json::array({a, b}));
  if (root) doc["root"] = *root;
  return doc.dump(2);
}

}  // namespace rsched
