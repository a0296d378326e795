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

#include "rsched/ptas_rankwidth.hpp"

#include <algorithm>

#include "flow_util.hpp"
#include "rsched/approx.hpp"
#include "rsched/graphs.hpp"

namespace rsched {

SizeCatalog SizeCatalog::build(const Instance& inst) {
  if (!inst.is_restricted_identical())
    throw InputError("size catalog requires a restricted-identical instance");
  SizeCatalog cat;
  cat.size_of_job.assign(inst.num_jobs(), -1);
  for (int j = 0; j < inst.num_jobs(); ++j) {
    if (inst.machines_of(j).none()) continue;
    cat.sizes.push_back(inst.job_size(j));
  }
  std::sort(cat.sizes.begin(), cat.sizes.end());
  cat.sizes.erase(std::unique(cat.sizes.begin(), cat.sizes.end()),
                  cat.sizes.end());
  for (int j = 0; j < inst.num_jobs(); ++j) {
    if (inst.machines_of(j).none()) continue;
    cat.size_of_job[j] = static_cast<int>(
        std::lower_bound(cat.sizes.begin(), cat.sizes.end(),
                         inst.job_size(j)) -
        cat.sizes.begin());
  }
  return cat;
}

i64 class_vec_total_time(const ClassVec& v, const SizeCatalog& catalog) {
  const int d = catalog.count();
  i64 total = 0;
  for (std::size_t slot = 0; slot < v.size(); ++slot)
    total += static_cast<i64>(v[slot]) * catalog.sizes[slot % d];
  return total;
}

// --- rounding --------------------------------------------------------------

RoundedInstance round_instance(const Instance& inst, const Rational& eps,
                               i64 upper_bound) {
  if (!eps.positive()) throw InputError("round_instance requires eps > 0");
  if (!inst.is_restricted_identical())
    throw InputError(
        "round_instance requires a restricted-identical instance");
  if (!inst.feasible())
    throw InputError("round_instance requires a feasible instance");
  if (upper_bound <= 0) throw InputError("round_instance requires B > 0");

  RoundedInstance ri;
  Rational third(1, 3), eps7(eps.num, 7 * eps.den);
  ri.delta = eps7 < third ? eps7 : third;
  if (ri.delta.den > 100000)
    throw InputError("epsilon denominator too large for exact arithmetic");
  ri.upper_bound = upper_bound;
  ri.original_jobs = inst.num_jobs();

  const i64 a = ri.delta.num, b = ri.delta.den;
  const i64 n = inst.num_jobs();
  const i64 big = ri.upper_bound;
  ri.unit_den = n * b * b;       // one unit = B / (n*b^2)
  ri.small_size_units = a * b;   // delta*B/n
  ri.delta_b_units = a * b * n;  // delta*B

  std::vector<std::string> job_ids;
  std::vector<i64> unit_sizes;
  ri.copies_of.assign(inst.num_jobs(), {});
  for (int j = 0; j < inst.num_jobs(); ++j) {
    i64 p = inst.job_size(j);
    if (p * b > a * big) {
      // Big: delta^2*B * ceil(p / (delta^2*B)), in grid units.
      i64 units = a * a * n * ceil_mul_div(p, b * b, a * a * big);
      ri.copies_of[j].push_back(static_cast<int>(job_ids.size()));
      ri.origin_job.push_back(j);
      ri.from_small.push_back(0);
      job_ids.push_back(inst.job_ids()[j]);
      unit_sizes.push_back(units);
    } else {
      i64 copies = ceil_mul_div(p, n * b, a * big);
      for (i64 c = 0; c < copies; ++c) {
        ri.copies_of[j].push_back(static_cast<int>(job_ids.size()));
        ri.origin_job.push_back(j);
        ri.from_small.push_back(1);
        job_ids.push_back(inst.job_ids()[j] + "#" + std::to_string(c));
        unit_sizes.push_back(ri.small_size_units);
      }
    }
  }

  std::vector<std::vector<i64>> proc(
      inst.num_machines(),
      std::vector<i64>(job_ids.size(), Instance::kForbidden));
  for (std::size_t rj = 0; rj < job_ids.size(); ++rj) {
    int j = ri.origin_job[rj];
    for (int i : inst.machines_of(j).to_vector())
      proc[i][rj] = unit_sizes[rj];
  }
  ri.instance = Instance(std::move(job_ids), inst.machine_ids(),
                         std::move(proc), true);
  return ri;
}

// --- edge DP helpers --------------------------------------------------------

namespace {

// Odometer over all v <= bound componentwise.
template <class F>
void for_each_subvector(const ClassVec& bound, F&& fn) {
  ClassVec v(bound.size(), 0);
  while (true) {
    fn(static_cast<const ClassVec&>(v));
    std::size_t k = 0;
    while (k < v.size() && v[k] == bound[k]) {
      v[k] = 0;
      ++k;
    }
    if (k == v.size()) break;
    ++v[k];
  }
}

ClassVec vec_add(const ClassVec& x, const ClassVec& y) {
  ClassVec r = x;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += y[k];
  return r;
}

ClassVec vec_sub(const ClassVec& x, const ClassVec& y) {
  ClassVec r = x;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= y[k];
  return r;
}

int vec_total(const ClassVec& v) {
  int t = 0;
  for (int c : v) t += c;
  return t;
}

}  // namespace

EdgeDpSolver::EdgeDpSolver(const Instance& inst, const BranchDecomposition& bd,
                           std::size_t table_budget)
    : inst_(inst), bd_(bd), table_budget_(table_budget) {
  if (!inst.is_restricted_identical())
    throw InputError("edge DP requires a restricted-identical instance");
  if (bd.num_graph_vertices != inst.num_jobs() + inst.num_machines())
    throw InputError(
        "branch decomposition does not match the incidence graph");
  catalog_ = SizeCatalog::build(inst);
}

ClassVec EdgeDpSolver::translate(const Translation& tr,
                                 const ClassVec& v) const {
  const int d = catalog_.count();
  ClassVec out(static_cast<std::size_t>(tr.target_types) * d, 0);
  for (std::size_t src = 0; src < tr.type_map.size(); ++src)
    for (int s = 0; s < d; ++s)
      out[static_cast<std::size_t>(tr.type_map[src]) * d + s] +=
          v[src * d + s];
  return out;
}

void EdgeDpSolver::check_budget() {
  if (total_entries_ > table_budget_)
    throw ResourceLimitError("edge DP table budget exceeded");
}

void EdgeDpSolver::build_edges() {
  const Instance& inst = inst_;
  const int n = inst.num_jobs();
  const int m = inst.num_machines();

  // Structural validation; cut ranks are not needed to run the DP.
  int leaves = 0;
  for (int t = 0; t < bd_.num_nodes(); ++t) {
    int deg = static_cast<int>(bd_.adj[t].size());
    if (bd_.vertex_of_node[t] >= 0) {
      ++leaves;
      if (deg != 1 && bd_.num_nodes() > 1)
        throw InputError("branch decomposition leaf with degree != 1");
    } else if (deg != 3) {
      throw InputError("branch decomposition internal node with degree != 3");
    }
  }
  if (leaves != n + m)
    throw InputError("branch decomposition leaf count mismatch");

  // Root at the first job's leaf and orient every edge toward it.
  const int root_leaf = bd_.leaf_of_vertex[0];
  parent_.assign(bd_.num_nodes(), -2);
  parent_[root_leaf] = -1;
  std::vector<int> order{root_leaf};
  for (std::size_t q = 0; q < order.size(); ++q) {
    for (int u : bd_.adj[order[q]])
      if (parent_[u] == -2) {
        parent_[u] = order[q];
        order.push_back(u);
      }
  }
  if (static_cast<int>(order.size()) != bd_.num_nodes())
    throw InputError("branch decomposition is not connected");
  root_edge_child_ = bd_.adj[root_leaf].at(0);

  edges_.clear();
  edges_.resize(bd_.num_nodes());
  edge_order_.clear();
  std::vector<Bitset> below(bd_.num_nodes(), Bitset(n + m));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int c = *it;
    if (c == root_leaf) continue;
    EdgeData& ed = edges_[c];
    ed.info.child_node = c;
    if (bd_.vertex_of_node[c] >= 0) {
      ed.leaf = true;
      ed.leaf_vertex = bd_.vertex_of_node[c];
      below[c].set(ed.leaf_vertex);
    } else {
      std::vector<int> kids;
      for (int u : bd_.adj[c])
        if (u != parent_[c]) kids.push_back(u);
      std::sort(kids.begin(), kids.end());
      ed.left_child_edge = kids[0];
      ed.right_child_edge = kids[1];
      below[c] = below[kids[0]] | below[kids[1]];
    }
    Bitset below_jobs(n), below_machines(m);
    for (std::size_t v = below[c].next(0); v < below[c].size();
         v = below[c].next(v + 1)) {
      if (static_cast<int>(v) < n)
        below_jobs.set(v);
      else
        below_machines.set(v - static_cast<std::size_t>(n));
    }
    ed.info.below_jobs = std::move(below_jobs);
    ed.info.below_machines = std::move(below_machines);
    edge_order_.push_back(c);
  }

  Bitset all_jobs(n), all_machines(m);
  for (int j = 0; j < n; ++j) all_jobs.set(j);
  for (int i = 0; i < m; ++i) all_machines.set(i);

  const int d = catalog_.count();
  auto make_typing = [&](const Bitset& side_jobs, const Bitset& far_machines,
                         std::vector<TypeGroup>* groups, ClassVec* bound,
                         std::vector<int>* type_of) {
    ConnectionTypePartition part =
        connection_types(inst, side_jobs, far_machines);
    groups->clear();
    type_of->assign(n, -1);
    bound->assign(static_cast<std::size_t>(part.num_types()) * d, 0);
    for (int t = 0; t < part.num_types(); ++t) {
      TypeGroup g;
      g.machines = part.groups[t].machines;
      g.jobs = part.groups[t].jobs;
      for (int j : g.jobs) {
        (*type_of)[j] = t;
        ++(*bound)[static_cast<std::size_t>(t) * d + catalog_.size_of_job[j]];
      }
      groups->push_back(std::move(g));
    }
  };

  for (int c : edge_order_) {
    EdgeData& ed = edges_[c];
    Bitset above_jobs = all_jobs.minus(ed.info.below_jobs);
    Bitset above_machines = all_machines.minus(ed.info.below_machines);
    make_typing(ed.info.below_jobs, above_machines, &ed.info.below_types,
                &ed.info.below_bound, &ed.below_type_of);
    make_typing(above_jobs, ed.info.below_machines, &ed.info.above_types,
                &ed.info.above_bound, &ed.above_type_of);
  }

  // Translations between incident edges: a source type maps to the unique
  // target type whose neighborhood is the source's cut down to the target's
  // machine side.
  auto make_translation = [&](const std::vector<TypeGroup>& src,
                              const std::vector<TypeGroup>& tgt,
                              const Bitset& tgt_machines) {
    Translation tr;
    tr.target_types = static_cast<int>(tgt.size());
    std::map<Bitset, int> index;
    for (int t = 0; t < static_cast<int>(tgt.size()); ++t)
      index.emplace(tgt[t].machines, t);
    for (const TypeGroup& g : src) {
      auto it = index.find(g.machines & tgt_machines);
      if (it == index.end())
        throw std::logic_error("connection type translation has no target");
      tr.type_map.push_back(it->second);
    }
    return tr;
  };

  for (int c : edge_order_) {
    EdgeData& ed = edges_[c];
    if (ed.leaf) continue;
    const EdgeData& le = edges_[ed.left_child_edge];
    const EdgeData& re = edges_[ed.right_child_edge];
    ed.lift_left = make_translation(
        le.info.below_types, ed.info.below_types,
        all_machines.minus(ed.info.below_machines));
    ed.lift_right = make_translation(
        re.info.below_types, ed.info.below_types,
        all_machines.minus(ed.info.below_machines));
    ed.drop_left = make_translation(ed.info.above_types, le.info.above_types,
                                    le.info.below_machines);
    ed.drop_right = make_translation(ed.info.above_types, re.info.above_types,
                                     re.info.below_machines);
    ed.cross_lr = make_translation(le.info.below_types, re.info.above_types,
                                   re.info.below_machines);
    ed.cross_rl = make_translation(re.info.below_types, le.info.above_types,
                                   le.info.below_machines);
  }
}

void EdgeDpSolver::fill_leaf(EdgeData& ed) {
  const int d = catalog_.count();
  if (ed.leaf_vertex < inst_.num_jobs()) {
    // Job leaf: the job goes up, nothing comes down.
    ClassVec down0(ed.info.above_bound.size(), 0);
    ed.table[{ed.info.below_bound, down0}] =
        Entry{Cost(0), {}, {}, {}, {}, {}, {}};
    ++total_entries_;
    check_budget();
    return;
  }
  // Machine leaf: arriving jobs are processed here and must be adjacent.
  const int machine = ed.leaf_vertex - inst_.num_jobs();
  std::size_t ops = 0;
  for_each_subvector(ed.info.above_bound, [&](const ClassVec& down) {
    if (++ops > table_budget_)
      throw ResourceLimitError("edge DP table budget exceeded");
    i64 total = 0;
    for (std::size_t t = 0; t < ed.info.above_types.size(); ++t) {
      bool adjacent = ed.info.above_types[t].machines.test(machine);
      for (int s = 0; s < d; ++s) {
        int cnt = down[t * d + s];
        if (cnt == 0) continue;
        if (!adjacent) return;
        total += static_cast<i64>(cnt) * catalog_.sizes[s];
      }
    }
    ed.table[{ClassVec{}, down}] = Entry{Cost(total), {}, {}, {}, {}, {}, {}};
    ++total_entries_;
  });
  check_budget();
}

void EdgeDpSolver::fill_internal(EdgeData& ed) {
  EdgeData& le = edges_[ed.left_child_edge];
  EdgeData& re = edges_[ed.right_child_edge];

  // Down-class translations are independent of the up combos; cache them.
  std::map<ClassVec, std::pair<ClassVec, ClassVec>> drop_cache;
  for_each_subvector(ed.info.above_bound, [&](const ClassVec& dv) {
    drop_cache.emplace(dv, std::make_pair(translate(ed.drop_left, dv),
                                          translate(ed.drop_right, dv)));
    if (drop_cache.size() > table_budget_)
      throw ResourceLimitError("edge DP table budget exceeded");
  });

  std::size_t ops = 0;
  const std::size_t op_budget = table_budget_ * 16;
  auto charge = [&ops, op_budget](std::size_t amount) {
    ops += amount;
    if (ops > op_budget)
      throw ResourceLimitError("edge DP operation budget exceeded");
  };
  // Left subtree jobs going up split into (continues up e, crosses right);
  // right subtree jobs into (crosses left, continues up e).
  for_each_subvector(le.info.below_bound, [&](const ClassVec& l_up) {
    ClassVec l_rest = vec_sub(le.info.below_bound, l_up);
    const ClassVec up_from_left = translate(ed.lift_left, l_up);
    for_each_subvector(l_rest, [&](const ClassVec& l_cross) {
      const ClassVec l_total = vec_add(l_up, l_cross);
      const ClassVec r_down_base = translate(ed.cross_lr, l_cross);
      for_each_subvector(re.info.below_bound, [&](const ClassVec& r_cross) {
        charge(1);
        ClassVec r_rest = vec_sub(re.info.below_bound, r_cross);
        const ClassVec l_down_base = translate(ed.cross_rl, r_cross);
        for_each_subvector(r_rest, [&](const ClassVec& r_up) {
          const ClassVec up =
              vec_add(up_from_left, translate(ed.lift_right, r_up));
          const ClassVec r_total = vec_add(r_cross, r_up);
          for_each_subvector(ed.info.above_bound, [&](const ClassVec& down_l) {
            charge(1);
            const auto& dl = drop_cache.at(down_l);
            Cost vl = Cost::infinity();
            {
              auto it = le.table.find(
                  std::make_pair(l_total, vec_add(dl.first, l_down_base)));
              if (it != le.table.end()) vl = it->second.val;
            }
            if (vl.is_infinite()) return;
            ClassVec down_r_bound = vec_sub(ed.info.above_bound, down_l);
            for_each_subvector(down_r_bound, [&](const ClassVec& down_r) {
              charge(1);
              const auto& dr = drop_cache.at(down_r);
              auto it = re.table.find(
                  std::make_pair(r_total, vec_add(dr.second, r_down_base)));
              if (it == re.table.end()) return;
              Cost v = max(vl, it->second.val);
              auto [slot, fresh] = ed.table.try_emplace(
                  std::make_pair(up, vec_add(down_l, down_r)));
              if (fresh) {
                ++total_entries_;
                check_budget();
              }
              Entry& e = slot->second;
              if (fresh || v < e.val)
                e = Entry{v, down_l, down_r, l_up, l_cross, r_cross, r_up};
            });
          });
        });
      });
    });
  });
}

void EdgeDpSolver::fill_edge(int child_node) {
  EdgeData& ed = edges_[child_node];
  if (ed.leaf)
    fill_leaf(ed);
  else
    fill_internal(ed);
}

Cost EdgeDpSolver::table_value(int index, const ClassVec& up,
                               const ClassVec& down) const {
  const EdgeData& ed = edges_[edge_order_[index]];
  auto it = ed.table.find(std::make_pair(up, down));
  return it == ed.table.end() ? Cost::infinity() : it->second.val;
}

namespace {

// Deterministic class-consistent split: per (type,size) slot take the first
// first_counts jobs in ascending id order.
std::pair<std::vector<int>, std::vector<int>> split_by_class(
    const std::vector<int>& jobs, const std::vector<int>& type_of,
    const std::vector<int>& size_of, int d, const ClassVec& first_counts) {
  std::vector<int> taken(first_counts.size(), 0);
  std::vector<int> first, rest;
  for (int j : jobs) {
    std::size_t slot = static_cast<std::size_t>(type_of[j]) * d + size_of[j];
    if (taken[slot] < first_counts[slot]) {
      ++taken[slot];
      first.push_back(j);
    } else {
      rest.push_back(j);
    }
  }
  for (std::size_t k = 0; k < taken.size(); ++k)
    if (taken[k] != first_counts[k])
      throw std::logic_error("class split counts do not match the job set");
  return {std::move(first), std::move(rest)};
}

}  // namespace

void EdgeDpSolver::descend(int child_node, const ClassVec& up,
                           const ClassVec& down,
                           std::map<int, Realized>* realized) const {
  const EdgeData& ed = edges_[child_node];
  Realized& r = (*realized)[child_node];
  r.up = up;
  r.down = down;
  if (ed.leaf) return;
  const Entry& e = ed.table.at(std::make_pair(up, down));
  ClassVec l_down = vec_add(translate(ed.drop_left, e.down_l),
                            translate(ed.cross_rl, e.up_r_cross));
  ClassVec r_down = vec_add(translate(ed.drop_right, e.down_r),
                            translate(ed.cross_lr, e.up_l_cross));
  descend(ed.left_child_edge, vec_add(e.up_l_up, e.up_l_cross), l_down,
          realized);
  descend(ed.right_child_edge, vec_add(e.up_r_cross, e.up_r_up), r_down,
          realized);
}

std::vector<int> EdgeDpSolver::resolve_up(
    int child_node, std::map<int, Realized>* realized) const {
  const EdgeData& ed = edges_[child_node];
  Realized& r = realized->at(child_node);
  if (ed.leaf) {
    if (ed.leaf_vertex < inst_.num_jobs() && vec_total(r.up) > 0)
      r.up_set = {ed.leaf_vertex};
    return r.up_set;
  }
  const Entry& e = ed.table.at(std::make_pair(r.up, r.down));
  std::vector<int> from_left = resolve_up(ed.left_child_edge, realized);
  std::vector<int> from_right = resolve_up(ed.right_child_edge, realized);

  const EdgeData& le = edges_[ed.left_child_edge];
  const EdgeData& re = edges_[ed.right_child_edge];
  auto l_split = split_by_class(from_left, le.below_type_of,
                                catalog_.size_of_job, catalog_.count(),
                                e.up_l_up);
  auto r_split = split_by_class(from_right, re.below_type_of,
                                catalog_.size_of_job, catalog_.count(),
                                e.up_r_cross);
  r.left_cross = l_split.second;   // left jobs crossing into the right subtree
  r.right_cross = r_split.first;   // right jobs crossing into the left subtree
  r.up_set = l_split.first;
  r.up_set.insert(r.up_set.end(), r_split.second.begin(),
                  r_split.second.end());
  std::sort(r.up_set.begin(), r.up_set.end());
  return r.up_set;
}

void EdgeDpSolver::push_down(int child_node, std::vector<int> down_set,
                             const std::map<int, Realized>& realized,
                             Schedule* out) const {
  const EdgeData& ed = edges_[child_node];
  if (ed.leaf) {
    if (ed.leaf_vertex < inst_.num_jobs()) {
      if (!down_set.empty())
        throw std::logic_error("jobs routed into a job leaf");
      return;
    }
    const int machine = ed.leaf_vertex - inst_.num_jobs();
    for (int j : down_set) out->machine_of[j] = machine;
    return;
  }
  const Realized& r = realized.at(child_node);
  const Entry& e = ed.table.at(std::make_pair(r.up, r.down));
  auto split = split_by_class(down_set, ed.above_type_of,
                              catalog_.size_of_job, catalog_.count(),
                              e.down_l);

  std::vector<int> left_down = std::move(split.first);
  left_down.insert(left_down.end(), r.right_cross.begin(),
                   r.right_cross.end());
  std::sort(left_down.begin(), left_down.end());
  std::vector<int> right_down = std::move(split.second);
  right_down.insert(right_down.end(), r.left_cross.begin(),
                    r.left_cross.end());
  std::sort(right_down.begin(), right_down.end());
  push_down(ed.left_child_edge, std::move(left_down), realized, out);
  push_down(ed.right_child_edge, std::move(right_down), realized, out);
}

SolveResult EdgeDpSolver::solve() {
  const Instance& inst = inst_;
  if (inst.num_jobs() == 0) {
    SolveResult r;
    r.feasible = true;
    r.value = 0;
    r.schedule = Schedule(0);
    return r;
  }
  if (!inst.feasible()) return SolveResult::infeasible_result();

  if (!filled_) {
    build_edges();
    for (int c : edge_order_) fill_edge(c);
    filled_ = true;
  }

  const EdgeData& root = edges_[root_edge_child_];
  ClassVec up0(root.info.below_bound.size(), 0);
  auto it = root.table.find(std::make_pair(up0, root.info.above_bound));
  if (it == root.table.end() || it->second.val.is_infinite())
    throw std::logic_error("edge DP: no root entry on feasible input");

  SolveResult result;
  result.feasible = true;
  result.value = it->second.val.value();
  result.schedule = Schedule(inst.num_jobs());

  std::map<int, Realized> realized;
  descend(root_edge_child_, up0, root.info.above_bound, &realized);
  std::vector<int> up_set = resolve_up(root_edge_child_, &realized);
  if (!up_set.empty())
    throw std::logic_error("edge DP: jobs escaped through the root edge");
  push_down(root_edge_child_, {0}, realized, &result.schedule);

  if (makespan(inst, result.schedule) != result.value)
    throw std::logic_error("edge DP: schedule value mismatch");
  return result;
}

SolveResult solve_edge_dp(const Instance& inst, const BranchDecomposition& bd,
                          std::size_t table_budget) {
  return EdgeDpSolver(inst, bd, table_budget).solve();
}

// --- back rounding ----------------------------------------------------------

Schedule round_small_jobs_back(const Instance& inst, const RoundedInstance& ri,
                               const Schedule& rounded_schedule) {
  Schedule out(inst.num_jobs());
  const i64 a = ri.delta.num, b = ri.delta.den;
  const i64 n = ri.original_jobs;

  // Small-copy counts per machine define the budgets t_i; scaling by b*n
  // keeps the capacities cnt_i * a * B integral.
  std::vector<i64> copy_count(inst.num_machines(), 0);
  std::vector<int> small_jobs;
  for (int j = 0; j < inst.num_jobs(); ++j) {
    if (ri.copies_of[j].empty()) continue;
    if (!ri.from_small[ri.copies_of[j][0]]) {
      int machine = rounded_schedule.machine_of[ri.copies_of[j][0]];
      if (machine == Schedule::kUnassigned || !inst.allowed(machine, j))
        throw InputError("rounded schedule is not feasible for a big job");
      out.machine_of[j] = machine;
      continue;
    }
    small_jobs.push_back(j);
    for (int rj : ri.copies_of[j]) {
      int machine = rounded_schedule.machine_of[rj];
      if (machine == Schedule::kUnassigned || !inst.allowed(machine, j))
        throw InputError("rounded schedule is not feasible for a small copy");
      ++copy_count[machine];
    }
  }
  if (small_jobs.empty()) return out;

  flowutil::BipartiteTimeFlow net;
  net.machine_cap.resize(inst.num_machines());
  for (int i = 0; i < inst.num_machines(); ++i)
    net.machine_cap[i] = copy_count[i] * a * ri.upper_bound;
  for (int j : small_jobs) {
    net.supply.push_back(inst.job_size(j) * b * n);
    net.arcs.push_back(inst.machines_of(j).to_vector());
  }
  // The fractional assignment induced by the copies is feasible for these
  // capacities, so the flow always routes fully.
  if (!net.run())
    throw std::logic_error("small-job rounding flow is infeasible");
  net.cancel_cycles();
  std::vector<int> assign = net.round_to_assignment();
  for (std::size_t k = 0; k < small_jobs.size(); ++k)
    out.machine_of[small_jobs[k]] = assign[k];
  return out;
}

// --- pipeline ---------------------------------------------------------------

namespace {

// Expands a branch decomposition of the original incidence graph to the
// rounded one: machine leaves are renumbered, big-job leaves carry over,
// and each small job's leaf grows into a chain carrying its copies.
BranchDecomposition expand_branch_decomposition(const BranchDecomposition& bd,
                                                const Instance& inst,
                                                const RoundedInstance& ri) {
  const int n = inst.num_jobs();
  const int np = ri.instance.num_jobs();
  BranchDecomposition out;
  out.num_graph_vertices = np + inst.num_machines();
  out.leaf_of_vertex.assign(out.num_graph_vertices, -1);
  out.adj.assign(bd.num_nodes(), {});
  out.vertex_of_node.assign(bd.num_nodes(), -1);

  auto add_node = [&out](int vertex) {
    out.adj.emplace_back();
    out.vertex_of_node.push_back(vertex);
    if (vertex >= 0) out.leaf_of_vertex[vertex] = out.num_nodes() - 1;
    return out.num_nodes() - 1;
  };
  auto link = [&out](int x, int y) {
    out.adj[x].push_back(y);
    out.adj[y].push_back(x);
  };

  for (auto [x, y] : bd.edges()) link(x, y);
  for (int node = 0; node < bd.num_nodes(); ++node) {
    int v = bd.vertex_of_node[node];
    if (v < 0) continue;
    if (v >= n) {
      out.vertex_of_node[node] = np + (v - n);
      out.leaf_of_vertex[np + (v - n)] = node;
      continue;
    }
    const std::vector<int>& copies = ri.copies_of[v];
    if (copies.size() == 1) {
      out.vertex_of_node[node] = copies[0];
      out.leaf_of_vertex[copies[0]] = node;
      continue;
    }
    // The old leaf becomes the first spine node of a copy chain.
    int spine = node;
    link(spine, add_node(copies[0]));
    for (std::size_t c = 1; c + 1 < copies.size(); ++c) {
      int next = add_node(-1);
      link(spine, next);
      link(next, add_node(copies[c]));
      spine = next;
    }
    link(spine, add_node(copies.back()));
  }
  return out;
}

}  // namespace

SolveResult ptas(const Instance& inst, const Rational& eps,
                 const BranchDecomposition* bd, std::size_t table_budget) {
  if (!eps.positive()) throw InputError("ptas requires eps > 0");
  if (!inst.is_restricted_identical())
    throw InputError("ptas requires a restricted-identical instance");
  if (inst.num_jobs() == 0) {
    SolveResult r;
    r.feasible = true;
    r.value = 0;
    r.schedule = Schedule(0);
    return r;
  }
  if (!inst.feasible()) return SolveResult::infeasible_result();

  SolveResult bound = two_approx(SubinstanceRef::whole(inst));
  RoundedInstance ri = round_instance(inst, eps, bound.value);

  BranchDecomposition rounded_bd;
  if (bd) {
    rounded_bd = expand_branch_decomposition(*bd, inst, ri);
  } else {
    RestrictionGraph incidence =
        build_graph(ri.instance, GraphKind::kIncidence);
    Bitset job_side(incidence.num_vertices());
    for (int j = 0; j < ri.instance.num_jobs(); ++j) job_side.set(j);
    BicographResult rec = bicograph_recognize(incidence, job_side);
    if (!rec.is_bicograph)
      throw InputError(
          "incidence graph is not a bi-cograph; supply a branch "
          "decomposition");
    rounded_bd =
        bicotree_to_branch_decomposition(rec.tree, incidence.num_vertices());
  }

  SolveResult inner = solve_edge_dp(ri.instance, rounded_bd, table_budget);
  if (!inner.feasible) return SolveResult::infeasible_result();

  SolveResult r;
  r.feasible = true;
  r.schedule = round_small_jobs_back(inst, ri, inner.schedule);
  r.value = makespan(inst, r.schedule);
  return r;
}

// --- audit ------------------------------------------------------------------

namespace {

// All subsets matching the per-(type,size) counts, slot by slot.
void representatives_rec(const std::vector<std::vector<int>>& slot_jobs,
                         const ClassVec& counts, std::size_t slot,
                         std::vector<int>* current,
                         std::vector<std::vector<int>>* out,
                         std::size_t limit) {
  if (out->size() > limit)
    throw ResourceLimitError("class audit has too many representatives");
  if (slot == slot_jobs.size()) {
    out->push_back(*current);
    return;
  }
  const std::vector<int>& pool = slot_jobs[slot];
  const int want = counts[slot];
  std::vector<int> pick(want);
  auto choose = [&](auto&& self, int from, int got) -> void {
    if (got == want) {
      std::size_t before = current->size();
      current->insert(current->end(), pick.begin(), pick.end());
      representatives_rec(slot_jobs, counts, slot + 1, current, out, limit);
      current->resize(before);
      return;
    }
    for (int k = from; k <= static_cast<int>(pool.size()) - (want - got);
         ++k) {
      pick[got] = pool[k];
      self(self, k + 1, got + 1);
    }
  };
  choose(choose, 0, 0);
}

std::vector<std::vector<int>> representatives(
    const EdgeDpSolver::EdgeInfo& info, bool below, const SizeCatalog& cat,
    const ClassVec& counts, std::size_t limit) {
  const auto& types = below ? info.below_types : info.above_types;
  const int d = cat.count();
  std::vector<std::vector<int>> slot_jobs(types.size() * d);
  for (std::size_t t = 0; t < types.size(); ++t)
    for (int j : types[t].jobs)
      slot_jobs[t * d + cat.size_of_job[j]].push_back(j);
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  representatives_rec(slot_jobs, counts, 0, &current, &out, limit);
  return out;
}

}  // namespace

ClassAuditResult class_representative_audit(
    EdgeDpSolver& solver, int edge_index, const ClassVec& up,
    const ClassVec& down,
    const std::function<SolveResult(const SubinstanceRef&)>& reference) {
  ClassAuditResult res;
  const EdgeDpSolver::EdgeInfo& info = solver.edge(edge_index);
  const Instance& inst = solver.instance();

  std::vector<std::vector<int>> ups =
      representatives(info, true, solver.catalog(), up, 5000);
  std::vector<std::vector<int>> downs =
      representatives(info, false, solver.catalog(), down, 5000);

  Cost best = Cost::infinity();
  for (const auto& up_rep : ups) {
    Bitset base = info.below_jobs;
    for (int j : up_rep) base.reset(j);
    bool have = false;
    Cost value;
    for (const auto& down_rep : downs) {
      Bitset jobs = base;
      for (int j : down_rep) jobs.set(j);
      SolveResult r =
          reference(SubinstanceRef(inst, jobs, info.below_machines));
      Cost v = r.feasible ? Cost(r.value) : Cost::infinity();
      ++res.representatives_checked;
      if (!have) {
        value = v;
        have = true;
      } else if (v != value) {
        res.ok = false;
        res.detail = "down-class representatives disagree: " + v.str() +
                     " vs " + value.str();
        return res;
      }
    }
    if (have) best = min(best, value);
  }
  Cost table = solver.table_value(edge_index, up, down);
  if (!(table == best)) {
    res.ok = false;
    res.detail = "table value " + table.str() +
                 " != representative optimum " + best.str();
  }
  return res;
}

}  // namespace rsched
