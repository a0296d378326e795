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

#ifndef RSCHED_PTAS_RANKWIDTH_HPP
#define RSCHED_PTAS_RANKWIDTH_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsched/branch_decomp.hpp"
#include "rsched/dp_basic.hpp"

namespace rsched {

/// Distinct processing times of a restricted-identical instance, ascending,
/// with each job's index into them.
struct SizeCatalog {
  std::vector<i64> sizes;
  std::vector<int> size_of_job;

  int count() const { return static_cast<int>(sizes.size()); }
  static SizeCatalog build(const Instance& inst);
};

/// Multiplicity vector over (connection type, size) slots, flattened as
/// type-major: slot = type * d + size.
using ClassVec = std::vector<int>;

i64 class_vec_total_time(const ClassVec& v, const SizeCatalog& catalog);

/// Constant-size-count rounding: big jobs rounded up to the delta^2*B grid,
/// small jobs expanded into ceil(n*p_j/(delta*B)) copies of size delta*B/n.
/// All times are integers in units of B/(n*b^2) where delta = a/b, so every
/// later comparison stays exact.
struct RoundedInstance {
  Instance instance;   // expanded job set, unit times, restricted-identical
  i64 upper_bound = 0;  // B, original time scale
  Rational delta;       // min(1/3, eps/7)
  int original_jobs = 0;
  i64 unit_den = 0;         // one unit equals upper_bound / unit_den
  i64 small_size_units = 0;  // delta*B/n in units (= a*b)
  i64 delta_b_units = 0;     // delta*B in units (= a*b*n)
  std::vector<int> origin_job;             // rounded job -> original job
  std::vector<char> from_small;            // rounded job is a small copy
  std::vector<std::vector<int>> copies_of;  // original job -> rounded ids
};

/// Requires eps > 0, a feasible restricted-identical instance, and
/// upper_bound >= OPT (use two_approx).
RoundedInstance round_instance(const Instance& inst, const Rational& eps,
                               i64 upper_bound);

/// Job-class dynamic program over a branch decomposition of the incidence
/// graph. Edge tables map (class sent up, class sent down) to the optimum
/// of the below subinstance, minimized over representatives of the up
/// class. Exposed as a class so audits can inspect edges and table values.
class EdgeDpSolver {
 public:
  /// Throws InputError for non-restricted-identical instances or invalid
  /// decompositions, ResourceLimitError when tables outgrow the budget.
  EdgeDpSolver(const Instance& inst, const BranchDecomposition& bd,
               std::size_t table_budget = 4000000);

  /// Exact optimum with schedule; tables are filled on the first call.
  SolveResult solve();

  struct TypeGroup {
    Bitset machines;        // neighborhood inside the far side
    std::vector<int> jobs;  // ascending
  };
  struct EdgeInfo {
    int child_node;  // the oriented edge is (parent(child), child)
    Bitset below_jobs, below_machines;
    std::vector<TypeGroup> below_types;  // w.r.t. machines above
    std::vector<TypeGroup> above_types;  // w.r.t. machines below
    ClassVec below_bound, above_bound;   // full per-(type,size) counts
  };

  const Instance& instance() const { return inst_; }
  const SizeCatalog& catalog() const { return catalog_; }
  int num_edges() const { return static_cast<int>(edge_order_.size()); }
  /// Edges in fill order (leaves first; the root edge last).
  const EdgeInfo& edge(int index) const {
    return edges_[edge_order_[index]].info;
  }
  /// Table lookup; Cost::infinity() for unreachable pairs.
  Cost table_value(int index, const ClassVec& up, const ClassVec& down) const;

 private:
  struct Translation {
    std::vector<int> type_map;  // source type -> target type
    int target_types = 0;
  };
  struct Entry {
    Cost val = Cost::infinity();
    ClassVec down_l, down_r;      // split of the down class
    ClassVec up_l_up, up_l_cross;  // left child's up class: to e / to right
    ClassVec up_r_cross, up_r_up;  // right child's up class: to left / to e
  };
  struct EdgeData {
    EdgeInfo info;
    bool leaf = false;
    int leaf_vertex = -1;
    int left_child_edge = -1, right_child_edge = -1;
    std::vector<int> below_type_of, above_type_of;  // per job, -1 elsewhere
    Translation lift_left, lift_right;    // child below -> this below
    Translation drop_left, drop_right;    // this above -> child above
    Translation cross_lr, cross_rl;       // left below -> right above etc.
    std::map<std::pair<ClassVec, ClassVec>, Entry> table;
  };

  void build_edges();
  void fill_edge(int child_node);
  void fill_leaf(EdgeData& ed);
  void fill_internal(EdgeData& ed);
  ClassVec translate(const Translation& tr, const ClassVec& v) const;
  void check_budget();

  // Schedule recovery: realized class pairs descend from the root edge,
  // concrete up-sets bubble up, concrete down-sets push back down.
  struct Realized {
    ClassVec up, down;
    std::vector<int> up_set;                  // concrete jobs sent up
    std::vector<int> left_cross, right_cross;  // concrete crossing sets
  };
  void descend(int child_node, const ClassVec& up, const ClassVec& down,
               std::map<int, Realized>* realized) const;
  std::vector<int> resolve_up(int child_node, std::map<int, Realized>* realized)
      const;
  void push_down(int child_node, std::vector<int> down_set,
                 const std::map<int, Realized>& realized,
                 Schedule* out) const;

  Instance inst_;
  BranchDecomposition bd_;
  SizeCatalog catalog_;
  std::size_t table_budget_;
  std::size_t total_entries_ = 0;
  bool filled_ = false;
  int root_edge_child_ = -1;
  std::vector<int> parent_;  // tree parent after rooting at the job leaf
  std::vector<EdgeData> edges_;  // indexed by child node id
  std::vector<int> edge_order_;  // fill order (child node ids)
};

/// Convenience wrapper around EdgeDpSolver.
SolveResult solve_edge_dp(const Instance& inst, const BranchDecomposition& bd,
                          std::size_t table_budget = 4000000);

/// Transfers a schedule of the rounded instance back to the original one:
/// big jobs keep their machine; the copies of each small job define machine
/// budgets t_i, and an integral reassignment with per-machine small load at
/// most t_i + max small size is found by max-flow, cycle canceling and
/// rounding on the support forest.
Schedule round_small_jobs_back(const Instance& inst, const RoundedInstance& ri,
                               const Schedule& rounded_schedule);

/// Full pipeline: two_approx -> round_instance -> solve_edge_dp ->
/// round_small_jobs_back; value <= (1+eps)*OPT. Uses the supplied branch
/// decomposition of the original incidence graph (small-job leaves are
/// expanded into copy chains), or derives one via bi-cograph recognition.
/// Throws InputError if neither route yields a decomposition.
SolveResult ptas(const Instance& inst, const Rational& eps,
                 const BranchDecomposition* bd = nullptr,
                 std::size_t table_budget = 4000000);

/// Checks the class well-definedness the edge DP relies on: for the given
/// edge and class pair, every representative pair (J-up, J-down) is solved
/// by the reference solver; for each up-representative all down choices
/// must agree, and the minimum over up-representatives must equal the DP
/// table value.
struct ClassAuditResult {
  bool ok = true;
  std::string detail;
  int representatives_checked = 0;
};
ClassAuditResult class_representative_audit(
    EdgeDpSolver& solver, int edge_index, const ClassVec& up,
    const ClassVec& down,
    const std::function<SolveResult(const SubinstanceRef&)>& reference);

}  // namespace rsched

#endif  // RSCHED_PTAS_RANKWIDTH_HPP
