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

#ifndef RSCHED_DP_TREEWIDTH_HPP
#define RSCHED_DP_TREEWIDTH_HPP

#include <string>
#include <vector>

#include "rsched/dp_basic.hpp"
#include "rsched/tree_decomp.hpp"

namespace rsched {

/// Per-node job/machine activity sets over a simple-form decomposition.
/// Active items sit in the current bag, inactive ones were active strictly
/// below, and nearly inactive ones are active here but not at the parent
/// (they get finalized when passing upward). Job sets are bag-derived for
/// primal and incidence decompositions and neighborhood-derived for dual
/// ones; machine sets mirror that.
struct ActivityLabeling {
  GraphKind kind;
  std::vector<Bitset> jact, jina, jnia;  // over jobs, per node
  std::vector<Bitset> mact, mina, mnia;  // over machines, per node
};

/// Throws InputError if the decomposition's vertex ids do not fit the
/// graph kind's vertex universe.
ActivityLabeling label_activity(const SimpleFormDecomposition& sfd,
                                const Instance& inst, GraphKind kind);

struct ActivityAuditIssue {
  int node;
  std::string condition;
};

/// Independent re-check of the per-node conditions: (1) (nearly) inactive
/// jobs only reach active or inactive machines, (2) symmetrically for
/// machines, (3)/(4) children's (nearly) inactive sets partition the node's
/// inactive sets, plus the kind-specific extras ((5)/(6) for primal, their
/// mirror images for dual). Empty result = clean labeling.
std::vector<ActivityAuditIssue> audit_activity_labeling(
    const SimpleFormDecomposition& sfd, const Instance& inst,
    const ActivityLabeling& lab);

struct TreewidthDpLimits {
  std::size_t table_budget = 8000000;  // total table entries across nodes
  int bag_job_cap = 26;                // bags wider than this refuse to run
};

/// Exact R||Cmax over a simple-form decomposition of the primal graph.
/// Per node: children's tilde tables combine over job-set splits, then the
/// nearly inactive machines absorb job subsets via the machine-subset DP.
SolveResult solve_primal(const Instance& inst,
                         const SimpleFormDecomposition& sfd,
                         const TreewidthDpLimits& limits = {});

/// Exact R||Cmax over a decomposition of the dual graph. Tables are keyed
/// by load vectors on the active machines; nearly inactive jobs enter
/// through load-vector sets from the job-iterating DP. load_cap < 0 uses
/// the two_approx upper bound (safe: loads above it never appear in an
/// optimal schedule).
SolveResult solve_dual(const Instance& inst, const SimpleFormDecomposition& sfd,
                       i64 load_cap = -1, const TreewidthDpLimits& limits = {});

/// Exact R||Cmax over a decomposition of the incidence graph; keys combine
/// a routed job set with a load vector on the active machines.
SolveResult solve_incidence(const Instance& inst,
                            const SimpleFormDecomposition& sfd,
                            i64 load_cap = -1,
                            const TreewidthDpLimits& limits = {});

/// (1+eps)-approximation with the same rounding grid as fptas_fixed_m
/// (delta = eps/2, grid delta*B/n, loads capped at (1+delta)*B) running
/// solve_dual or solve_incidence on the rounded instance. The decomposition
/// carries over unchanged since rounding keeps the restriction structure.
SolveResult fptas_treewidth(const Instance& inst,
                            const SimpleFormDecomposition& sfd, GraphKind kind,
                            const Rational& eps,
                            const TreewidthDpLimits& limits = {});

}  // namespace rsched

#endif  // RSCHED_DP_TREEWIDTH_HPP
