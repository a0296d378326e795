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

#ifndef RSCHED_DP_BASIC_HPP
#define RSCHED_DP_BASIC_HPP

#include <cstddef>
#include <vector>

#include "rsched/instance.hpp"

namespace rsched {

/// Solver outcome. Infeasibility is a result, not an exception; resource
/// budget violations throw ResourceLimitError.
struct SolveResult {
  bool feasible = false;
  i64 value = 0;       // meaningful when feasible
  Schedule schedule;   // covers the solved view's jobs

  static SolveResult infeasible_result() { return SolveResult{}; }
};

/// Exact optimum by iterating machines and tracking the set of still
/// unscheduled jobs; supersets are enumerated through complement submasks
/// (3^n total work). Schedule recovered from stored choices.
/// Throws ResourceLimitError when the view has more than job_cap jobs.
SolveResult solve_machine_dp(const SubinstanceRef& sub, int job_cap = 20);

/// The set Lambda(J, M) of achievable load vectors, with one witness
/// assignment per vector. Vectors with any entry above load_cap are pruned
/// (load_cap < 0: no cap). No dominance pruning: this is the full image.
struct LoadVectorSet {
  std::vector<int> machines;                // ascending global machine ids
  std::vector<std::vector<i64>> vectors;    // lexicographically sorted
  std::vector<std::vector<std::pair<int, int>>> witness;  // (job, machine)

  std::size_t size() const { return vectors.size(); }
};

LoadVectorSet enumerate_load_vectors(const SubinstanceRef& sub,
                                     i64 load_cap = -1,
                                     std::size_t table_budget = 2000000);

/// Exact optimum by iterating jobs over deduplicated load vectors, with
/// dominated vectors pruned (safe: the makespan is monotone in loads).
/// With load_cap >= 0 only schedules whose per-machine loads stay within the
/// cap are considered; infeasible result if none exists.
SolveResult solve_load_dp(const SubinstanceRef& sub, i64 load_cap = -1,
                          std::size_t table_budget = 2000000);

/// Instance with every allowed time rounded up to the next multiple of
/// delta*B/num_jobs and expressed in units of that grid, plus the matching
/// per-machine load cap (1+delta)*B in units. The rounded optimum's loads
/// are at most OPT + delta*B, so the cap never cuts it off.
struct FixedGridRounding {
  Instance instance;  // times in grid units
  i64 cap_units = 0;
};
FixedGridRounding round_to_fixed_grid(const Instance& inst,
                                      const Rational& delta, i64 upper_bound,
                                      i64 num_jobs_for_grid);

/// (1+eps)-approximation for fixed m: rounds times up to the grid
/// delta*B/n (delta = eps/2, B from two_approx), caps loads at (1+delta)*B
/// and runs the load DP on the rounded instance; the schedule is evaluated
/// on the original times.
SolveResult fptas_fixed_m(const SubinstanceRef& sub, const Rational& eps,
                          std::size_t table_budget = 2000000);

}  // namespace rsched

#endif  // RSCHED_DP_BASIC_HPP
