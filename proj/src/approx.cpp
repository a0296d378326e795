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

#include "rsched/approx.hpp"

#include <algorithm>

#include "flow_util.hpp"

namespace rsched {

namespace {

bool view_restricted_identical(const SubinstanceRef& sub) {
  const Instance& inst = sub.instance();
  const Bitset& jobs = sub.jobs();
  for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1)) {
    Bitset machines = sub.machines_of(static_cast<int>(j));
    i64 size = Instance::kForbidden;
    for (std::size_t i = machines.next(0); i < machines.size();
         i = machines.next(i + 1)) {
      i64 p = inst.proc(static_cast<int>(i), static_cast<int>(j));
      if (size == Instance::kForbidden)
        size = p;
      else if (p != size)
        return false;
    }
  }
  return true;
}

flowutil::BipartiteTimeFlow make_network(const SubinstanceRef& sub,
                                         const std::vector<int>& jobs,
                                         i64 target) {
  const Instance& inst = sub.instance();
  flowutil::BipartiteTimeFlow net;
  net.machine_cap.assign(inst.num_machines(), 0);
  for (int i : sub.machines().to_vector()) net.machine_cap[i] = target;
  for (int j : jobs) {
    Bitset allowed = sub.machines_of(j);
    net.supply.push_back(
        inst.proc(static_cast<int>(allowed.next(0)), j));
    net.arcs.push_back(allowed.to_vector());
  }
  return net;
}

// Classic route for restricted-identical views: binary search the smallest
// target with a feasible fractional assignment (a max-flow check here),
// then round the support forest; each machine gains at most one extra job
// of size at most the target, so the result is within twice the optimum.
SolveResult two_approx_identical(const SubinstanceRef& sub) {
  const Instance& inst = sub.instance();
  std::vector<int> jobs = sub.jobs().to_vector();
  i64 lo = 0, hi = 0;
  for (int j : jobs) {
    i64 p = inst.proc(static_cast<int>(sub.machines_of(j).next(0)), j);
    lo = std::max(lo, p);
    hi += p;
  }
  while (lo < hi) {
    i64 mid = lo + (hi - lo) / 2;
    if (make_network(sub, jobs, mid).run())
      hi = mid;
    else
      lo = mid + 1;
  }
  flowutil::BipartiteTimeFlow net = make_network(sub, jobs, lo);
  net.run();
  net.cancel_cycles();
  std::vector<int> assign = net.round_to_assignment();

  SolveResult r;
  r.feasible = true;
  r.schedule = Schedule(inst.num_jobs());
  for (std::size_t k = 0; k < jobs.size(); ++k)
    r.schedule.machine_of[jobs[k]] = assign[k];
  r.value = makespan(sub, r.schedule);
  return r;
}

// General unrelated times: the fractional feasibility test is no longer a
// flow, so at desk scale we binary search the smallest feasible load cap
// with the capped load-vector DP, which pins B = OPT exactly.
SolveResult two_approx_general(const SubinstanceRef& sub) {
  const Instance& inst = sub.instance();
  i64 lo = 1, hi = 0;
  const Bitset& jobs = sub.jobs();
  for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1)) {
    i64 cheapest = 0;
    Bitset machines = sub.machines_of(static_cast<int>(j));
    for (std::size_t i = machines.next(0); i < machines.size();
         i = machines.next(i + 1)) {
      i64 p = inst.proc(static_cast<int>(i), static_cast<int>(j));
      if (cheapest == 0 || p < cheapest) cheapest = p;
    }
    lo = std::max(lo, cheapest);
    hi += cheapest;
  }
  while (lo < hi) {
    i64 mid = lo + (hi - lo) / 2;
    if (solve_load_dp(sub, mid).feasible)
      hi = mid;
    else
      lo = mid + 1;
  }
  return solve_load_dp(sub, lo);
}

}  // namespace

SolveResult two_approx(const SubinstanceRef& sub) {
  if (sub.jobs().none()) {
    SolveResult r;
    r.feasible = true;
    r.value = 0;
    r.schedule = Schedule(sub.instance().num_jobs());
    return r;
  }
  if (!sub.feasible()) return SolveResult::infeasible_result();
  if (view_restricted_identical(sub)) return two_approx_identical(sub);
  return two_approx_general(sub);
}

}  // namespace rsched
