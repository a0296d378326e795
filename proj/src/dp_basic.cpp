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

#include "rsched/dp_basic.hpp"

#include <algorithm>
#include <map>

#include "rsched/approx.hpp"

namespace rsched {

SolveResult solve_machine_dp(const SubinstanceRef& sub, int job_cap) {
  const Instance& inst = sub.instance();
  std::vector<int> jobs = sub.jobs().to_vector();
  const int n = static_cast<int>(jobs.size());
  if (n > job_cap)
    throw ResourceLimitError("machine DP job cap exceeded: " +
                             std::to_string(n) + " > " +
                             std::to_string(job_cap));
  if (n == 0) {
    SolveResult r;
    r.feasible = true;
    r.value = 0;
    r.schedule = Schedule(inst.num_jobs());
    return r;
  }
  if (!sub.feasible()) return SolveResult::infeasible_result();

  std::vector<int> machines = sub.machines().to_vector();
  const int m = static_cast<int>(machines.size());
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);

  // val[i][J]: optimum for scheduling all jobs outside J on machines 1..i;
  // infinite entries are marked by kInf (never a legal makespan here).
  constexpr i64 kInf = -1;
  std::vector<std::vector<i64>> val(m + 1,
                                    std::vector<i64>(full + 1, kInf));
  std::vector<std::vector<std::uint32_t>> choice(
      m, std::vector<std::uint32_t>(full + 1, 0));
  val[0][full] = 0;

  std::vector<i64> load(full + 1, 0);
  for (int level = 1; level <= m; ++level) {
    int machine = machines[level - 1];
    std::uint32_t allowed = 0;
    for (int k = 0; k < n; ++k)
      if (inst.allowed(machine, jobs[k])) allowed |= 1u << k;
    // Subset sums of this machine's allowed jobs.
    load[0] = 0;
    for (std::uint32_t s = 1; s <= allowed; ++s) {
      if ((s & allowed) != s) continue;
      std::uint32_t low = s & (~s + 1);
      int k = std::countr_zero(low);
      load[s] = load[s ^ low] + inst.proc(machine, jobs[k]);
    }
    for (std::uint32_t rem = 0; rem <= full; ++rem) {
      std::uint32_t free = ~rem & full & allowed;
      i64 best = kInf;
      std::uint32_t best_s = 0;
      std::uint32_t s = free;
      while (true) {
        i64 prev = val[level - 1][rem | s];
        if (prev != kInf) {
          i64 cand = std::max(prev, load[s]);
          if (best == kInf || cand < best) {
            best = cand;
            best_s = s;
          }
        }
        if (s == 0) break;
        s = (s - 1) & free;
      }
      val[level][rem] = best;
      choice[level - 1][rem] = best_s;
    }
  }

  if (val[m][0] == kInf) return SolveResult::infeasible_result();

  SolveResult r;
  r.feasible = true;
  r.value = val[m][0];
  r.schedule = Schedule(inst.num_jobs());
  std::uint32_t rem = 0;
  for (int level = m; level >= 1; --level) {
    std::uint32_t s = choice[level - 1][rem];
    for (int k = 0; k < n; ++k)
      if (s >> k & 1) r.schedule.machine_of[jobs[k]] = machines[level - 1];
    rem |= s;
  }
  return r;
}

namespace {

// Shared engine for the job-iterating DP. States are exact load vectors on
// the view's machines; `prune_dominated` turns the optimizer mode on.
struct LoadStates {
  std::vector<int> machines;
  // vector -> witness assignment of the jobs consumed so far
  std::map<std::vector<i64>, std::vector<std::pair<int, int>>> states;
};

bool run_load_dp(const SubinstanceRef& sub, i64 load_cap,
                 std::size_t table_budget, bool prune_dominated,
                 LoadStates* out) {
  const Instance& inst = sub.instance();
  out->machines = sub.machines().to_vector();
  const int m = static_cast<int>(out->machines.size());
  std::vector<int> pos(inst.num_machines(), -1);
  for (int k = 0; k < m; ++k) pos[out->machines[k]] = k;

  out->states.clear();
  out->states.emplace(std::vector<i64>(m, 0),
                      std::vector<std::pair<int, int>>{});

  const Bitset& jobs = sub.jobs();
  for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1)) {
    std::map<std::vector<i64>, std::vector<std::pair<int, int>>> next;
    Bitset allowed = sub.machines_of(static_cast<int>(j));
    for (const auto& [vec, wit] : out->states) {
      for (std::size_t i = allowed.next(0); i < allowed.size();
           i = allowed.next(i + 1)) {
        int k = pos[static_cast<int>(i)];
        i64 grown = vec[k] + inst.proc(static_cast<int>(i), static_cast<int>(j));
        if (load_cap >= 0 && grown > load_cap) continue;
        std::vector<i64> v2 = vec;
        v2[k] = grown;
        auto it = next.find(v2);
        if (it == next.end()) {
          auto w2 = wit;
          w2.emplace_back(static_cast<int>(j), static_cast<int>(i));
          next.emplace(std::move(v2), std::move(w2));
          if (next.size() > table_budget)
            throw ResourceLimitError("load DP table budget exceeded");
        }
      }
    }
    if (prune_dominated && next.size() > 1) {
      // Componentwise-dominated vectors can never beat their dominator.
      std::vector<const std::vector<i64>*> keys;
      keys.reserve(next.size());
      for (const auto& [vec, wit] : next) keys.push_back(&vec);
      std::vector<bool> dead(keys.size(), false);
      for (std::size_t a = 0; a < keys.size(); ++a) {
        if (dead[a]) continue;
        for (std::size_t b = 0; b < keys.size(); ++b) {
          if (a == b || dead[b]) continue;
          bool leq = true;
          for (int k = 0; k < m; ++k)
            if ((*keys[a])[k] > (*keys[b])[k]) {
              leq = false;
              break;
            }
          if (leq) dead[b] = true;
        }
      }
      for (std::size_t a = 0; a < keys.size(); ++a)
        if (dead[a]) next.erase(*keys[a]);
    }
    out->states = std::move(next);
    if (out->states.empty()) return false;  // job with no usable machine
  }
  return true;
}

}  // namespace

LoadVectorSet enumerate_load_vectors(const SubinstanceRef& sub, i64 load_cap,
                                     std::size_t table_budget) {
  LoadStates st;
  bool any = run_load_dp(sub, load_cap, table_budget, false, &st);
  LoadVectorSet out;
  out.machines = st.machines;
  if (!any) return out;
  for (auto& [vec, wit] : st.states) {
    out.vectors.push_back(vec);
    out.witness.push_back(std::move(wit));
  }
  return out;
}

SolveResult solve_load_dp(const SubinstanceRef& sub, i64 load_cap,
                          std::size_t table_budget) {
  const Instance& inst = sub.instance();
  if (!sub.feasible()) return SolveResult::infeasible_result();
  LoadStates st;
  if (!run_load_dp(sub, load_cap, table_budget, true, &st))
    return SolveResult::infeasible_result();

  const std::vector<std::pair<int, int>>* best_wit = nullptr;
  i64 best = 0;
  for (const auto& [vec, wit] : st.states) {
    i64 peak = 0;
    for (i64 l : vec) peak = std::max(peak, l);
    if (!best_wit || peak < best) {
      best = peak;
      best_wit = &wit;
    }
  }
  SolveResult r;
  r.feasible = true;
  r.value = best;
  r.schedule = Schedule(inst.num_jobs());
  for (auto [j, i] : *best_wit) r.schedule.machine_of[j] = i;
  return r;
}

FixedGridRounding round_to_fixed_grid(const Instance& inst,
                                      const Rational& delta, i64 upper_bound,
                                      i64 num_jobs_for_grid) {
  const i64 n = num_jobs_for_grid;
  std::vector<std::vector<i64>> proc_units(
      inst.num_machines(),
      std::vector<i64>(inst.num_jobs(), Instance::kForbidden));
  for (int i = 0; i < inst.num_machines(); ++i)
    for (int j = 0; j < inst.num_jobs(); ++j)
      if (inst.allowed(i, j))
        proc_units[i][j] = ceil_mul_div(inst.proc(i, j), delta.den * n,
                                        delta.num * upper_bound);
  FixedGridRounding out{
      Instance(inst.job_ids(), inst.machine_ids(), std::move(proc_units),
               inst.identical_flag()),
      ceil_div(n * delta.den, delta.num) + n};
  return out;
}

SolveResult fptas_fixed_m(const SubinstanceRef& sub, const Rational& eps,
                          std::size_t table_budget) {
  if (!eps.positive()) throw InputError("fptas_fixed_m requires eps > 0");
  const Instance& inst = sub.instance();
  if (sub.jobs().none()) {
    SolveResult r;
    r.feasible = true;
    r.value = 0;
    r.schedule = Schedule(inst.num_jobs());
    return r;
  }
  if (!sub.feasible()) return SolveResult::infeasible_result();

  SolveResult bound = two_approx(sub);
  if (!bound.feasible) return SolveResult::infeasible_result();

  // Work in units of delta*B/n; rounding up keeps loads within (1+delta)*B,
  // so the rounded image of an optimal schedule always survives the cap.
  Rational delta(eps.num, 2 * eps.den);
  FixedGridRounding grid =
      round_to_fixed_grid(inst, delta, bound.value, sub.num_jobs());

  SubinstanceRef rsub(grid.instance, sub.jobs(), sub.machines());
  SolveResult inner = solve_load_dp(rsub, grid.cap_units, table_budget);
  if (!inner.feasible) return SolveResult::infeasible_result();

  SolveResult r;
  r.feasible = true;
  r.schedule = std::move(inner.schedule);
  r.value = makespan(sub, r.schedule);
  return r;
}

}  // namespace rsched
