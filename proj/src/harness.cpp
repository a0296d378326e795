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

#include "rsched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "rsched/branch_decomp.hpp"
#include "rsched/dp_treewidth.hpp"
#include "rsched/graphs.hpp"
#include "rsched/ptas_rankwidth.hpp"
#include "rsched/tree_decomp.hpp"

namespace rsched {

i64 Rng::uniform(i64 lo, i64 hi) {
  if (lo > hi) throw InputError("uniform with empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<i64>(gen_());  // full 64-bit range
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = gen_();
  } while (draw >= limit);
  return lo + static_cast<i64>(draw % span);
}

const char* instance_class_name(InstanceClass cls) {
  switch (cls) {
    case InstanceClass::kRandomUnrelated:
      return "random_unrelated";
    case InstanceClass::kRandomRestricted:
      return "random_restricted";
    case InstanceClass::kPathHierarchical:
      return "path_hierarchical";
    case InstanceClass::kTreeHierarchical:
      return "tree_hierarchical";
    case InstanceClass::kNested:
      return "nested";
    case InstanceClass::kGraphBalancing:
      return "graph_balancing";
    case InstanceClass::kGraphBalancingSimple:
      return "graph_balancing_simple";
  }
  return "?";
}

InstanceClass instance_class_from_name(const std::string& name) {
  for (InstanceClass cls :
       {InstanceClass::kRandomUnrelated, InstanceClass::kRandomRestricted,
        InstanceClass::kPathHierarchical, InstanceClass::kTreeHierarchical,
        InstanceClass::kNested, InstanceClass::kGraphBalancing,
        InstanceClass::kGraphBalancingSimple})
    if (name == instance_class_name(cls)) return cls;
  throw InputError("unknown instance class: " + name);
}

namespace {

std::vector<std::string> padded_ids(const char* prefix, int count) {
  int width = 1;
  for (int v = count - 1; v >= 10; v /= 10) ++width;
  std::vector<std::string> ids;
  for (int k = 0; k < count; ++k) {
    std::string num = std::to_string(k);
    ids.push_back(prefix + std::string(width - num.size(), '0') + num);
  }
  return ids;
}

// Sizes drawn from a pool when the spec caps the number of distinct values.
struct SizeDraw {
  std::vector<i64> pool;
  i64 draw(Rng* rng, i64 lo, i64 hi) {
    if (pool.empty()) return rng->uniform(lo, hi);
    return pool[rng->uniform(0, static_cast<i64>(pool.size()) - 1)];
  }
};

SizeDraw make_size_draw(const GeneratorSpec& spec, Rng* rng) {
  SizeDraw d;
  if (spec.max_distinct_sizes > 0) {
    for (int k = 0; k < spec.max_distinct_sizes; ++k)
      d.pool.push_back(rng->uniform(spec.p_min, spec.p_max));
  }
  return d;
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  if (spec.num_jobs < 0 || spec.num_machines <= 0 || spec.p_min < 1 ||
      spec.p_max < spec.p_min)
    throw InputError("inconsistent generator spec");
  Rng rng(spec.seed);
  SizeDraw sizes = make_size_draw(spec, &rng);
  const int n = spec.num_jobs, m = spec.num_machines;
  std::vector<std::vector<i64>> proc(m,
                                     std::vector<i64>(n, Instance::kForbidden));
  bool identical = true;

  auto place = [&](int j, const std::vector<int>& machines, i64 p) {
    for (int i : machines) proc[i][j] = p;
  };

  switch (spec.cls) {
    case InstanceClass::kRandomUnrelated: {
      identical = false;
      for (int j = 0; j < n; ++j) {
        bool any = false;
        for (int i = 0; i < m; ++i)
          if (rng.chance(spec.density_percent)) {
            proc[i][j] = sizes.draw(&rng, spec.p_min, spec.p_max);
            any = true;
          }
        if (!any)
          proc[rng.uniform(0, m - 1)][j] =
              sizes.draw(&rng, spec.p_min, spec.p_max);
      }
      break;
    }
    case InstanceClass::kRandomRestricted: {
      for (int j = 0; j < n; ++j) {
        i64 p = sizes.draw(&rng, spec.p_min, spec.p_max);
        std::vector<int> machines;
        for (int i = 0; i < m; ++i)
          if (rng.chance(spec.density_percent)) machines.push_back(i);
        if (machines.empty())
          machines.push_back(static_cast<int>(rng.uniform(0, m - 1)));
        place(j, machines, p);
      }
      break;
    }
    case InstanceClass::kPathHierarchical: {
      for (int j = 0; j < n; ++j) {
        i64 len = rng.uniform(1, m);
        std::vector<int> machines;
        for (int i = 0; i < len; ++i) machines.push_back(i);
        place(j, machines, sizes.draw(&rng, spec.p_min, spec.p_max));
      }
      break;
    }
    case InstanceClass::kTreeHierarchical: {
      std::vector<int> parent(m, -1);
      for (int i = 1; i < m; ++i)
        parent[i] = static_cast<int>(rng.uniform(0, i - 1));
      for (int j = 0; j < n; ++j) {
        int end = static_cast<int>(rng.uniform(0, m - 1));
        std::vector<int> machines;
        for (int i = end; i >= 0; i = parent[i]) machines.push_back(i);
        place(j, machines, sizes.draw(&rng, spec.p_min, spec.p_max));
      }
      break;
    }
    case InstanceClass::kNested: {
      // Laminar family of machine intervals; every job picks one of them.
      std::vector<std::pair<int, int>> family;
      auto split = [&](auto&& self, int lo, int hi) -> void {
        family.emplace_back(lo, hi);
        if (lo < hi && rng.chance(70)) {
          int mid = static_cast<int>(rng.uniform(lo, hi - 1));
          self(self, lo, mid);
          self(self, mid + 1, hi);
        }
      };
      split(split, 0, m - 1);
      for (int j = 0; j < n; ++j) {
        auto [lo, hi] =
            family[rng.uniform(0, static_cast<i64>(family.size()) - 1)];
        std::vector<int> machines;
        for (int i = lo; i <= hi; ++i) machines.push_back(i);
        place(j, machines, sizes.draw(&rng, spec.p_min, spec.p_max));
      }
      break;
    }
    case InstanceClass::kGraphBalancing: {
      for (int j = 0; j < n; ++j) {
        std::vector<int> machines{static_cast<int>(rng.uniform(0, m - 1))};
        if (m >= 2 && rng.chance(80)) {
          int other;
          do {
            other = static_cast<int>(rng.uniform(0, m - 1));
          } while (other == machines[0]);
          machines.push_back(other);
        }
        place(j, machines, sizes.draw(&rng, spec.p_min, spec.p_max));
      }
      break;
    }
    case InstanceClass::kGraphBalancingSimple: {
      std::vector<std::pair<int, int>> pairs;
      for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y) pairs.emplace_back(x, y);
      if (static_cast<int>(pairs.size()) < n)
        throw InputError(
            "graph_balancing_simple needs C(m,2) >= n distinct pairs");
      rng.shuffle(&pairs);
      for (int j = 0; j < n; ++j)
        place(j, {pairs[j].first, pairs[j].second},
              sizes.draw(&rng, spec.p_min, spec.p_max));
      break;
    }
  }
  return Instance(padded_ids("j", n), padded_ids("m", m), std::move(proc),
                  identical);
}

namespace {

ClassCheck fail_check(std::string detail) {
  ClassCheck c;
  c.ok = false;
  c.detail = std::move(detail);
  return c;
}

ClassCheck check_identical_data(const Instance& inst) {
  if (!inst.is_restricted_identical())
    return fail_check("per-machine processing times differ for some job");
  return {};
}

// Constructive realizability test for root-anchored path families: the
// group's common prefix is chained, remainders are grouped by machine
// overlap and checked recursively.
bool tree_hierarchical_realizable(std::vector<std::vector<int>> sets,
                                  std::string* witness) {
  std::erase_if(sets, [](const auto& s) { return s.empty(); });
  if (sets.empty()) return true;

  std::vector<int> common = sets[0];
  for (const auto& s : sets) {
    std::vector<int> next;
    std::set_intersection(common.begin(), common.end(), s.begin(), s.end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty()) {
    *witness = "machine sets with empty common prefix";
    return false;
  }

  std::vector<std::vector<int>> remainders;
  for (const auto& s : sets) {
    std::vector<int> rest;
    std::set_difference(s.begin(), s.end(), common.begin(), common.end(),
                        std::back_inserter(rest));
    if (!rest.empty()) remainders.push_back(std::move(rest));
  }
  if (remainders.empty()) return true;

  // Union-find over machines to group overlapping remainders.
  std::map<int, int> up;
  auto find = [&](auto&& self, int x) -> int {
    auto it = up.find(x);
    if (it == up.end() || it->second == x) {
      up[x] = x;
      return x;
    }
    return up[x] = self(self, it->second);
  };
  for (const auto& rest : remainders)
    for (std::size_t k = 1; k < rest.size(); ++k)
      up[find(find, rest[0])] = find(find, rest[k]);

  std::map<int, std::vector<std::vector<int>>> groups;
  for (auto& rest : remainders)
    groups[find(find, rest[0])].push_back(std::move(rest));
  for (auto& [root, group] : groups)
    if (!tree_hierarchical_realizable(std::move(group), witness)) return false;
  return true;
}

}  // namespace

ClassCheck verify_class(const Instance& inst, InstanceClass cls) {
  switch (cls) {
    case InstanceClass::kRandomUnrelated:
      return {};
    case InstanceClass::kRandomRestricted:
      return check_identical_data(inst);
    case InstanceClass::kPathHierarchical: {
      ClassCheck c = check_identical_data(inst);
      if (!c.ok) return c;
      for (int j = 0; j < inst.num_jobs(); ++j) {
        const Bitset& machines = inst.machines_of(j);
        std::size_t count = machines.count();
        for (std::size_t i = 0; i < count; ++i)
          if (!machines.test(i))
            return fail_check("job " + inst.job_ids()[j] +
                              " is not a machine-order prefix");
      }
      return {};
    }
    case InstanceClass::kTreeHierarchical: {
      ClassCheck c = check_identical_data(inst);
      if (!c.ok) return c;
      std::vector<std::vector<int>> sets;
      for (int j = 0; j < inst.num_jobs(); ++j) {
        if (inst.machines_of(j).none())
          return fail_check("job " + inst.job_ids()[j] +
                            " has no machines (not a root path)");
        sets.push_back(inst.machines_of(j).to_vector());
      }
      std::string witness;
      if (!tree_hierarchical_realizable(std::move(sets), &witness))
        return fail_check(witness);
      return {};
    }
    case InstanceClass::kNested: {
      ClassCheck c = check_identical_data(inst);
      if (!c.ok) return c;
      for (int j = 0; j < inst.num_jobs(); ++j)
        for (int k = j + 1; k < inst.num_jobs(); ++k) {
          const Bitset& a = inst.machines_of(j);
          const Bitset& b = inst.machines_of(k);
          if (!a.intersects(b)) continue;
          if (!a.subset_of(b) && !b.subset_of(a))
            return fail_check("jobs " + inst.job_ids()[j] + " and " +
                              inst.job_ids()[k] +
                              " are neither nested nor disjoint");
        }
      return {};
    }
    case InstanceClass::kGraphBalancing: {
      ClassCheck c = check_identical_data(inst);
      if (!c.ok) return c;
      for (int j = 0; j < inst.num_jobs(); ++j)
        if (inst.machines_of(j).count() > 2)
          return fail_check("job " + inst.job_ids()[j] +
                            " runs on more than 2 machines");
      return {};
    }
    case InstanceClass::kGraphBalancingSimple: {
      ClassCheck c = check_identical_data(inst);
      if (!c.ok) return c;
      std::map<std::vector<int>, int> seen;
      for (int j = 0; j < inst.num_jobs(); ++j) {
        auto machines = inst.machines_of(j).to_vector();
        if (machines.size() != 2)
          return fail_check("job " + inst.job_ids()[j] +
                            " is not a 2-machine edge");
        auto [it, fresh] = seen.emplace(machines, j);
        if (!fresh)
          return fail_check("jobs " + inst.job_ids()[it->second] + " and " +
                            inst.job_ids()[j] + " form parallel edges");
      }
      return {};
    }
  }
  return {};
}

SolveResult brute_force(const SubinstanceRef& sub, double budget) {
  const Instance& inst = sub.instance();
  std::vector<int> jobs = sub.jobs().to_vector();
  std::vector<int> machines = sub.machines().to_vector();
  if (jobs.empty()) {
    SolveResult r;
    r.feasible = true;
    r.value = 0;
    r.schedule = Schedule(inst.num_jobs());
    return r;
  }
  if (!sub.feasible()) return SolveResult::infeasible_result();

  double space = 1;
  for (std::size_t k = 0; k < jobs.size() && space <= budget; ++k)
    space *= static_cast<double>(machines.size());
  if (space > budget)
    throw ResourceLimitError("brute force budget exceeded: m^n > " +
                             std::to_string(static_cast<i64>(budget)));

  std::vector<i64> load(inst.num_machines(), 0);
  std::vector<int> current(jobs.size(), -1), best_assign;
  i64 best = -1;
  // DFS over jobs; prune once the partial maximum reaches the incumbent.
  auto rec = [&](auto&& self, std::size_t k, i64 partial_max) -> void {
    if (best >= 0 && partial_max >= best) return;
    if (k == jobs.size()) {
      best = partial_max;
      best_assign = current;
      return;
    }
    int j = jobs[k];
    for (int i : machines) {
      if (!inst.allowed(i, j)) continue;
      load[i] += inst.proc(i, j);
      current[k] = i;
      self(self, k + 1, std::max(partial_max, load[i]));
      load[i] -= inst.proc(i, j);
    }
  };
  rec(rec, 0, 0);

  SolveResult r;
  r.feasible = true;
  r.value = best;
  r.schedule = Schedule(inst.num_jobs());
  for (std::size_t k = 0; k < jobs.size(); ++k)
    r.schedule.machine_of[jobs[k]] = best_assign[k];
  return r;
}

Diagnostics diagnostics(const Instance& inst, int exact_limit) {
  Diagnostics d;
  d.num_jobs = inst.num_jobs();
  d.num_machines = inst.num_machines();
  d.restricted_identical = inst.is_restricted_identical();
  for (int i = 0; i < inst.num_machines(); ++i)
    d.max_jobs_per_machine = std::max(
        d.max_jobs_per_machine, static_cast<int>(inst.jobs_of(i).count()));
  for (int j = 0; j < inst.num_jobs(); ++j)
    d.max_machines_per_job = std::max(
        d.max_machines_per_job, static_cast<int>(inst.machines_of(j).count()));

  RestrictionGraph primal = build_graph(inst, GraphKind::kPrimal);
  RestrictionGraph dual = build_graph(inst, GraphKind::kDual);
  RestrictionGraph incidence = build_graph(inst, GraphKind::kIncidence);
  d.widths_exact = incidence.num_vertices() <= exact_limit;
  auto width = [&](const RestrictionGraph& g) {
    if (d.widths_exact) return exact_treewidth(g, exact_limit).first;
    return heuristic_tree_decomposition(g, EliminationHeuristic::kMinFill)
        .width();
  };
  d.tw_primal = width(primal);
  d.tw_dual = width(dual);
  d.tw_incidence = width(incidence);

  if (d.widths_exact) {
    d.clique_bound_ok = d.tw_primal >= d.max_jobs_per_machine - 1 &&
                        d.tw_dual >= d.max_machines_per_job - 1;
    d.incidence_bound_ok = d.tw_incidence <= d.tw_primal + 1 &&
                           d.tw_incidence <= d.tw_dual + 1;
  }

  Bitset job_side(incidence.num_vertices());
  for (int j = 0; j < inst.num_jobs(); ++j) job_side.set(j);
  d.bicograph = bicograph_recognize(incidence, job_side).is_bicograph;

  if (d.tw_primal <= d.tw_dual && d.tw_primal <= d.tw_incidence)
    d.recommended = "tw-primal";
  else if (d.tw_dual <= d.tw_incidence)
    d.recommended = "tw-dual";
  else
    d.recommended = "tw-incidence";
  if (d.bicograph && d.restricted_identical)
    d.recommended += "; ptas-rw applies (bi-cograph incidence graph)";
  return d;
}

std::string diagnostics_to_json(const Diagnostics& d) {
  nlohmann::json doc;
  doc["jobs"] = d.num_jobs;
  doc["machines"] = d.num_machines;
  doc["max_jobs_per_machine"] = d.max_jobs_per_machine;
  doc["max_machines_per_job"] = d.max_machines_per_job;
  doc["tw_primal"] = d.tw_primal;
  doc["tw_dual"] = d.tw_dual;
  doc["tw_incidence"] = d.tw_incidence;
  doc["widths_exact"] = d.widths_exact;
  doc["clique_bound_ok"] = d.clique_bound_ok;
  doc["incidence_bound_ok"] = d.incidence_bound_ok;
  doc["bicograph"] = d.bicograph;
  doc["restricted_identical"] = d.restricted_identical;
  doc["recommended"] = d.recommended;
  return doc.dump(2);
}

// --- cross validation -------------------------------------------------------

namespace {

struct InstanceRun {
  std::vector<BenchRow> rows;
  bool any_failure = false;
};

i64 now_micros() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void run_one(const GeneratorSpec& spec, const CorpusSpec& corpus,
             InstanceRun* out) {
  std::string name = std::string(instance_class_name(spec.cls)) + "/seed" +
                     std::to_string(spec.seed);
  Instance inst = generate(spec);
  SubinstanceRef whole = SubinstanceRef::whole(inst);

  ClassCheck cc = verify_class(inst, spec.cls);
  {
    BenchRow row{name, "verify_class", cc.ok, 0, 0, 0, cc.detail};
    out->rows.push_back(row);
    out->any_failure |= !cc.ok;
  }

  SolveResult ref;
  bool have_ref = false;
  try {
    ref = brute_force(whole);
    have_ref = true;
  } catch (const std::exception& e) {
    out->rows.push_back(BenchRow{name, "oracle", false, 0, 0, 0, e.what()});
    out->any_failure = true;
  }

  auto push = [&](const std::string& algo, auto&& runner, auto&& check) {
    if (!have_ref) return;
    BenchRow row;
    row.instance = name;
    row.algo = algo;
    row.reference = ref.value;
    i64 start = now_micros();
    try {
      SolveResult got = runner();
      row.micros = now_micros() - start;
      row.value = got.feasible ? got.value : -1;
      row.ok = check(got);
      if (!row.ok && row.note.empty()) row.note = "mismatch";
    } catch (const std::exception& e) {
      row.micros = now_micros() - start;
      row.ok = false;
      row.note = e.what();
    }
    out->rows.push_back(row);
    out->any_failure |= !out->rows.back().ok;
  };
  auto exact_check = [&](const SolveResult& got) {
    return got.feasible == ref.feasible &&
           (!got.feasible || got.value == ref.value);
  };
  auto ratio_check = [&](const Rational& eps) {
    return [&ref, eps](const SolveResult& got) {
      if (!ref.feasible) return !got.feasible;
      if (!got.feasible) return false;
      // ref <= value and value*den <= ref*(den+num), exactly.
      return got.value >= ref.value &&
             static_cast<__int128>(got.value) * eps.den <=
                 static_cast<__int128>(ref.value) * (eps.den + eps.num);
    };
  };

  push("machine-dp", [&] { return solve_machine_dp(whole); }, exact_check);
  push("load-dp", [&] { return solve_load_dp(whole); }, exact_check);

  auto tw_solver = [&](GraphKind kind) {
    return [&inst, kind] {
      RestrictionGraph g = build_graph(inst, kind);
      SimpleFormDecomposition sfd = normalize_simple_form(
          heuristic_tree_decomposition(g, EliminationHeuristic::kMinFill));
      switch (kind) {
        case GraphKind::kPrimal:
          return solve_primal(inst, sfd);
        case GraphKind::kDual:
          return solve_dual(inst, sfd);
        default:
          return solve_incidence(inst, sfd);
      }
    };
  };
  push("tw-primal", tw_solver(GraphKind::kPrimal), exact_check);
  push("tw-dual", tw_solver(GraphKind::kDual), exact_check);
  push("tw-incidence", tw_solver(GraphKind::kIncidence), exact_check);

  for (const Rational& eps : corpus.fptas_eps) {
    std::string tag = "(eps=" + std::to_string(eps.num) + "/" +
                      std::to_string(eps.den) + ")";
    push("fptas-m" + tag, [&] { return fptas_fixed_m(whole, eps); },
         ratio_check(eps));
    push("fptas-tw-dual" + tag,
         [&] {
           RestrictionGraph g = build_graph(inst, GraphKind::kDual);
           SimpleFormDecomposition sfd = normalize_simple_form(
               heuristic_tree_decomposition(g, EliminationHeuristic::kMinFill));
           return fptas_treewidth(inst, sfd, GraphKind::kDual, eps);
         },
         ratio_check(eps));
  }

  if (inst.is_restricted_identical()) {
    // Bi-cograph decompositions when available, caterpillar otherwise; the
    // edge DP is exact on any valid branch decomposition, just slower.
    RestrictionGraph g = build_graph(inst, GraphKind::kIncidence);
    Bitset job_side(g.num_vertices());
    for (int j = 0; j < inst.num_jobs(); ++j) job_side.set(j);
    BicographResult rec = bicograph_recognize(g, job_side);
    BranchDecomposition bd =
        rec.is_bicograph
            ? bicotree_to_branch_decomposition(rec.tree, g.num_vertices())
            : caterpillar_branch_decomposition(g.num_vertices());
    push("edge-dp", [&] { return solve_edge_dp(inst, bd); }, exact_check);
    for (const Rational& eps : corpus.ptas_eps)
      push("ptas-rw(eps=" + std::to_string(eps.num) + "/" +
               std::to_string(eps.den) + ")",
           [&] { return ptas(inst, eps, rec.is_bicograph ? nullptr : &bd); },
           ratio_check(eps));
  }

  if (out->any_failure && !corpus.dump_dir.empty()) {
    std::string path = corpus.dump_dir + "/replay_" +
                       instance_class_name(spec.cls) + "_seed" +
                       std::to_string(spec.seed) + ".json";
    write_instance(inst, path);
    out->rows.push_back(BenchRow{name, "dump", true, 0, 0, 0, path});
  }
}

}  // namespace

BenchReport cross_validate(const CorpusSpec& corpus) {
  std::vector<InstanceRun> runs(corpus.instances.size());
  int threads = corpus.threads;
  if (threads <= 0)
    threads = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(corpus.instances.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= corpus.instances.size()) return;
      try {
        run_one(corpus.instances[k], corpus, &runs[k]);
      } catch (const std::exception& e) {
        runs[k].rows.push_back(BenchRow{
            "corpus[" + std::to_string(k) + "]", "setup", false, 0, 0, 0,
            e.what()});
        runs[k].any_failure = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchReport report;
  for (auto& run : runs) {
    for (auto& row : run.rows) report.rows.push_back(std::move(row));
    if (run.any_failure) ++report.failures;
  }
  return report;
}

std::string bench_report_to_json_lines(const BenchReport& report) {
  std::string out;
  for (const BenchRow& row : report.rows) {
    nlohmann::json doc;
    doc["instance"] = row.instance;
    doc["algo"] = row.algo;
    doc["ok"] = row.ok;
    doc["value"] = row.value;
    doc["reference"] = row.reference;
    doc["micros"] = row.micros;
    if (!row.note.empty()) doc["note"] = row.note;
    out += doc.dump();
    out += "\n";
  }
  return out;
}

}  // namespace rsched
