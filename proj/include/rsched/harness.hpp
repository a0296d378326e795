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

#ifndef RSCHED_HARNESS_HPP
#define RSCHED_HARNESS_HPP

#include <random>
#include <string>
#include <vector>

#include "rsched/dp_basic.hpp"
#include "rsched/instance.hpp"

namespace rsched {

/// Seeded generator with a pinned algorithm (mt19937_64 + rejection
/// sampling) so corpora are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform integer in [lo, hi].
  i64 uniform(i64 lo, i64 hi);
  /// True with probability percent/100.
  bool chance(int percent) { return uniform(0, 99) < percent; }
  /// In-place Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>* v) {
    for (std::size_t k = v->size(); k > 1; --k)
      std::swap((*v)[k - 1], (*v)[uniform(0, static_cast<i64>(k) - 1)]);
  }

 private:
  std::mt19937_64 gen_;
};

enum class InstanceClass {
  kRandomUnrelated,
  kRandomRestricted,
  kPathHierarchical,
  kTreeHierarchical,
  kNested,
  kGraphBalancing,
  kGraphBalancingSimple,
};

const char* instance_class_name(InstanceClass cls);
InstanceClass instance_class_from_name(const std::string& name);

struct GeneratorSpec {
  InstanceClass cls = InstanceClass::kRandomRestricted;
  int num_jobs = 4;
  int num_machines = 3;
  i64 p_min = 1;
  i64 p_max = 9;
  std::uint64_t seed = 1;
  int density_percent = 60;    // chance of an allowed pair (random classes)
  int max_distinct_sizes = 0;  // 0 = unlimited; else sizes come from a pool
};

/// Deterministic per seed; the output always satisfies the class invariant
/// and every job has at least one machine.
Instance generate(const GeneratorSpec& spec);

struct ClassCheck {
  bool ok = true;
  std::string detail;
};

/// Independent re-check of a class invariant, with a witness on failure.
ClassCheck verify_class(const Instance& inst, InstanceClass cls);

/// Exhaustive minimum over all feasible assignments, with branch-and-bound
/// pruning on the partial maximum load (still provably exhaustive).
/// Throws ResourceLimitError if m^n exceeds the budget.
SolveResult brute_force(const SubinstanceRef& sub, double budget = 1e7);

struct Diagnostics {
  int num_jobs = 0, num_machines = 0;
  int max_jobs_per_machine = 0, max_machines_per_job = 0;
  int tw_primal = -1, tw_dual = -1, tw_incidence = -1;
  bool widths_exact = false;
  bool clique_bound_ok = true;       // tw_p >= max|J(i)|-1, tw_d >= max|M(j)|-1
  bool incidence_bound_ok = true;    // tw_i <= tw_p+1 and tw_i <= tw_d+1
  bool bicograph = false;
  bool restricted_identical = false;
  std::string recommended;
};

/// Structural report: exact widths when every graph fits the limit,
/// min-fill upper bounds otherwise; the parameter inequalities are only
/// checked on exact widths.
Diagnostics diagnostics(const Instance& inst, int exact_limit = 12);
std::string diagnostics_to_json(const Diagnostics& d);

struct BenchRow {
  std::string instance;
  std::string algo;
  bool ok = false;
  i64 value = 0;
  i64 reference = 0;
  i64 micros = 0;
  std::string note;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  int failures = 0;
};

struct CorpusSpec {
  std::vector<GeneratorSpec> instances;
  std::vector<Rational> fptas_eps;
  std::vector<Rational> ptas_eps;
  int threads = 0;       // 0: hardware concurrency, capped at 8
  std::string dump_dir;  // mismatching instances are serialized here
};

/// Runs every applicable solver against the brute-force reference; exact
/// solvers must match it, approximation schemes must stay within their
/// ratio. Instances run in parallel; rows keep corpus order.
BenchReport cross_validate(const CorpusSpec& corpus);
std::string bench_report_to_json_lines(const BenchReport& report);

}  // namespace rsched

#endif  // RSCHED_HARNESS_HPP
