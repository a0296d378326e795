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

#ifndef RSCHED_INSTANCE_HPP
#define RSCHED_INSTANCE_HPP

#include <string>
#include <vector>

#include "rsched/bitset.hpp"
#include "rsched/common.hpp"

namespace rsched {

/// A makespan scheduling instance: n jobs, m machines, processing time
/// p(i,j) > 0 where machine i may run job j. Forbidden pairs are stored as
/// an explicit sentinel (never as a huge time), so no solver can ever place
/// a job on a machine outside M(j). Immutable after construction.
class Instance {
 public:
  static constexpr i64 kForbidden = 0;

  Instance() = default;
  /// proc is m rows of n entries; kForbidden marks i not in M(j).
  /// Throws InputError on duplicate ids, nonpositive finite times, or an
  /// `identical` flag contradicted by the data. Infeasible instances (some
  /// M(j) empty) construct fine and are only rejected by solvers.
  Instance(std::vector<std::string> job_ids,
           std::vector<std::string> machine_ids,
           std::vector<std::vector<i64>> proc, bool identical);

  int num_jobs() const { return static_cast<int>(job_ids_.size()); }
  int num_machines() const { return static_cast<int>(machine_ids_.size()); }

  const std::vector<std::string>& job_ids() const { return job_ids_; }
  const std::vector<std::string>& machine_ids() const { return machine_ids_; }

  bool allowed(int machine, int job) const {
    return proc_[machine][job] != kForbidden;
  }
  /// Processing time p(i,j); only valid for allowed pairs.
  i64 proc(int machine, int job) const { return proc_[machine][job]; }

  /// M(j) as a bitset over machines.
  const Bitset& machines_of(int job) const { return machines_of_[job]; }
  /// J(i) as a bitset over jobs.
  const Bitset& jobs_of(int machine) const { return jobs_of_[machine]; }

  /// True iff every job has at least one allowed machine.
  bool feasible() const;

  /// Declared restricted-identical flag (P|M_j|Cmax input).
  bool identical_flag() const { return identical_; }
  /// True iff all finite entries of every job's column agree (data property,
  /// independent of the flag).
  bool is_restricted_identical() const;
  /// The common size p_j of a job; requires at least one allowed machine and
  /// a restricted-identical instance.
  i64 job_size(int job) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.job_ids_ == b.job_ids_ && a.machine_ids_ == b.machine_ids_ &&
           a.proc_ == b.proc_ && a.identical_ == b.identical_;
  }

 private:
  std::vector<std::string> job_ids_;
  std::vector<std::string> machine_ids_;
  std::vector<std::vector<i64>> proc_;  // proc_[machine][job]
  bool identical_ = false;
  std::vector<Bitset> machines_of_;  // per job
  std::vector<Bitset> jobs_of_;      // per machine
};

/// Assignment job -> machine; kUnassigned for jobs outside the solved
/// subinstance. Plain data.
struct Schedule {
  static constexpr int kUnassigned = -1;

  std::vector<int> machine_of;

  Schedule() = default;
  explicit Schedule(int num_jobs)
      : machine_of(static_cast<std::size_t>(num_jobs), kUnassigned) {}

  bool assigns_all(const Bitset& jobs) const {
    for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1))
      if (machine_of[j] == kUnassigned) return false;
    return true;
  }
};

/// View I[J', M'] of a parent instance; no processing times are copied.
/// Derived M(j)/J(i) are intersected with the subsets. Immutable.
class SubinstanceRef {
 public:
  SubinstanceRef(const Instance& inst, Bitset jobs, Bitset machines)
      : inst_(&inst), jobs_(std::move(jobs)), machines_(std::move(machines)) {}

  static SubinstanceRef whole(const Instance& inst) {
    Bitset jobs(inst.num_jobs()), machines(inst.num_machines());
    for (int j = 0; j < inst.num_jobs(); ++j) jobs.set(j);
    for (int i = 0; i < inst.num_machines(); ++i) machines.set(i);
    return SubinstanceRef(inst, std::move(jobs), std::move(machines));
  }

  const Instance& instance() const { return *inst_; }
  const Bitset& jobs() const { return jobs_; }
  const Bitset& machines() const { return machines_; }
  int num_jobs() const { return static_cast<int>(jobs_.count()); }
  int num_machines() const { return static_cast<int>(machines_.count()); }

  /// M(j) within the view.
  Bitset machines_of(int job) const {
    return inst_->machines_of(job) & machines_;
  }
  /// J(i) within the view.
  Bitset jobs_of(int machine) const { return inst_->jobs_of(machine) & jobs_; }

  /// Every job of the view has an allowed machine inside the view. An empty
  /// job set is feasible even with no machines (OPT 0); a nonempty job set
  /// with no machines is not (OPT(empty schedule set) = inf).
  bool feasible() const;

  /// Further restriction; composes as intersection.
  SubinstanceRef restrict(const Bitset& jobs, const Bitset& machines) const {
    return SubinstanceRef(*inst_, jobs_ & jobs, machines_ & machines);
  }

 private:
  const Instance* inst_;
  Bitset jobs_;
  Bitset machines_;
};

/// Union of M(j) over a job set.
Bitset valid_machines(const Instance& inst, const Bitset& jobs);
/// Union of J(i) over a machine set.
Bitset valid_jobs(const Instance& inst, const Bitset& machines);

/// Recomputes max_i sum_{j in sigma^-1(i)} p(i,j) over the view's jobs.
/// Throws InputError if some assignment leaves the view or hits a forbidden
/// pair, or if a view job is unassigned.
i64 makespan(const SubinstanceRef& sub, const Schedule& sched);
i64 makespan(const Instance& inst, const Schedule& sched);

/// Per-machine load vector over an explicit machine domain.
struct LoadVector {
  Bitset domain;               // machine subset
  std::vector<i64> load;       // indexed by position within domain.to_vector()

  /// True iff sched realizes exactly these loads on the domain machines,
  /// counting the view's jobs.
  static LoadVector of_schedule(const SubinstanceRef& sub,
                                const Schedule& sched, const Bitset& domain);
  friend bool operator==(const LoadVector& a, const LoadVector& b) {
    return a.domain == b.domain && a.load == b.load;
  }
};

// --- JSON instance format ------------------------------------------------
// {"jobs":[ids], "machines":[ids], "proc":{machine:{job:int}},
//  "identical": bool}; omitted (machine,job) pairs are forbidden. The
// canonical writer sorts ids lexicographically. Non-integer times are scaled
// to integers on ingest (common denominator over the whole file).

Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text);
std::string instance_to_json(const Instance& inst);
void write_instance(const Instance& inst, const std::string& path);

}  // namespace rsched

#endif  // RSCHED_INSTANCE_HPP
