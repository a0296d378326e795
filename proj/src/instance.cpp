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

#include "rsched/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rsched {

namespace {

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      throw InputError(std::string("duplicate ") + what + " id: " + id);
}

}  // namespace

Instance::Instance(std::vector<std::string> job_ids,
                   std::vector<std::string> machine_ids,
                   std::vector<std::vector<i64>> proc, bool identical)
    : job_ids_(std::move(job_ids)),
      machine_ids_(std::move(machine_ids)),
      proc_(std::move(proc)),
      identical_(identical) {
  require_unique(job_ids_, "job");
  require_unique(machine_ids_, "machine");
  const int n = num_jobs();
  const int m = num_machines();
  if (static_cast<int>(proc_.size()) != m)
    throw InputError("proc matrix has wrong machine count");
  for (const auto& row : proc_)
    if (static_cast<int>(row.size()) != n)
      throw InputError("proc matrix has wrong job count");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (proc_[i][j] != kForbidden && proc_[i][j] < 1)
        throw InputError("nonpositive processing time for machine " +
                         machine_ids_[i] + ", job " + job_ids_[j]);

  machines_of_.assign(n, Bitset(m));
  jobs_of_.assign(m, Bitset(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (proc_[i][j] != kForbidden) {
        machines_of_[j].set(i);
        jobs_of_[i].set(j);
      }

  if (identical_ && !is_restricted_identical())
    throw InputError(
        "instance declared identical but per-machine times differ");
}

bool Instance::feasible() const {
  for (int j = 0; j < num_jobs(); ++j)
    if (machines_of_[j].none()) return false;
  return true;
}

bool Instance::is_restricted_identical() const {
  for (int j = 0; j < num_jobs(); ++j) {
    i64 size = kForbidden;
    for (int i = 0; i < num_machines(); ++i) {
      if (!allowed(i, j)) continue;
      if (size == kForbidden)
        size = proc_[i][j];
      else if (proc_[i][j] != size)
        return false;
    }
  }
  return true;
}

i64 Instance::job_size(int job) const {
  for (int i = 0; i < num_machines(); ++i)
    if (allowed(i, job)) return proc_[i][job];
  throw InputError("job_size of a job with empty M(j)");
}

bool SubinstanceRef::feasible() const {
  for (std::size_t j = jobs_.next(0); j < jobs_.size(); j = jobs_.next(j + 1))
    if (!inst_->machines_of(static_cast<int>(j)).intersects(machines_))
      return false;
  return true;
}

Bitset valid_machines(const Instance& inst, const Bitset& jobs) {
  Bitset out(inst.num_machines());
  for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1))
    out |= inst.machines_of(static_cast<int>(j));
  return out;
}

Bitset valid_jobs(const Instance& inst, const Bitset& machines) {
  Bitset out(inst.num_jobs());
  for (std::size_t i = machines.next(0); i < machines.size();
       i = machines.next(i + 1))
    out |= inst.jobs_of(static_cast<int>(i));
  return out;
}

i64 makespan(const SubinstanceRef& sub, const Schedule& sched) {
  const Instance& inst = sub.instance();
  std::vector<i64> load(inst.num_machines(), 0);
  const Bitset& jobs = sub.jobs();
  for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1)) {
    int i = sched.machine_of[j];
    if (i == Schedule::kUnassigned)
      throw InputError("schedule does not cover job " +
                       inst.job_ids()[static_cast<int>(j)]);
    if (!sub.machines().test(i) || !inst.allowed(i, static_cast<int>(j)))
      throw InputError("infeasible assignment of job " +
                       inst.job_ids()[static_cast<int>(j)]);
    load[i] += inst.proc(i, static_cast<int>(j));
  }
  i64 best = 0;
  for (i64 l : load) best = std::max(best, l);
  return best;
}

i64 makespan(const Instance& inst, const Schedule& sched) {
  return makespan(SubinstanceRef::whole(inst), sched);
}

LoadVector LoadVector::of_schedule(const SubinstanceRef& sub,
                                   const Schedule& sched,
                                   const Bitset& domain) {
  const Instance& inst = sub.instance();
  std::vector<i64> full(inst.num_machines(), 0);
  const Bitset& jobs = sub.jobs();
  for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1)) {
    int i = sched.machine_of[j];
    if (i != Schedule::kUnassigned) full[i] += inst.proc(i, static_cast<int>(j));
  }
  LoadVector lv;
  lv.domain = domain;
  for (int i : domain.to_vector()) lv.load.push_back(full[i]);
  return lv;
}

// --- JSON ------------------------------------------------------------------

namespace {

using nlohmann::json;

// Times may come in as rationals (JSON numbers with a fractional part); the
// whole file is scaled by one common factor so the DP tables index exact
// integer loads.
i64 to_scaled_time(const json& v, i64 scale, const std::string& where) {
  if (v.is_number_integer()) {
    i64 t = v.get<i64>();
    if (t == 0) return Instance::kForbidden;
    return t * scale;
  }
  if (v.is_number_float()) {
    double d = v.get<double>() * static_cast<double>(scale);
    i64 r = std::llround(d);
    if (std::abs(d - static_cast<double>(r)) > 1e-6)
      throw InputError("processing time at " + where +
                       " is not representable after scaling");
    return r;
  }
  if (v.is_null()) return Instance::kForbidden;
  throw InputError("processing time at " + where + " is not a number");
}

// Smallest power of ten that makes all float entries integral (up to 1e6).
i64 detect_scale(const json& proc) {
  i64 scale = 1;
  for (const auto& [mid, row] : proc.items()) {
    for (const auto& [jid, v] : row.items()) {
      if (!v.is_number_float()) continue;
      double d = v.get<double>();
      while (scale < 1000000) {
        double s = d * static_cast<double>(scale);
        if (std::abs(s - std::llround(s)) <= 1e-6) break;
        scale *= 10;
      }
    }
  }
  return scale;
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("jobs") || !doc.contains("machines"))
    throw InputError("instance file must have 'jobs' and 'machines'");

  std::vector<std::string> jobs = doc["jobs"].get<std::vector<std::string>>();
  std::vector<std::string> machines =
      doc["machines"].get<std::vector<std::string>>();
  bool identical = doc.value("identical", false);

  std::map<std::string, int> job_index, machine_index;
  for (int j = 0; j < static_cast<int>(jobs.size()); ++j) {
    if (!job_index.emplace(jobs[j], j).second)
      throw InputError("duplicate job id: " + jobs[j]);
  }
  for (int i = 0; i < static_cast<int>(machines.size()); ++i) {
    if (!machine_index.emplace(machines[i], i).second)
      throw InputError("duplicate machine id: " + machines[i]);
  }

  std::vector<std::vector<i64>> proc(
      machines.size(), std::vector<i64>(jobs.size(), Instance::kForbidden));
  if (doc.contains("proc")) {
    const json& p = doc["proc"];
    i64 scale = detect_scale(p);
    for (const auto& [mid, row] : p.items()) {
      auto mi = machine_index.find(mid);
      if (mi == machine_index.end())
        throw InputError("proc references unknown machine: " + mid);
      for (const auto& [jid, v] : row.items()) {
        auto ji = job_index.find(jid);
        if (ji == job_index.end())
          throw InputError("proc references unknown job: " + jid);
        proc[mi->second][ji->second] =
            to_scaled_time(v, scale, mid + "/" + jid);
      }
    }
  }
  return Instance(std::move(jobs), std::move(machines), std::move(proc),
                  identical);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string instance_to_json(const Instance& inst) {
  // Canonical form: ids sorted lexicographically, forbidden pairs omitted.
  std::vector<int> job_order(inst.num_jobs());
  std::vector<int> machine_order(inst.num_machines());
  for (int j = 0; j < inst.num_jobs(); ++j) job_order[j] = j;
  for (int i = 0; i < inst.num_machines(); ++i) machine_order[i] = i;
  std::sort(job_order.begin(), job_order.end(), [&](int a, int b) {
    return inst.job_ids()[a] < inst.job_ids()[b];
  });
  std::sort(machine_order.begin(), machine_order.end(), [&](int a, int b) {
    return inst.machine_ids()[a] < inst.machine_ids()[b];
  });

  json doc;
  doc["jobs"] = json::array();
  for (int j : job_order) doc["jobs"].push_back(inst.job_ids()[j]);
  doc["machines"] = json::array();
  for (int i : machine_order) doc["machines"].push_back(inst.machine_ids()[i]);
  json proc = json::object();
  for (int i : machine_order) {
    json row = json::object();
    for (int j : job_order)
      if (inst.allowed(i, j)) row[inst.job_ids()[j]] = inst.proc(i, j);
    if (!row.empty()) proc[inst.machine_ids()[i]] = std::move(row);
  }
  doc["proc"] = std::move(proc);
  doc["identical"] = inst.identical_flag();
  return doc.dump(2);
}

void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file: " + path);
  out << instance_to_json(inst) << "\n";
}

Rational Rational::parse(const std::string& text) {
  auto bad = [&] { throw InputError("cannot parse rational: " + text); };
  if (text.empty()) bad();
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      i64 n = std::stoll(text.substr(0, slash));
      i64 d = std::stoll(text.substr(slash + 1));
      if (n < 0 || d <= 0) bad();
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
      i64 n = std::stoll(text);
      if (n < 0) bad();
      return Rational(n, 1);
    }
    std::string frac = text.substr(dot + 1);
    if (frac.size() > 9) bad();
    std::string digits = text.substr(0, dot) + frac;
    i64 n = digits.empty() ? 0 : std::stoll(digits);
    i64 d = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) d *= 10;
    if (n < 0) bad();
    return Rational(n, d);
  } catch (const std::logic_error&) {
    bad();
  }
  return Rational();  // unreachable
}

}  // namespace rsched
