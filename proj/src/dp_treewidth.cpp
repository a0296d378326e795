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

#include "rsched/dp_treewidth.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "rsched/approx.hpp"

namespace rsched {

// --- activity labeling ---------------------------------------------------

ActivityLabeling label_activity(const SimpleFormDecomposition& sfd,
                                const Instance& inst, GraphKind kind) {
  const int n = inst.num_jobs();
  const int m = inst.num_machines();
  const int nodes = sfd.num_nodes();

  ActivityLabeling lab;
  lab.kind = kind;
  lab.jact.assign(nodes, Bitset(n));
  lab.jina.assign(nodes, Bitset(n));
  lab.jnia.assign(nodes, Bitset(n));
  lab.mact.assign(nodes, Bitset(m));
  lab.mina.assign(nodes, Bitset(m));
  lab.mnia.assign(nodes, Bitset(m));

  const int vertex_limit =
      kind == GraphKind::kPrimal ? n : (kind == GraphKind::kDual ? m : n + m);
  for (int t = 0; t < nodes; ++t)
    for (int v : sfd.bags[t])
      if (v < 0 || v >= vertex_limit)
        throw InputError("decomposition bag vertex out of range for the " +
                         std::string(graph_kind_name(kind)) + " graph");

  // Bag membership split into job/machine parts per kind.
  std::vector<Bitset> bag_jobs(nodes, Bitset(n));
  std::vector<Bitset> bag_machines(nodes, Bitset(m));
  for (int t = 0; t < nodes; ++t)
    for (int v : sfd.bags[t]) {
      switch (kind) {
        case GraphKind::kPrimal:
          bag_jobs[t].set(v);
          break;
        case GraphKind::kDual:
          bag_machines[t].set(v);
          break;
        case GraphKind::kIncidence:
          if (v < n)
            bag_jobs[t].set(v);
          else
            bag_machines[t].set(v - n);
          break;
      }
    }

  // seen_* = union of bags over the subtree; inactive = seen strictly below
  // and gone from the current bag.
  std::vector<Bitset> seen_jobs(nodes, Bitset(n));
  std::vector<Bitset> seen_machines(nodes, Bitset(m));
  for (int t : sfd.post_order()) {
    Bitset below_jobs(n), below_machines(m);
    for (int c : sfd.children[t]) {
      below_jobs |= seen_jobs[c];
      below_machines |= seen_machines[c];
    }
    seen_jobs[t] = below_jobs | bag_jobs[t];
    seen_machines[t] = below_machines | bag_machines[t];

    int p = sfd.parent[t];
    switch (kind) {
      case GraphKind::kPrimal: {
        lab.jact[t] = bag_jobs[t];
        lab.jina[t] = below_jobs.minus(bag_jobs[t]);
        lab.jnia[t] = p < 0 ? Bitset(n) : bag_jobs[t].minus(bag_jobs[p]);
        lab.mina[t] = valid_machines(inst, lab.jina[t]);
        lab.mact[t] = valid_machines(inst, lab.jact[t]).minus(lab.mina[t]);
        lab.mnia[t] = valid_machines(inst, lab.jnia[t]).minus(lab.mina[t]);
        break;
      }
      case GraphKind::kDual: {
        lab.mact[t] = bag_machines[t];
        lab.mina[t] = below_machines.minus(bag_machines[t]);
        lab.mnia[t] =
            p < 0 ? Bitset(m) : bag_machines[t].minus(bag_machines[p]);
        lab.jina[t] = valid_jobs(inst, lab.mina[t]);
        lab.jact[t] = valid_jobs(inst, lab.mact[t]).minus(lab.jina[t]);
        lab.jnia[t] = valid_jobs(inst, lab.mnia[t]).minus(lab.jina[t]);
        break;
      }
      case GraphKind::kIncidence: {
        lab.jact[t] = bag_jobs[t];
        lab.jina[t] = below_jobs.minus(bag_jobs[t]);
        lab.jnia[t] = p < 0 ? Bitset(n) : bag_jobs[t].minus(bag_jobs[p]);
        lab.mact[t] = bag_machines[t];
        lab.mina[t] = below_machines.minus(bag_machines[t]);
        lab.mnia[t] =
            p < 0 ? Bitset(m) : bag_machines[t].minus(bag_machines[p]);
        break;
      }
    }
  }
  return lab;
}

std::vector<ActivityAuditIssue> audit_activity_labeling(
    const SimpleFormDecomposition& sfd, const Instance& inst,
    const ActivityLabeling& lab) {
  std::vector<ActivityAuditIssue> issues;
  auto flag = [&issues](int t, const char* what) {
    issues.push_back({t, what});
  };
  const int n = inst.num_jobs();
  const int m = inst.num_machines();

  for (int t = 0; t < sfd.num_nodes(); ++t) {
    if (!valid_machines(inst, lab.jina[t] | lab.jnia[t])
             .subset_of(lab.mact[t] | lab.mina[t]))
      flag(t, "(1) inactive jobs reach a machine outside act+ina");
    if (!valid_jobs(inst, lab.mina[t] | lab.mnia[t])
             .subset_of(lab.jact[t] | lab.jina[t]))
      flag(t, "(2) inactive machines reach a job outside act+ina");

    // (3)/(4): children's (nearly) inactive sets partition this node's
    // inactive sets.
    std::vector<Bitset> jparts, mparts;
    for (int c : sfd.children[t]) {
      jparts.push_back(lab.jina[c]);
      jparts.push_back(lab.jnia[c]);
      mparts.push_back(lab.mina[c]);
      mparts.push_back(lab.mnia[c]);
    }
    Bitset junion(n), munion(m);
    bool jdisjoint = true, mdisjoint = true;
    for (const Bitset& part : jparts) {
      if (junion.intersects(part)) jdisjoint = false;
      junion |= part;
    }
    for (const Bitset& part : mparts) {
      if (munion.intersects(part)) mdisjoint = false;
      munion |= part;
    }
    if (!jdisjoint || !(junion == lab.jina[t]))
      flag(t, "(3) children's job sets do not partition Jina");
    if (!mdisjoint || !(munion == lab.mina[t]))
      flag(t, "(4) children's machine sets do not partition Mina");

    if (lab.kind == GraphKind::kPrimal) {
      if (!valid_jobs(inst, lab.mnia[t]).subset_of(lab.jact[t]))
        flag(t, "(5) nearly inactive machines see a non-active job");
      if (!(valid_machines(inst, lab.jina[t] | lab.jnia[t]) ==
            (lab.mnia[t] | lab.mina[t])))
        flag(t, "(6) M(Jina+Jnia) != Mnia+Mina");
    }
    if (lab.kind == GraphKind::kDual) {
      if (!valid_machines(inst, lab.jnia[t]).subset_of(lab.mact[t]))
        flag(t, "(5') nearly inactive jobs reach a non-active machine");
      if (!(valid_jobs(inst, lab.mina[t] | lab.mnia[t]) ==
            (lab.jnia[t] | lab.jina[t])))
        flag(t, "(6') J(Mina+Mnia) != Jnia+Jina");
    }
  }
  return issues;
}

// --- shared helpers -------------------------------------------------------

namespace {

struct LocalJobs {
  std::vector<int> jobs;      // global ids, ascending
  std::vector<int> local_of;  // global -> local index or -1

  void init(const Bitset& set, int n) {
    jobs = set.to_vector();
    local_of.assign(n, -1);
    for (int k = 0; k < static_cast<int>(jobs.size()); ++k)
      local_of[jobs[k]] = k;
  }
  int size() const { return static_cast<int>(jobs.size()); }
};

// from-local mask -> to-local mask; false if some job is not active there.
bool translate_mask(const LocalJobs& from, const LocalJobs& to,
                    std::uint32_t mask, std::uint32_t* out) {
  std::uint32_t r = 0;
  while (mask) {
    int k = std::countr_zero(mask);
    mask &= mask - 1;
    int c = to.local_of[from.jobs[k]];
    if (c < 0) return false;
    r |= std::uint32_t{1} << c;
  }
  *out = r;
  return true;
}

std::uint32_t eligibility_mask(const Instance& inst, const LocalJobs& lj,
                               const Bitset& machines) {
  std::uint32_t mask = 0;
  for (int k = 0; k < lj.size(); ++k)
    if (inst.machines_of(lj.jobs[k]).intersects(machines))
      mask |= std::uint32_t{1} << k;
  return mask;
}

std::uint32_t membership_mask(const LocalJobs& lj, const Bitset& set) {
  std::uint32_t mask = 0;
  for (int k = 0; k < lj.size(); ++k)
    if (set.test(lj.jobs[k])) mask |= std::uint32_t{1} << k;
  return mask;
}

i64 peak(const std::vector<i64>& loads) {
  i64 p = 0;
  for (i64 l : loads) p = std::max(p, l);
  return p;
}

// Positions of child active machines inside the node's active machine list
// (-1 once the machine left activity).
std::vector<int> projection(const std::vector<int>& child_mach,
                            const std::vector<int>& node_mach) {
  std::vector<int> pos;
  pos.reserve(child_mach.size());
  for (int i : child_mach) {
    auto it = std::lower_bound(node_mach.begin(), node_mach.end(), i);
    pos.push_back(it != node_mach.end() && *it == i
                      ? static_cast<int>(it - node_mach.begin())
                      : -1);
  }
  return pos;
}

bool add_projected(const std::vector<int>& proj, const std::vector<i64>& from,
                   std::vector<i64>* acc, i64 cap) {
  for (std::size_t k = 0; k < from.size(); ++k) {
    int p = proj[k];
    if (p < 0) continue;
    (*acc)[p] += from[k];
    if (cap >= 0 && (*acc)[p] > cap) return false;
  }
  return true;
}

constexpr int kMachineDpCap = 32;

// --- primal ---------------------------------------------------------------

class PrimalSolver {
 public:
  PrimalSolver(const Instance& inst, const SimpleFormDecomposition& sfd,
               const ActivityLabeling& lab, const TreewidthDpLimits& limits)
      : inst_(inst), sfd_(sfd), lab_(lab), limits_(limits) {}

  SolveResult run() {
    nodes_.resize(sfd_.num_nodes());
    std::size_t total_entries = 0;
    for (int t : sfd_.post_order()) {
      NodeData& nd = nodes_[t];
      nd.jobs.init(lab_.jact[t], inst_.num_jobs());
      if (nd.jobs.size() > limits_.bag_job_cap)
        throw ResourceLimitError("primal DP bag too large: " +
                                 std::to_string(nd.jobs.size()));
      const std::size_t table = std::size_t{1} << nd.jobs.size();
      total_entries += 2 * table;
      if (total_entries > limits_.table_budget)
        throw ResourceLimitError("primal DP table budget exceeded");

      nd.elig_mina = eligibility_mask(inst_, nd.jobs, lab_.mina[t]);
      nd.elig_mnia = eligibility_mask(inst_, nd.jobs, lab_.mnia[t]);
      nd.jnia_mask = membership_mask(nd.jobs, lab_.jnia[t]);
      nd.elig_tilde =
          eligibility_mask(inst_, nd.jobs, lab_.mina[t] | lab_.mnia[t]) &
          ~nd.jnia_mask;
      nd.s.assign(table, SEntry{});
      nd.tilde.assign(table, TEntry{});

      if (sfd_.children[t].empty()) {
        nd.s[0].val = Cost(0);
        nd.tilde[0].val = Cost(0);
        continue;
      }
      fill_s(t);
      fill_tilde(t);
    }

    Cost best = nodes_[sfd_.root].s[0].val;
    if (best.is_infinite())
      throw std::logic_error("primal DP: infinite optimum on feasible input");
    SolveResult r;
    r.feasible = true;
    r.value = best.value();
    r.schedule = Schedule(inst_.num_jobs());
    recover_s(sfd_.root, 0, &r.schedule);
    if (makespan(inst_, r.schedule) != r.value)
      throw std::logic_error("primal DP: schedule value mismatch");
    return r;
  }

 private:
  struct SEntry {
    Cost val = Cost::infinity();
    std::uint32_t left = 0, right = 0;  // split of the key, node-local masks
  };
  struct TEntry {
    Cost val = Cost::infinity();
    std::uint32_t amask = 0, xmask = 0;
  };
  struct NodeData {
    LocalJobs jobs;
    std::uint32_t elig_mina = 0, elig_mnia = 0, elig_tilde = 0, jnia_mask = 0;
    std::vector<SEntry> s;
    std::vector<TEntry> tilde;
    std::unordered_map<std::uint32_t, Cost> mdp_memo;
  };

  Cost tilde_lookup(int child, const LocalJobs& from, std::uint32_t mask) {
    std::uint32_t translated;
    if (!translate_mask(from, nodes_[child].jobs, mask, &translated))
      return Cost::infinity();
    return nodes_[child].tilde[translated].val;
  }

  void fill_s(int t) {
    NodeData& nd = nodes_[t];
    const auto& kids = sfd_.children[t];
    const std::uint32_t table = std::uint32_t{1} << nd.jobs.size();
    for (std::uint32_t setj = 0; setj < table; ++setj) {
      if (setj & ~nd.elig_mina) continue;
      SEntry& e = nd.s[setj];
      if (kids.size() == 1) {
        Cost v = tilde_lookup(kids[0], nd.jobs, setj);
        if (v < e.val) e = SEntry{v, setj, 0};
        continue;
      }
      std::uint32_t left = setj;
      while (true) {
        Cost vl = tilde_lookup(kids[0], nd.jobs, left);
        if (!vl.is_infinite()) {
          Cost v = max(vl, tilde_lookup(kids[1], nd.jobs, setj ^ left));
          if (v < e.val) e = SEntry{v, left, setj ^ left};
        }
        if (left == 0) break;
        left = (left - 1) & setj;
      }
    }
  }

  Cost machine_dp_value(int t, std::uint32_t amask) {
    NodeData& nd = nodes_[t];
    auto it = nd.mdp_memo.find(amask);
    if (it != nd.mdp_memo.end()) return it->second;
    SolveResult r = solve_machine_dp(
        SubinstanceRef(inst_, mask_to_jobs(nd, amask), lab_.mnia[t]),
        kMachineDpCap);
    Cost v = r.feasible ? Cost(r.value) : Cost::infinity();
    nd.mdp_memo.emplace(amask, v);
    return v;
  }

  Bitset mask_to_jobs(const NodeData& nd, std::uint32_t mask) const {
    Bitset jobs(inst_.num_jobs());
    while (mask) {
      int k = std::countr_zero(mask);
      mask &= mask - 1;
      jobs.set(nd.jobs.jobs[k]);
    }
    return jobs;
  }

  void fill_tilde(int t) {
    NodeData& nd = nodes_[t];
    const std::uint32_t table = std::uint32_t{1} << nd.jobs.size();
    for (std::uint32_t setj = 0; setj < table; ++setj) {
      if (setj & ~nd.elig_tilde) continue;
      TEntry& e = nd.tilde[setj];
      const std::uint32_t pool = setj | nd.jnia_mask;
      const std::uint32_t a_universe = pool & nd.elig_mnia;
      std::uint32_t a = a_universe;
      while (true) {
        std::uint32_t x = pool ^ a;
        if (!(x & ~nd.elig_mina)) {
          Cost v = max(nd.s[x].val, machine_dp_value(t, a));
          if (v < e.val) e = TEntry{v, a, x};
        }
        if (a == 0) break;
        a = (a - 1) & a_universe;
      }
    }
  }

  void recover_s(int t, std::uint32_t setj, Schedule* out) {
    const auto& kids = sfd_.children[t];
    if (kids.empty()) return;
    const SEntry& e = nodes_[t].s[setj];
    std::uint32_t tr = 0;
    if (!translate_mask(nodes_[t].jobs, nodes_[kids[0]].jobs, e.left, &tr))
      throw std::logic_error("primal DP: stored split does not translate");
    recover_tilde(kids[0], tr, out);
    if (kids.size() == 2) {
      if (!translate_mask(nodes_[t].jobs, nodes_[kids[1]].jobs, e.right, &tr))
        throw std::logic_error("primal DP: stored split does not translate");
      recover_tilde(kids[1], tr, out);
    }
  }

  void recover_tilde(int t, std::uint32_t setj, Schedule* out) {
    NodeData& nd = nodes_[t];
    const TEntry& e = nd.tilde[setj];
    if (e.amask) {
      Bitset jobs = mask_to_jobs(nd, e.amask);
      SolveResult r = solve_machine_dp(
          SubinstanceRef(inst_, jobs, lab_.mnia[t]), kMachineDpCap);
      for (std::size_t j = jobs.next(0); j < jobs.size(); j = jobs.next(j + 1))
        out->machine_of[j] = r.schedule.machine_of[j];
    }
    recover_s(t, e.xmask, out);
  }

  const Instance& inst_;
  const SimpleFormDecomposition& sfd_;
  const ActivityLabeling& lab_;
  const TreewidthDpLimits& limits_;
  std::vector<NodeData> nodes_;
};

// --- dual -------------------------------------------------------------

class DualSolver {
 public:
  DualSolver(const Instance& inst, const SimpleFormDecomposition& sfd,
             const ActivityLabeling& lab, i64 cap,
             const TreewidthDpLimits& limits)
      : inst_(inst), sfd_(sfd), lab_(lab), cap_(cap), limits_(limits) {}

  SolveResult run() {
    nodes_.resize(sfd_.num_nodes());
    std::size_t total_entries = 0;
    for (int t : sfd_.post_order()) {
      NodeData& nd = nodes_[t];
      nd.amach = lab_.mact[t].to_vector();
      if (sfd_.children[t].empty()) {
        nd.s[{}] = SEntry{Cost(0), {}, {}};
        nd.tilde[{}] = TEntry{Cost(0), -1, {}};
        continue;
      }
      fill_s(t);
      fill_tilde(t);
      total_entries += nd.s.size() + nd.tilde.size();
      if (total_entries > limits_.table_budget)
        throw ResourceLimitError("dual DP table budget exceeded");
    }

    auto root_it = nodes_[sfd_.root].s.find({});
    if (root_it == nodes_[sfd_.root].s.end() ||
        root_it->second.val.is_infinite())
      throw std::logic_error("dual DP: no root entry on feasible input");
    SolveResult r;
    r.feasible = true;
    r.value = root_it->second.val.value();
    r.schedule = Schedule(inst_.num_jobs());
    recover_s(sfd_.root, {}, &r.schedule);
    if (makespan(inst_, r.schedule) != r.value)
      throw std::logic_error("dual DP: schedule value mismatch");
    return r;
  }

 private:
  using Key = std::vector<i64>;
  struct SEntry {
    Cost val = Cost::infinity();
    Key left, right;  // children's tilde keys
  };
  struct TEntry {
    Cost val = Cost::infinity();
    int alpha = -1;  // index into alphas
    Key xi;
  };
  struct NodeData {
    std::vector<int> amach;
    std::map<Key, SEntry> s;
    std::map<Key, TEntry> tilde;
    LoadVectorSet alphas;  // Lambda(Jnia, Mact) with witnesses
  };

  void fill_s(int t) {
    NodeData& nd = nodes_[t];
    const auto& kids = sfd_.children[t];
    std::vector<std::vector<int>> proj;
    for (int c : kids) proj.push_back(projection(nodes_[c].amach, nd.amach));

    if (kids.size() == 1) {
      for (const auto& [kl, el] : nodes_[kids[0]].tilde) {
        Key acc(nd.amach.size(), 0);
        if (!add_projected(proj[0], kl, &acc, cap_)) continue;
        SEntry& e = nd.s[acc];
        if (el.val < e.val) e = SEntry{el.val, kl, {}};
      }
      return;
    }
    for (const auto& [kl, el] : nodes_[kids[0]].tilde) {
      Key base(nd.amach.size(), 0);
      if (!add_projected(proj[0], kl, &base, cap_)) continue;
      for (const auto& [kr, er] : nodes_[kids[1]].tilde) {
        Key acc = base;
        if (!add_projected(proj[1], kr, &acc, cap_)) continue;
        Cost v = max(el.val, er.val);
        SEntry& e = nd.s[acc];
        if (v < e.val) e = SEntry{v, kl, kr};
      }
    }
  }

  void fill_tilde(int t) {
    NodeData& nd = nodes_[t];
    nd.alphas = enumerate_load_vectors(
        SubinstanceRef(inst_, lab_.jnia[t], lab_.mact[t]), cap_,
        limits_.table_budget);
    for (std::size_t ai = 0; ai < nd.alphas.size(); ++ai) {
      const auto& alpha = nd.alphas.vectors[ai];
      for (const auto& [xi, es] : nd.s) {
        if (es.val.is_infinite()) continue;
        Key acc = alpha;
        bool fits = true;
        for (std::size_t k = 0; k < acc.size(); ++k) {
          acc[k] += xi[k];
          if (cap_ >= 0 && acc[k] > cap_) {
            fits = false;
            break;
          }
        }
        if (!fits) continue;
        Cost v = max(es.val, Cost(peak(acc)));
        TEntry& e = nd.tilde[acc];
        if (v < e.val) e = TEntry{v, static_cast<int>(ai), xi};
      }
    }
  }

  void recover_s(int t, const Key& key, Schedule* out) {
    const auto& kids = sfd_.children[t];
    if (kids.empty()) return;
    const SEntry& e = nodes_[t].s.at(key);
    recover_tilde(kids[0], e.left, out);
    if (kids.size() == 2) recover_tilde(kids[1], e.right, out);
  }

  void recover_tilde(int t, const Key& key, Schedule* out) {
    NodeData& nd = nodes_[t];
    const TEntry& e = nd.tilde.at(key);
    if (e.alpha >= 0)
      for (auto [j, i] : nd.alphas.witness[e.alpha]) out->machine_of[j] = i;
    recover_s(t, e.xi, out);
  }

  const Instance& inst_;
  const SimpleFormDecomposition& sfd_;
  const ActivityLabeling& lab_;
  const i64 cap_;
  const TreewidthDpLimits& limits_;
  std::vector<NodeData> nodes_;
};

// --- incidence ----------------------------------------------------------

class IncidenceSolver {
 public:
  IncidenceSolver(const Instance& inst, const SimpleFormDecomposition& sfd,
                  const ActivityLabeling& lab, i64 cap,
                  const TreewidthDpLimits& limits)
      : inst_(inst), sfd_(sfd), lab_(lab), cap_(cap), limits_(limits) {}

  SolveResult run() {
    nodes_.resize(sfd_.num_nodes());
    std::size_t total_entries = 0;
    for (int t : sfd_.post_order()) {
      NodeData& nd = nodes_[t];
      nd.jobs.init(lab_.jact[t], inst_.num_jobs());
      if (nd.jobs.size() > limits_.bag_job_cap)
        throw ResourceLimitError("incidence DP bag too large");
      nd.amach = lab_.mact[t].to_vector();
      nd.elig_mina = eligibility_mask(inst_, nd.jobs, lab_.mina[t]);
      nd.elig_mnia = eligibility_mask(inst_, nd.jobs, lab_.mnia[t]);
      nd.elig_mact = eligibility_mask(inst_, nd.jobs, lab_.mact[t]);
      nd.jnia_mask = membership_mask(nd.jobs, lab_.jnia[t]);
      nd.elig_tilde =
          eligibility_mask(inst_, nd.jobs, lab_.mina[t] | lab_.mnia[t]) &
          ~nd.jnia_mask;
      nd.mnia_pos = projection(lab_.mnia[t].to_vector(), nd.amach);

      if (sfd_.children[t].empty()) {
        nd.s[{0, {}}] = SEntry{Cost(0), {}, {}};
        nd.tilde[{0, {}}] = TEntry{Cost(0), 0, -1, -1, {}};
        continue;
      }
      fill_s(t);
      fill_tilde(t);
      total_entries += nd.s.size() + nd.tilde.size();
      if (total_entries > limits_.table_budget)
        throw ResourceLimitError("incidence DP table budget exceeded");
    }

    Key root_key{0, {}};
    auto it = nodes_[sfd_.root].s.find(root_key);
    if (it == nodes_[sfd_.root].s.end() || it->second.val.is_infinite())
      throw std::logic_error("incidence DP: no root entry on feasible input");
    SolveResult r;
    r.feasible = true;
    r.value = it->second.val.value();
    r.schedule = Schedule(inst_.num_jobs());
    recover_s(sfd_.root, root_key, &r.schedule);
    if (makespan(inst_, r.schedule) != r.value)
      throw std::logic_error("incidence DP: schedule value mismatch");
    return r;
  }

 private:
  using Key = std::pair<std::uint32_t, std::vector<i64>>;
  struct SEntry {
    Cost val = Cost::infinity();
    Key left, right;
  };
  struct TEntry {
    Cost val = Cost::infinity();
    std::uint32_t amask = 0;
    int alpha = -1, beta = -1;
    Key x;
  };
  struct NodeData {
    LocalJobs jobs;
    std::vector<int> amach;
    std::vector<int> mnia_pos;  // Mnia positions within amach
    std::uint32_t elig_mina = 0, elig_mnia = 0, elig_mact = 0, elig_tilde = 0,
                  jnia_mask = 0;
    std::map<Key, SEntry> s;
    std::map<Key, TEntry> tilde;
    std::map<std::uint32_t, LoadVectorSet> alpha_memo;  // A∩J' on Mnia
    std::map<std::uint32_t, LoadVectorSet> beta_memo;   // A∩Jnia on Mact
  };

  Bitset mask_to_jobs(const NodeData& nd, std::uint32_t mask) const {
    Bitset jobs(inst_.num_jobs());
    while (mask) {
      int k = std::countr_zero(mask);
      mask &= mask - 1;
      jobs.set(nd.jobs.jobs[k]);
    }
    return jobs;
  }

  void fill_s(int t) {
    NodeData& nd = nodes_[t];
    const auto& kids = sfd_.children[t];
    std::vector<std::vector<int>> proj;
    for (int c : kids) proj.push_back(projection(nodes_[c].amach, nd.amach));

    if (kids.size() == 1) {
      for (const auto& [kl, el] : nodes_[kids[0]].tilde) {
        if (el.val.is_infinite()) continue;
        std::uint32_t jl;
        if (!translate_mask(nodes_[kids[0]].jobs, nd.jobs, kl.first, &jl))
          continue;
        Key acc{jl, std::vector<i64>(nd.amach.size(), 0)};
        if (!add_projected(proj[0], kl.second, &acc.second, cap_)) continue;
        SEntry& e = nd.s[acc];
        if (el.val < e.val) e = SEntry{el.val, kl, {}};
      }
      return;
    }
    for (const auto& [kl, el] : nodes_[kids[0]].tilde) {
      if (el.val.is_infinite()) continue;
      std::uint32_t jl;
      if (!translate_mask(nodes_[kids[0]].jobs, nd.jobs, kl.first, &jl))
        continue;
      Key base{jl, std::vector<i64>(nd.amach.size(), 0)};
      if (!add_projected(proj[0], kl.second, &base.second, cap_)) continue;
      for (const auto& [kr, er] : nodes_[kids[1]].tilde) {
        if (er.val.is_infinite()) continue;
        std::uint32_t jr;
        if (!translate_mask(nodes_[kids[1]].jobs, nd.jobs, kr.first, &jr))
          continue;
        if (jl & jr) continue;
        Key acc{jl | jr, base.second};
        if (!add_projected(proj[1], kr.second, &acc.second, cap_)) continue;
        Cost v = max(el.val, er.val);
        SEntry& e = nd.s[acc];
        if (v < e.val) e = SEntry{v, kl, kr};
      }
    }
  }

  const LoadVectorSet& alpha_set(int t, std::uint32_t amask) {
    NodeData& nd = nodes_[t];
    auto it = nd.alpha_memo.find(amask);
    if (it == nd.alpha_memo.end())
      it = nd.alpha_memo
               .emplace(amask,
                        enumerate_load_vectors(
                            SubinstanceRef(inst_, mask_to_jobs(nd, amask),
                                           lab_.mnia[t]),
                            cap_, limits_.table_budget))
               .first;
    return it->second;
  }

  const LoadVectorSet& beta_set(int t, std::uint32_t amask) {
    NodeData& nd = nodes_[t];
    auto it = nd.beta_memo.find(amask);
    if (it == nd.beta_memo.end())
      it = nd.beta_memo
               .emplace(amask,
                        enumerate_load_vectors(
                            SubinstanceRef(inst_, mask_to_jobs(nd, amask),
                                           lab_.mact[t]),
                            cap_, limits_.table_budget))
               .first;
    return it->second;
  }

  void fill_tilde(int t) {
    NodeData& nd = nodes_[t];
    // Bucket the S table by its job part.
    std::map<std::uint32_t, std::vector<const std::pair<const Key, SEntry>*>>
        by_jobs;
    for (const auto& entry : nd.s)
      if (!entry.second.val.is_infinite())
        by_jobs[entry.first.first].push_back(&entry);

    const std::uint32_t table = std::uint32_t{1} << nd.jobs.size();
    for (std::uint32_t setj = 0; setj < table; ++setj) {
      if (setj & ~nd.elig_tilde) continue;
      const std::uint32_t pool = setj | nd.jnia_mask;
      std::uint32_t a = pool;
      while (true) {
        const std::uint32_t x = pool ^ a;
        const std::uint32_t a_jp = a & setj;
        const std::uint32_t a_nia = a & nd.jnia_mask;
        if ((a_jp & ~nd.elig_mnia) == 0 && (a_nia & ~nd.elig_mact) == 0 &&
            (x & ~nd.elig_mina) == 0) {
          auto bucket = by_jobs.find(x);
          if (bucket != by_jobs.end())
            relax_tilde(t, setj, a, a_jp, a_nia, bucket->second);
        }
        if (a == 0) break;
        a = (a - 1) & pool;
      }
    }
  }

  void relax_tilde(
      int t, std::uint32_t setj, std::uint32_t a, std::uint32_t a_jp,
      std::uint32_t a_nia,
      const std::vector<const std::pair<const Key, SEntry>*>& bucket) {
    NodeData& nd = nodes_[t];
    const LoadVectorSet& alphas = alpha_set(t, a_jp);
    const LoadVectorSet& betas = beta_set(t, a_nia);
    if (alphas.vectors.empty() || betas.vectors.empty()) return;

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      // alpha lives on the nearly inactive machines; widen to Mact slots.
      std::vector<i64> alpha_ext(nd.amach.size(), 0);
      for (std::size_t k = 0; k < alphas.vectors[ai].size(); ++k)
        alpha_ext[nd.mnia_pos[k]] = alphas.vectors[ai][k];
      for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        std::vector<i64> ab = alpha_ext;
        bool fits = true;
        for (std::size_t k = 0; k < ab.size(); ++k) {
          ab[k] += betas.vectors[bi][k];
          if (cap_ >= 0 && ab[k] > cap_) {
            fits = false;
            break;
          }
        }
        if (!fits) continue;
        for (const auto* sentry : bucket) {
          Key acc{setj, ab};
          bool ok = true;
          for (std::size_t k = 0; k < ab.size(); ++k) {
            acc.second[k] += sentry->first.second[k];
            if (cap_ >= 0 && acc.second[k] > cap_) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          Cost v = max(sentry->second.val, Cost(peak(acc.second)));
          TEntry& e = nd.tilde[acc];
          if (v < e.val)
            e = TEntry{v, a, static_cast<int>(ai), static_cast<int>(bi),
                       sentry->first};
        }
      }
    }
  }

  void recover_s(int t, const Key& key, Schedule* out) {
    const auto& kids = sfd_.children[t];
    if (kids.empty()) return;
    const SEntry& e = nodes_[t].s.at(key);
    recover_tilde(kids[0], e.left, out);
    if (kids.size() == 2) recover_tilde(kids[1], e.right, out);
  }

  void recover_tilde(int t, const Key& key, Schedule* out) {
    NodeData& nd = nodes_[t];
    const TEntry& e = nd.tilde.at(key);
    if (e.alpha >= 0) {
      const LoadVectorSet& alphas = nd.alpha_memo.at(e.amask & key.first);
      for (auto [j, i] : alphas.witness[e.alpha]) out->machine_of[j] = i;
      const LoadVectorSet& betas = nd.beta_memo.at(e.amask & nd.jnia_mask);
      for (auto [j, i] : betas.witness[e.beta]) out->machine_of[j] = i;
      recover_s(t, e.x, out);
    }
  }

  const Instance& inst_;
  const SimpleFormDecomposition& sfd_;
  const ActivityLabeling& lab_;
  const i64 cap_;
  const TreewidthDpLimits& limits_;
  std::vector<NodeData> nodes_;
};

i64 resolve_cap(const Instance& inst, i64 load_cap) {
  if (load_cap >= 0) return load_cap;
  return two_approx(SubinstanceRef::whole(inst)).value;
}

SolveResult trivial_empty(const Instance& inst) {
  SolveResult r;
  r.feasible = true;
  r.value = 0;
  r.schedule = Schedule(inst.num_jobs());
  return r;
}

}  // namespace

SolveResult solve_primal(const Instance& inst,
                         const SimpleFormDecomposition& sfd,
                         const TreewidthDpLimits& limits) {
  if (inst.num_jobs() == 0) return trivial_empty(inst);
  if (!inst.feasible()) return SolveResult::infeasible_result();
  ActivityLabeling lab = label_activity(sfd, inst, GraphKind::kPrimal);
  return PrimalSolver(inst, sfd, lab, limits).run();
}

SolveResult solve_dual(const Instance& inst, const SimpleFormDecomposition& sfd,
                       i64 load_cap, const TreewidthDpLimits& limits) {
  if (inst.num_jobs() == 0) return trivial_empty(inst);
  if (!inst.feasible()) return SolveResult::infeasible_result();
  ActivityLabeling lab = label_activity(sfd, inst, GraphKind::kDual);
  return DualSolver(inst, sfd, lab, resolve_cap(inst, load_cap), limits).run();
}

SolveResult solve_incidence(const Instance& inst,
                            const SimpleFormDecomposition& sfd, i64 load_cap,
                            const TreewidthDpLimits& limits) {
  if (inst.num_jobs() == 0) return trivial_empty(inst);
  if (!inst.feasible()) return SolveResult::infeasible_result();
  ActivityLabeling lab = label_activity(sfd, inst, GraphKind::kIncidence);
  return IncidenceSolver(inst, sfd, lab, resolve_cap(inst, load_cap), limits)
      .run();
}

SolveResult fptas_treewidth(const Instance& inst,
                            const SimpleFormDecomposition& sfd, GraphKind kind,
                            const Rational& eps,
                            const TreewidthDpLimits& limits) {
  if (!eps.positive()) throw InputError("fptas_treewidth requires eps > 0");
  if (kind != GraphKind::kDual && kind != GraphKind::kIncidence)
    throw InputError(
        "fptas_treewidth runs on dual or incidence decompositions");
  if (inst.num_jobs() == 0) return trivial_empty(inst);
  if (!inst.feasible()) return SolveResult::infeasible_result();

  SolveResult bound = two_approx(SubinstanceRef::whole(inst));
  Rational delta(eps.num, 2 * eps.den);
  FixedGridRounding grid =
      round_to_fixed_grid(inst, delta, bound.value, inst.num_jobs());

  SolveResult inner =
      kind == GraphKind::kDual
          ? solve_dual(grid.instance, sfd, grid.cap_units, limits)
          : solve_incidence(grid.instance, sfd, grid.cap_units, limits);
  if (!inner.feasible) return SolveResult::infeasible_result();
  SolveResult r;
  r.feasible = true;
  r.schedule = std::move(inner.schedule);
  r.value = makespan(inst, r.schedule);
  return r;
}

}  // namespace rsched
