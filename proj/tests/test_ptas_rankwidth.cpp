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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "rsched/approx.hpp"
#include "rsched/branch_decomp.hpp"
#include "rsched/graphs.hpp"
#include "rsched/harness.hpp"
#include "rsched/ptas_rankwidth.hpp"

using namespace rsched;

namespace {

GeneratorSpec tiny(InstanceClass cls, std::uint64_t seed, int n, int m,
                   int distinct = 3) {
  GeneratorSpec spec;
  spec.cls = cls;
  spec.seed = seed;
  spec.num_jobs = n;
  spec.num_machines = m;
  spec.max_distinct_sizes = distinct;
  return spec;
}

BranchDecomposition derive_bd(const Instance& inst) {
  RestrictionGraph inc = build_graph(inst, GraphKind::kIncidence);
  Bitset jobs(inc.num_vertices());
  for (int j = 0; j < inst.num_jobs(); ++j) jobs.set(j);
  BicographResult rec = bicograph_recognize(inc, jobs);
  if (rec.is_bicograph)
    return bicotree_to_branch_decomposition(rec.tree, inc.num_vertices());
  return caterpillar_branch_decomposition(inc.num_vertices());
}

// Exact comparison of units * (B / unit_den) against an original-scale
// value times num/den: sign of units*B*den - value*unit_den*num.
bool units_leq_scaled(i64 units, const RoundedInstance& ri, i64 value,
                      i64 num, i64 den) {
  __int128 lhs = static_cast<__int128>(units) * ri.upper_bound * den;
  __int128 rhs = static_cast<__int128>(value) * ri.unit_den * num;
  return lhs <= rhs;
}

}  // namespace

TEST_CASE("round_instance follows the grid formulas") {
  SUBCASE("big job rounds up to the next delta^2*B multiple") {
    // B=200, eps=0.7 -> delta=1/10, delta^2*B = 2; p=3 -> p'=4.
    Instance inst = parse_instance(R"({"jobs":["a"],"machines":["m"],
      "proc":{"m":{"a":3}},"identical":true})");
    RoundedInstance ri = round_instance(inst, Rational::parse("0.7"), 200);
    CHECK(ri.delta == Rational(1, 10));
    // p=3 is below delta*B=20, so it is small; a 23 job is big.
    Instance inst2 = parse_instance(R"({"jobs":["a"],"machines":["m"],
      "proc":{"m":{"a":23}},"identical":true})");
    RoundedInstance ri2 = round_instance(inst2, Rational::parse("0.7"), 200);
    REQUIRE(ri2.instance.num_jobs() == 1);
    CHECK(ri2.from_small[0] == 0);
    // p' = 2*ceil(23/2) = 24; in units of B/(n*b^2) = 200/100 = 2 -> 12.
    CHECK(ri2.instance.proc(0, 0) == 12);
  }

  SUBCASE("grid-aligned big job is unchanged") {
    Instance inst = parse_instance(R"({"jobs":["a"],"machines":["m"],
      "proc":{"m":{"a":24}},"identical":true})");
    RoundedInstance ri = round_instance(inst, Rational::parse("0.7"), 200);
    CHECK(ri.instance.proc(0, 0) * ri.upper_bound ==
          24 * ri.unit_den);  // 24 exactly, in units
  }

  SUBCASE("small job expands into ceil(n*p/(delta*B)) unit copies") {
    // n=10, B=100, eps=0.7 -> delta=1/10, delta*B = 10, delta*B/n = 1.
    std::string jobs = R"(["a","b","c","d","e","f","g","h","i","k"])";
    std::string row = R"({"a":2,"b":3,"c":3,"d":3,"e":3,"f":3,"g":3,
                          "h":3,"i":3,"k":3})";
    Instance inst = parse_instance(R"({"jobs":)" + jobs +
                                   R"(,"machines":["m"],"proc":{"m":)" + row +
                                   R"(},"identical":true})");
    RoundedInstance ri = round_instance(inst, Rational::parse("0.7"), 100);
    CHECK(ri.copies_of[0].size() == 2);  // ceil(10*2/10) = 2
    for (int rj : ri.copies_of[0]) {
      CHECK(ri.from_small[rj] == 1);
      CHECK(ri.instance.proc(0, rj) == ri.small_size_units);
    }
  }

  SUBCASE("rounding invariants over random instances") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      Instance inst =
          generate(tiny(InstanceClass::kRandomRestricted, seed, 5, 3));
      SolveResult bound = two_approx(SubinstanceRef::whole(inst));
      for (const Rational& eps : {Rational(1, 1), Rational(1, 2)}) {
        RoundedInstance ri = round_instance(inst, eps, bound.value);
        const i64 a = ri.delta.num, b = ri.delta.den;
        CHECK(ri.instance.feasible());
        CHECK(ri.instance.is_restricted_identical());
        for (int j = 0; j < inst.num_jobs(); ++j) {
          i64 p = inst.job_size(j);
          REQUIRE_FALSE(ri.copies_of[j].empty());
          int first = ri.copies_of[j][0];
          if (!ri.from_small[first]) {
            CHECK(p * b > a * ri.upper_bound);  // big jobs only
            i64 units = ri.instance.proc(
                static_cast<int>(inst.machines_of(j).next(0)), first);
            // p <= p' <= (1+delta)*p, all in exact integers.
            bool rounded_up = static_cast<__int128>(units) * ri.upper_bound >=
                              static_cast<__int128>(p) * ri.unit_den;
            CHECK(rounded_up);
            CHECK(units_leq_scaled(units, ri, p, a + b, b));
          } else {
            CHECK(p * b <= a * ri.upper_bound);
            // Total copy time lands in [p, p + delta*B/n).
            i64 total_units = static_cast<i64>(ri.copies_of[j].size()) *
                              ri.small_size_units;
            CHECK_FALSE(units_leq_scaled(total_units - 1, ri, p - 1, 1,
                                         1));  // total >= p
            __int128 lhs =
                static_cast<__int128>(total_units) * ri.upper_bound * b *
                static_cast<i64>(inst.num_jobs());
            __int128 rhs = (static_cast<__int128>(p) * b *
                                static_cast<i64>(inst.num_jobs()) +
                            static_cast<__int128>(a) * ri.upper_bound) *
                           ri.unit_den;
            CHECK(lhs < rhs);
          }
        }
        // Distinct sizes <= 1/delta^2 - 1/delta + 2.
        SizeCatalog cat = SizeCatalog::build(ri.instance);
        CHECK(static_cast<i64>(cat.count()) * a * a <=
              b * b - a * b + 2 * a * a);
      }
    }
  }

  SUBCASE("input validation") {
    Instance unrelated = parse_instance(R"({"jobs":["a"],
      "machines":["x","y"],"proc":{"x":{"a":2},"y":{"a":3}}})");
    CHECK_THROWS_AS(round_instance(unrelated, Rational(1, 2), 10), InputError);
    Instance fine = parse_instance(R"({"jobs":["a"],"machines":["m"],
      "proc":{"m":{"a":2}},"identical":true})");
    CHECK_THROWS_AS(round_instance(fine, Rational(0, 1), 10), InputError);
  }
}

TEST_CASE("edge DP solves spot instances") {
  SUBCASE("one job, one machine") {
    Instance inst = parse_instance(R"({"jobs":["a"],"machines":["m"],
      "proc":{"m":{"a":5}},"identical":true})");
    SolveResult r = solve_edge_dp(inst, derive_bd(inst));
    REQUIRE(r.feasible);
    CHECK(r.value == 5);
  }

  SUBCASE("machine leaf table value is the size-weighted sum") {
    // Two jobs forced through one machine leaf.
    Instance inst = parse_instance(R"({"jobs":["a","b"],"machines":["m"],
      "proc":{"m":{"a":5,"b":2}},"identical":true})");
    EdgeDpSolver solver(inst, derive_bd(inst));
    SolveResult r = solver.solve();
    CHECK(r.value == 7);
    // Some edge has the machine below; sending both jobs down costs 7.
    bool found = false;
    for (int e = 0; e < solver.num_edges(); ++e) {
      const auto& info = solver.edge(e);
      if (info.below_machines.count() == 1 && info.below_jobs.none()) {
        Cost v = solver.table_value(e, ClassVec{}, info.above_bound);
        REQUIRE_FALSE(v.is_infinite());
        CHECK(v.value() == 7);
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("edge DP equals the oracle on structured and random instances") {
  for (auto cls :
       {InstanceClass::kNested, InstanceClass::kPathHierarchical,
        InstanceClass::kTreeHierarchical, InstanceClass::kRandomRestricted}) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      Instance inst =
          generate(tiny(cls, seed, 3 + static_cast<int>(seed % 5), 3));
      SolveResult ref = brute_force(SubinstanceRef::whole(inst));
      CAPTURE(instance_class_name(cls));
      CAPTURE(seed);
      SolveResult r = solve_edge_dp(inst, derive_bd(inst));
      REQUIRE(r.feasible == ref.feasible);
      CHECK(r.value == ref.value);
      CHECK(makespan(inst, r.schedule) == r.value);
    }
  }
}

TEST_CASE("translations are additive and consistent with the bounds") {
  Instance inst = generate(tiny(InstanceClass::kNested, 4, 6, 4));
  EdgeDpSolver solver(inst, derive_bd(inst));
  solver.solve();
  // Lifting both children's full bounds reproduces the edge's own bound:
  // every below job lands in exactly one child and one (type,size) slot.
  for (int e = 0; e < solver.num_edges(); ++e) {
    const auto& info = solver.edge(e);
    i64 below_total = 0;
    for (int c : info.below_bound) below_total += c;
    CHECK(below_total == static_cast<i64>(info.below_jobs.count()));
    i64 above_total = 0;
    for (int c : info.above_bound) above_total += c;
    CHECK(above_total ==
          static_cast<i64>(inst.num_jobs() - info.below_jobs.count()));
  }
}

TEST_CASE("round_small_jobs_back") {
  SUBCASE("integral copies map back to their machine") {
    Instance inst = parse_instance(R"({"jobs":["a","b"],
      "machines":["x","y"],"proc":{"x":{"a":2,"b":9},"y":{"a":2,"b":9}},
      "identical":true})");
    SolveResult bound = two_approx(SubinstanceRef::whole(inst));
    RoundedInstance ri = round_instance(inst, Rational(1, 1), bound.value);
    SolveResult inner = solve_edge_dp(ri.instance, derive_bd(ri.instance));
    REQUIRE(inner.feasible);
    // Put every copy of each small job on one machine by construction:
    // the exact solver may already do so; regardless the rounded-back
    // schedule must be feasible with bounded loads.
    Schedule back = round_small_jobs_back(inst, ri, inner.schedule);
    CHECK(makespan(inst, back) >= 0);
    for (int j = 0; j < inst.num_jobs(); ++j)
      CHECK(back.machine_of[j] != Schedule::kUnassigned);
  }

  SUBCASE("the back-rounded makespan obeys C(sigma) <= C(sigma') + delta*B") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      Instance inst = generate(tiny(InstanceClass::kNested, seed, 5, 3));
      SolveResult bound = two_approx(SubinstanceRef::whole(inst));
      for (const Rational& eps : {Rational(1, 1), Rational(1, 2)}) {
        RoundedInstance ri = round_instance(inst, eps, bound.value);
        SolveResult inner = solve_edge_dp(ri.instance, derive_bd(ri.instance));
        REQUIRE(inner.feasible);
        Schedule back = round_small_jobs_back(inst, ri, inner.schedule);
        i64 value = makespan(inst, back);
        // value * unit_den <= (C'_units + delta_b_units) * B, exactly.
        __int128 lhs = static_cast<__int128>(value) * ri.unit_den;
        __int128 rhs =
            static_cast<__int128>(inner.value + ri.delta_b_units) *
            ri.upper_bound;
        CHECK(lhs <= rhs);
      }
    }
  }
}

TEST_CASE("rounded instance optimum stays within (1+3*delta) of the original") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Instance inst = generate(tiny(InstanceClass::kTreeHierarchical, seed, 4, 3));
    SolveResult ref = brute_force(SubinstanceRef::whole(inst));
    SolveResult bound = two_approx(SubinstanceRef::whole(inst));
    for (const Rational& eps : {Rational(1, 1), Rational(1, 2)}) {
      RoundedInstance ri = round_instance(inst, eps, bound.value);
      SolveResult rounded_opt =
          solve_load_dp(SubinstanceRef::whole(ri.instance));
      REQUIRE(rounded_opt.feasible);
      // OPT(I')*unit <= (1+3*delta)*OPT(I): units*B*b <= OPT*(b+3a)*unit_den.
      const i64 a = ri.delta.num, b = ri.delta.den;
      __int128 lhs =
          static_cast<__int128>(rounded_opt.value) * ri.upper_bound * b;
      __int128 rhs =
          static_cast<__int128>(ref.value) * (b + 3 * a) * ri.unit_den;
      CHECK(lhs <= rhs);
    }
  }
}

TEST_CASE("ptas ratio sweep over hierarchical and nested instances") {
  for (auto cls : {InstanceClass::kPathHierarchical,
                   InstanceClass::kTreeHierarchical, InstanceClass::kNested}) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      Instance inst = generate(tiny(cls, seed, 4, 3));
      SolveResult ref = brute_force(SubinstanceRef::whole(inst));
      for (const Rational& eps :
           {Rational(1, 1), Rational(1, 2), Rational(1, 5)}) {
        CAPTURE(instance_class_name(cls));
        CAPTURE(seed);
        CAPTURE(eps.num);
        CAPTURE(eps.den);
        SolveResult r = ptas(inst, eps);
        REQUIRE(r.feasible);
        CHECK(r.value >= ref.value);
        CHECK(static_cast<__int128>(r.value) * eps.den <=
              static_cast<__int128>(ref.value) * (eps.den + eps.num));
        CHECK(makespan(inst, r.schedule) == r.value);
      }
    }
  }
}

TEST_CASE("ptas with an explicit branch decomposition") {
  Instance inst = generate(tiny(InstanceClass::kRandomRestricted, 2, 4, 2));
  SolveResult ref = brute_force(SubinstanceRef::whole(inst));
  BranchDecomposition bd = caterpillar_branch_decomposition(
      inst.num_jobs() + inst.num_machines());
  SolveResult r = ptas(inst, Rational(1, 2), &bd);
  REQUIRE(r.feasible);
  CHECK(r.value >= ref.value);
  CHECK(2 * r.value <= 3 * ref.value);
}

TEST_CASE("ptas rejects non-identical instances and bad epsilon") {
  Instance unrelated = parse_instance(R"({"jobs":["a"],
    "machines":["x","y"],"proc":{"x":{"a":2},"y":{"a":3}}})");
  CHECK_THROWS_AS(ptas(unrelated, Rational(1, 2)), InputError);
  Instance fine = parse_instance(R"({"jobs":["a"],"machines":["m"],
    "proc":{"m":{"a":2}},"identical":true})");
  CHECK_THROWS_AS(ptas(fine, Rational(0, 1)), InputError);
}

TEST_CASE("class representatives agree (well-definedness audit)") {
  int cuts_checked = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Instance inst = generate(tiny(InstanceClass::kNested, seed, 4, 2, 2));
    EdgeDpSolver solver(inst, derive_bd(inst));
    solver.solve();
    Rng rng(seed * 31);
    for (int e = 0; e < solver.num_edges(); ++e) {
      const auto& info = solver.edge(e);
      // Sample a few class pairs per edge, including the boundary ones.
      for (int trial = 0; trial < 2; ++trial) {
        ClassVec up(info.below_bound.size());
        ClassVec down(info.above_bound.size());
        for (std::size_t k = 0; k < up.size(); ++k)
          up[k] = static_cast<int>(rng.uniform(0, info.below_bound[k]));
        for (std::size_t k = 0; k < down.size(); ++k)
          down[k] = static_cast<int>(rng.uniform(0, info.above_bound[k]));
        ClassAuditResult audit = class_representative_audit(
            solver, e, up, down,
            [](const SubinstanceRef& sub) { return brute_force(sub); });
        CAPTURE(audit.detail);
        CHECK(audit.ok);
        ++cuts_checked;
      }
    }
  }
  CHECK(cuts_checked >= 50);
}
