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
#include <map>
#include <set>

#include "doctest.h"
#include "rsched/graphs.hpp"
#include "rsched/harness.hpp"

using namespace rsched;

namespace {

// Independent GF(2) rank oracle: the size of the XOR span of the rows of
// A[X, V\X] equals 2^rank.
int span_rank(const RestrictionGraph& g, const Bitset& x) {
  Bitset y(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!x.test(v)) y.set(v);
  std::set<std::vector<std::uint64_t>> span;
  span.insert(Bitset(g.num_vertices()).words());
  for (std::size_t v = x.next(0); v < x.size(); v = x.next(v + 1)) {
    Bitset row = g.neighbor_bits(static_cast<int>(v)) & y;
    std::set<std::vector<std::uint64_t>> grown = span;
    for (const auto& words : span) {
      Bitset sum = row;
      Bitset other(g.num_vertices());
      // Rebuild the bitset from words to XOR it.
      for (std::size_t w = 0; w < words.size(); ++w)
        for (int b = 0; b < 64; ++b)
          if (words[w] >> b & 1 &&
              w * 64 + b < static_cast<std::size_t>(g.num_vertices()))
            other.set(w * 64 + b);
      sum ^= other;
      grown.insert(sum.words());
    }
    span = std::move(grown);
  }
  int rank = 0;
  while ((std::size_t{1} << rank) < span.size()) ++rank;
  return rank;
}

}  // namespace

TEST_CASE("degenerate shapes: one job or one machine") {
  // 1 job, m machines: edgeless primal, complete dual, star incidence.
  Instance one_job = parse_instance(R"({"jobs":["a"],
    "machines":["m0","m1","m2"],
    "proc":{"m0":{"a":2},"m1":{"a":2},"m2":{"a":2}},"identical":true})");
  RestrictionGraph p = build_graph(one_job, GraphKind::kPrimal);
  RestrictionGraph d = build_graph(one_job, GraphKind::kDual);
  RestrictionGraph i = build_graph(one_job, GraphKind::kIncidence);
  CHECK(p.num_edges() == 0);
  CHECK(d.num_edges() == 3);  // K_3
  CHECK(i.num_edges() == 3);  // star around the job
  CHECK(i.degree(0) == 3);

  // n jobs, 1 machine: complete primal, single dual vertex, star incidence.
  Instance one_machine = parse_instance(R"({"jobs":["a","b","c","d"],
    "machines":["m"],"proc":{"m":{"a":1,"b":1,"c":1,"d":1}},
    "identical":true})");
  RestrictionGraph p2 = build_graph(one_machine, GraphKind::kPrimal);
  RestrictionGraph d2 = build_graph(one_machine, GraphKind::kDual);
  RestrictionGraph i2 = build_graph(one_machine, GraphKind::kIncidence);
  CHECK(p2.num_edges() == 6);  // K_4
  CHECK(d2.num_vertices() == 1);
  CHECK(i2.degree(4) == 4);  // machine vertex sees every job
}

TEST_CASE("primal edges match the pairwise intersection rescan") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorSpec spec;
    spec.cls = InstanceClass::kRandomUnrelated;
    spec.num_jobs = 7;
    spec.num_machines = 4;
    spec.seed = seed;
    Instance inst = generate(spec);
    RestrictionGraph p = build_graph(inst, GraphKind::kPrimal);
    for (int a = 0; a < inst.num_jobs(); ++a)
      for (int b = a + 1; b < inst.num_jobs(); ++b) {
        bool share = inst.machines_of(a).intersects(inst.machines_of(b));
        CHECK(p.has_edge(a, b) == share);
      }

    RestrictionGraph d = build_graph(inst, GraphKind::kDual);
    for (int a = 0; a < inst.num_machines(); ++a)
      for (int b = a + 1; b < inst.num_machines(); ++b)
        CHECK(d.has_edge(a, b) ==
              inst.jobs_of(a).intersects(inst.jobs_of(b)));
  }
}

TEST_CASE("J(i) and M(j) are cliques in the primal and dual graphs") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GeneratorSpec spec;
    spec.cls = InstanceClass::kRandomRestricted;
    spec.num_jobs = 6;
    spec.num_machines = 3;
    spec.seed = seed;
    Instance inst = generate(spec);
    RestrictionGraph p = build_graph(inst, GraphKind::kPrimal);
    RestrictionGraph d = build_graph(inst, GraphKind::kDual);
    for (int i = 0; i < inst.num_machines(); ++i) {
      auto jobs = inst.jobs_of(i).to_vector();
      for (std::size_t a = 0; a < jobs.size(); ++a)
        for (std::size_t b = a + 1; b < jobs.size(); ++b)
          CHECK(p.has_edge(jobs[a], jobs[b]));
    }
    for (int j = 0; j < inst.num_jobs(); ++j) {
      auto machines = inst.machines_of(j).to_vector();
      for (std::size_t a = 0; a < machines.size(); ++a)
        for (std::size_t b = a + 1; b < machines.size(); ++b)
          CHECK(d.has_edge(machines[a], machines[b]));
    }
  }
}

TEST_CASE("cut_rank on hand-checked matrices") {
  // Complete bipartite block: the all-ones matrix has rank 1.
  Instance kab = parse_instance(R"({"jobs":["a","b","c"],
    "machines":["x","y"],"proc":{"x":{"a":1,"b":1,"c":1},
    "y":{"a":1,"b":1,"c":1}},"identical":true})");
  RestrictionGraph inc = build_graph(kab, GraphKind::kIncidence);
  Bitset jobs_side = Bitset::of(5, {0, 1, 2});
  CHECK(cut_rank(inc, jobs_side) == 1);

  // No edges across the cut: {a, x} on one side keeps both edges inside.
  Instance split = parse_instance(R"({"jobs":["a","b"],
    "machines":["x","y"],"proc":{"x":{"a":1},"y":{"b":1}},
    "identical":true})");
  RestrictionGraph inc2 = build_graph(split, GraphKind::kIncidence);
  CHECK(cut_rank(inc2, Bitset::of(4, {0, 2})) == 0);

  // 2x2 identity: job a only on x, job b only on y -> rank 2, eliminated
  // by hand (rows 10 and 01 are independent).
  CHECK(cut_rank(inc2, Bitset::of(4, {0, 1})) == 2);
}

TEST_CASE("cut_rank is symmetric and matches the span oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorSpec spec;
    spec.cls = InstanceClass::kRandomUnrelated;
    spec.num_jobs = 4;
    spec.num_machines = 3;
    spec.seed = seed;
    Instance inst = generate(spec);
    RestrictionGraph g = build_graph(inst, GraphKind::kIncidence);
    Rng rng(seed * 77);
    for (int trial = 0; trial < 10; ++trial) {
      Bitset x(g.num_vertices());
      for (int v = 0; v < g.num_vertices(); ++v)
        if (rng.chance(50)) x.set(v);
      Bitset complement(g.num_vertices());
      for (int v = 0; v < g.num_vertices(); ++v)
        if (!x.test(v)) complement.set(v);
      int r = cut_rank(g, x);
      CHECK(r == cut_rank(g, complement));
      CHECK(r == span_rank(g, x));
    }
  }
}

TEST_CASE("flipping one edge moves cut_rank by at most one") {
  GeneratorSpec spec;
  spec.cls = InstanceClass::kRandomUnrelated;
  spec.num_jobs = 4;
  spec.num_machines = 3;
  spec.seed = 5;
  Instance inst = generate(spec);
  RestrictionGraph g = build_graph(inst, GraphKind::kIncidence);
  Bitset x = Bitset::of(7, {0, 2, 4, 6});
  int base = cut_rank(g, x);
  for (int j = 0; j < inst.num_jobs(); ++j)
    for (int i = 0; i < inst.num_machines(); ++i) {
      RestrictionGraph g2(GraphKind::kIncidence, 7);
      bool flipped_in = false;
      for (int v = 0; v < 7; ++v)
        for (int u : g.neighbors(v))
          if (v < u && !(v == j && u == 4 + i)) g2.add_edge(v, u);
      if (!g.has_edge(j, 4 + i)) {
        g2.add_edge(j, 4 + i);
        flipped_in = true;
      }
      g2.finalize();
      (void)flipped_in;
      int moved = cut_rank(g2, x);
      CHECK(std::abs(moved - base) <= 1);
    }
}

TEST_CASE("connection types group jobs by neighborhood") {
  GeneratorSpec spec;
  spec.cls = InstanceClass::kRandomRestricted;
  spec.num_jobs = 8;
  spec.num_machines = 4;
  spec.seed = 9;
  Instance inst = generate(spec);

  Bitset x = Bitset::of(8, {0, 1, 2, 3, 4, 5, 6, 7});
  SUBCASE("empty machine side gives one type") {
    ConnectionTypePartition part = connection_types(inst, x, Bitset(4));
    CHECK(part.num_types() == 1);
    CHECK(part.groups[0].jobs.size() == 8);
  }
  SUBCASE("everyone seeing all of Y gives one type") {
    Instance full = parse_instance(R"({"jobs":["a","b"],
      "machines":["x","y"],"proc":{"x":{"a":1,"b":2},"y":{"a":1,"b":2}}})");
    ConnectionTypePartition part = connection_types(
        full, Bitset::of(2, {0, 1}), Bitset::of(2, {0, 1}));
    CHECK(part.num_types() == 1);
  }
  SUBCASE("groups match an independent neighborhood-hash pass") {
    Bitset y = Bitset::of(4, {0, 2, 3});
    ConnectionTypePartition part = connection_types(inst, x, y);
    std::map<std::vector<int>, std::vector<int>> expect;
    for (int j = 0; j < 8; ++j)
      expect[(inst.machines_of(j) & y).to_vector()].push_back(j);
    CHECK(part.num_types() == static_cast<int>(expect.size()));
    int covered = 0;
    for (const auto& grp : part.groups) {
      auto it = expect.find(grp.machines.to_vector());
      REQUIRE(it != expect.end());
      CHECK(grp.jobs == it->second);
      covered += static_cast<int>(grp.jobs.size());
    }
    CHECK(covered == 8);
  }
  SUBCASE("the incidence-graph overload agrees with the instance one") {
    RestrictionGraph inc = build_graph(inst, GraphKind::kIncidence);
    Bitset xv(inc.num_vertices()), yv(inc.num_vertices());
    for (int j : {0, 2, 3, 6}) xv.set(incidence_job_vertex(j));
    for (int i : {1, 3}) yv.set(incidence_machine_vertex(inst, i));
    ConnectionTypePartition via_graph = connection_types(inc, inst, xv, yv);
    ConnectionTypePartition via_inst = connection_types(
        inst, Bitset::of(8, {0, 2, 3, 6}), Bitset::of(4, {1, 3}));
    REQUIRE(via_graph.num_types() == via_inst.num_types());
    for (int t = 0; t < via_graph.num_types(); ++t) {
      CHECK(via_graph.groups[t].jobs == via_inst.groups[t].jobs);
      CHECK(via_graph.groups[t].machines == via_inst.groups[t].machines);
    }
  }
}

TEST_CASE("graph_stats matches a recount") {
  Instance inst = parse_instance(R"({"jobs":["a","b","c"],
    "machines":["x","y"],"proc":{"x":{"a":1,"b":2},"y":{"b":2,"c":3}}})");
  GraphStats s = graph_stats(inst, GraphKind::kPrimal);
  CHECK(s.num_vertices == 3);
  CHECK(s.num_edges == 2);    // a-b, b-c
  CHECK(s.max_degree == 2);   // b
  CHECK(s.num_components == 1);
  CHECK(s.max_jobs_per_machine == 2);
  CHECK(s.max_machines_per_job == 2);

  GraphStats inc = graph_stats(inst, GraphKind::kIncidence);
  CHECK(inc.num_vertices == 5);
  CHECK(inc.num_edges == 4);
}

TEST_CASE("dot export names vertices") {
  Instance inst = parse_instance(R"({"jobs":["a"],"machines":["x"],
    "proc":{"x":{"a":1}}})");
  std::string dot = to_dot(build_graph(inst, GraphKind::kIncidence));
  CHECK(dot.find("j:a") != std::string::npos);
  CHECK(dot.find("m:x") != std::string::npos);
  CHECK(dot.find("--") != std::string::npos);
}
