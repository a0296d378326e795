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

// Command line front end. Exit codes: 0 success, 1 infeasible instance,
// 2 resource budget exceeded, 3 input error.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rsched/approx.hpp"
#include "rsched/branch_decomp.hpp"
#include "rsched/dp_basic.hpp"
#include "rsched/dp_treewidth.hpp"
#include "rsched/graphs.hpp"
#include "rsched/harness.hpp"
#include "rsched/ptas_rankwidth.hpp"
#include "rsched/tree_decomp.hpp"

namespace {

using namespace rsched;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitResource = 2;
constexpr int kExitInput = 3;

struct SolveOptions {
  std::string instance_path;
  std::string algo = "brute";
  std::string eps = "0.5";
  std::string decomp_path;
  std::string graph = "incidence";  // for fptas-tw
};

SimpleFormDecomposition decomposition_for(const Instance& inst, GraphKind kind,
                                          const std::string& decomp_path) {
  RestrictionGraph g = build_graph(inst, kind);
  if (!decomp_path.empty()) {
    std::optional<int> root;
    TreeDecomposition td = load_tree_decomposition(decomp_path, g, &root);
    auto check = validate_tree_decomposition(g, td);
    if (!check.ok())
      throw InputError("supplied decomposition is invalid: " +
                       check.describe());
    return normalize_simple_form(td, root.value_or(-1));
  }
  return normalize_simple_form(
      heuristic_tree_decomposition(g, EliminationHeuristic::kMinFill));
}

void print_result(const Instance& inst, const SolveResult& result) {
  if (!result.feasible) {
    std::cout << "status: infeasible\n";
    return;
  }
  std::cout << "status: ok\nvalue: " << result.value << "\n";
  for (int j = 0; j < inst.num_jobs(); ++j) {
    int i = result.schedule.machine_of[j];
    if (i != Schedule::kUnassigned)
      std::cout << "assign: " << inst.job_ids()[j] << " -> "
                << inst.machine_ids()[i] << "\n";
  }
}

int run_solve(const SolveOptions& opt) {
  Instance inst = load_instance(opt.instance_path);
  SubinstanceRef whole = SubinstanceRef::whole(inst);
  Rational eps = Rational::parse(opt.eps);

  SolveResult result;
  if (opt.algo == "brute") {
    result = brute_force(whole);
  } else if (opt.algo == "machine-dp") {
    result = solve_machine_dp(whole);
  } else if (opt.algo == "load-dp") {
    result = solve_load_dp(whole);
  } else if (opt.algo == "two-approx") {
    result = two_approx(whole);
  } else if (opt.algo == "tw-primal") {
    result = solve_primal(
        inst, decomposition_for(inst, GraphKind::kPrimal, opt.decomp_path));
  } else if (opt.algo == "tw-dual") {
    result = solve_dual(
        inst, decomposition_for(inst, GraphKind::kDual, opt.decomp_path));
  } else if (opt.algo == "tw-incidence") {
    result = solve_incidence(
        inst, decomposition_for(inst, GraphKind::kIncidence, opt.decomp_path));
  } else if (opt.algo == "fptas-m") {
    result = fptas_fixed_m(whole, eps);
  } else if (opt.algo == "fptas-tw") {
    GraphKind kind = graph_kind_from_name(opt.graph);
    result = fptas_treewidth(
        inst, decomposition_for(inst, kind, opt.decomp_path), kind, eps);
  } else if (opt.algo == "ptas-rw") {
    if (!opt.decomp_path.empty()) {
      RestrictionGraph inc = build_graph(inst, GraphKind::kIncidence);
      BranchDecomposition bd = load_branch_decomposition(opt.decomp_path, inc);
      auto check = validate_branch_decomposition(inc, bd);
      if (!check.ok)
        throw InputError("supplied branch decomposition is invalid: " +
                         check.problem);
      result = ptas(inst, eps, &bd);
    } else {
      result = ptas(inst, eps);
    }
  } else {
    throw InputError("unknown algorithm: " + opt.algo);
  }

  print_result(inst, result);
  return result.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"makespan scheduling with assignment restrictions"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("instance", solve_opt.instance_path)->required();
  solve->add_option("--algo", solve_opt.algo,
                    "brute|machine-dp|load-dp|two-approx|tw-primal|tw-dual|"
                    "tw-incidence|fptas-m|fptas-tw|ptas-rw");
  solve->add_option("--eps", solve_opt.eps, "epsilon for the schemes");
  solve->add_option("--decomp", solve_opt.decomp_path,
                    "decomposition JSON (tree or branch, per algorithm)");
  solve->add_option("--graph", solve_opt.graph,
                    "dual|incidence (fptas-tw only)");

  GeneratorSpec gen_spec;
  std::string gen_class = "random_restricted", gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--class", gen_class,
                  "random_unrelated|random_restricted|path_hierarchical|"
                  "tree_hierarchical|nested|graph_balancing|"
                  "graph_balancing_simple");
  gen->add_option("--n", gen_spec.num_jobs);
  gen->add_option("--m", gen_spec.num_machines);
  gen->add_option("--seed", gen_spec.seed);
  gen->add_option("--pmin", gen_spec.p_min);
  gen->add_option("--pmax", gen_spec.p_max);
  gen->add_option("--density", gen_spec.density_percent);
  gen->add_option("--distinct-sizes", gen_spec.max_distinct_sizes);
  gen->add_option("-o,--out", gen_out, "output file (default: stdout)");

  std::string graph_instance, graph_kind = "incidence", graph_dot;
  bool graph_stats_flag = false;
  CLI::App* graph = app.add_subcommand("graph", "export or inspect a graph");
  graph->add_option("instance", graph_instance)->required();
  graph->add_option("--kind", graph_kind, "primal|dual|incidence");
  graph->add_option("--dot", graph_dot, "write DOT to this file");
  graph->add_flag("--stats", graph_stats_flag);

  std::string dec_instance, dec_kind = "incidence", dec_out, dec_validate;
  std::string dec_heuristic = "min_fill";
  bool dec_branch = false;
  CLI::App* decomp =
      app.add_subcommand("decomp", "build or validate decompositions");
  decomp->add_option("instance", dec_instance)->required();
  decomp->add_option("--kind", dec_kind, "primal|dual|incidence");
  decomp->add_option("--heuristic", dec_heuristic, "min_fill|min_degree|exact");
  decomp->add_option("--validate", dec_validate,
                     "validate this decomposition file instead of building");
  decomp->add_flag("--branch", dec_branch,
                   "branch decomposition (bi-cograph derived)");
  decomp->add_option("-o,--out", dec_out, "output file (default: stdout)");

  std::string val_instance, val_class;
  CLI::App* validate =
      app.add_subcommand("validate", "check feasibility and class invariants");
  validate->add_option("instance", val_instance)->required();
  validate->add_option("--class", val_class, "instance class to verify");

  int bench_seeds = 25;
  std::string bench_classes =
      "random_unrelated,random_restricted,path_hierarchical,"
      "tree_hierarchical,nested,graph_balancing";
  std::string bench_eps = "0.5", bench_dump;
  int bench_n = 5, bench_m = 3, bench_threads = 0;
  CLI::App* bench =
      app.add_subcommand("bench", "cross-validate solvers on a seeded corpus");
  bench->add_option("--seeds", bench_seeds, "seeds 1..N per class");
  bench->add_option("--classes", bench_classes, "comma separated classes");
  bench->add_option("--n", bench_n);
  bench->add_option("--m", bench_m);
  bench->add_option("--eps", bench_eps, "epsilon for the schemes");
  bench->add_option("--dump-dir", bench_dump, "directory for replay dumps");
  bench->add_option("--threads", bench_threads);

  std::string diag_instance;
  CLI::App* diag = app.add_subcommand("diag", "structural diagnostics");
  diag->add_option("instance", diag_instance)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_opt);

    if (gen->parsed()) {
      gen_spec.cls = instance_class_from_name(gen_class);
      Instance inst = generate(gen_spec);
      if (gen_out.empty())
        std::cout << instance_to_json(inst) << "\n";
      else
        write_instance(inst, gen_out);
      return kExitOk;
    }

    if (graph->parsed()) {
      Instance inst = load_instance(graph_instance);
      GraphKind kind = graph_kind_from_name(graph_kind);
      if (graph_stats_flag || graph_dot.empty()) {
        GraphStats s = graph_stats(inst, kind);
        std::cout << "kind: " << graph_kind_name(kind)
                  << "\nvertices: " << s.num_vertices
                  << "\nedges: " << s.num_edges
                  << "\nmax_degree: " << s.max_degree
                  << "\ncomponents: " << s.num_components
                  << "\nmax_jobs_per_machine: " << s.max_jobs_per_machine
                  << "\nmax_machines_per_job: " << s.max_machines_per_job
                  << "\n";
      }
      if (!graph_dot.empty()) {
        std::ofstream out(graph_dot);
        if (!out) throw InputError("cannot write " + graph_dot);
        out << to_dot(build_graph(inst, kind));
      }
      return kExitOk;
    }

    if (decomp->parsed()) {
      Instance inst = load_instance(dec_instance);
      GraphKind kind = graph_kind_from_name(dec_kind);
      RestrictionGraph g = build_graph(inst, kind);
      if (!dec_validate.empty()) {
        if (dec_branch) {
          BranchDecomposition bd = load_branch_decomposition(dec_validate, g);
          auto check = validate_branch_decomposition(g, bd);
          if (!check.ok) throw InputError(check.problem);
          std::cout << "ok\nrankwidth: " << check.rankwidth << "\n";
        } else {
          std::optional<int> root;
          TreeDecomposition td = load_tree_decomposition(dec_validate, g, &root);
          auto check = validate_tree_decomposition(g, td);
          if (!check.ok()) throw InputError(check.describe());
          std::cout << "ok\nwidth: " << td.width() << "\n";
        }
        return kExitOk;
      }
      std::string text;
      if (dec_branch) {
        if (kind != GraphKind::kIncidence)
          throw InputError("branch decompositions are built for the incidence "
                           "graph");
        Bitset jobs(g.num_vertices());
        for (int j = 0; j < inst.num_jobs(); ++j) jobs.set(j);
        BicographResult rec = bicograph_recognize(g, jobs);
        BranchDecomposition bd =
            rec.is_bicograph
                ? bicotree_to_branch_decomposition(rec.tree, g.num_vertices())
                : caterpillar_branch_decomposition(g.num_vertices());
        auto check = validate_branch_decomposition(g, bd);
        std::cerr << (rec.is_bicograph ? "bi-cograph decomposition"
                                       : "caterpillar fallback")
                  << ", rankwidth " << check.rankwidth << "\n";
        text = branch_decomposition_to_json(bd, g);
      } else {
        TreeDecomposition td;
        if (dec_heuristic == "exact")
          td = exact_treewidth(g).second;
        else
          td = heuristic_tree_decomposition(
              g, dec_heuristic == "min_degree"
                     ? EliminationHeuristic::kMinDegree
                     : EliminationHeuristic::kMinFill);
        std::cerr << "width " << td.width() << "\n";
        text = tree_decomposition_to_json(td, g, std::nullopt);
      }
      if (dec_out.empty())
        std::cout << text << "\n";
      else {
        std::ofstream out(dec_out);
        if (!out) throw InputError("cannot write " + dec_out);
        out << text << "\n";
      }
      return kExitOk;
    }

    if (validate->parsed()) {
      Instance inst = load_instance(val_instance);
      std::cout << "feasible: " << (inst.feasible() ? "yes" : "no") << "\n";
      if (!val_class.empty()) {
        ClassCheck check =
            verify_class(inst, instance_class_from_name(val_class));
        std::cout << "class " << val_class << ": "
                  << (check.ok ? "ok" : "violated: " + check.detail) << "\n";
        if (!check.ok) return kExitInput;
      }
      return inst.feasible() ? kExitOk : kExitInfeasible;
    }

    if (bench->parsed()) {
      CorpusSpec corpus;
      corpus.threads = bench_threads;
      corpus.dump_dir = bench_dump;
      corpus.fptas_eps = {Rational::parse(bench_eps)};
      corpus.ptas_eps = {Rational::parse(bench_eps)};
      std::string rest = bench_classes;
      while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string name = rest.substr(0, comma);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        for (int seed = 1; seed <= bench_seeds; ++seed) {
          GeneratorSpec spec;
          spec.cls = instance_class_from_name(name);
          spec.num_jobs = bench_n;
          spec.num_machines = bench_m;
          spec.seed = static_cast<std::uint64_t>(seed);
          corpus.instances.push_back(spec);
        }
      }
      BenchReport report = cross_validate(corpus);
      std::cout << bench_report_to_json_lines(report);
      std::cerr << report.rows.size() << " rows, " << report.failures
                << " failing instances\n";
      return report.failures == 0 ? kExitOk : kExitInput;
    }

    if (diag->parsed()) {
      Instance inst = load_instance(diag_instance);
      std::cout << diagnostics_to_json(diagnostics(inst)) << "\n";
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  }
  return kExitInput;
}
