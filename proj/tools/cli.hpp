#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "medcons/medcons.hpp"

namespace medcons::cli {

namespace fs = std::filesystem;

/// Failure tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error(stage + ": " + what) {}
};

inline std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

/// A directory holds one single-column partition per regular file (taken in
/// file-name order); a file is an ensemble with one column per partition.
inline std::vector<Partition> load_parts(const std::string& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no partition files in '" + path + "'");
    std::vector<Partition> parts;
    for (const auto& f : files) {
      auto in = open_input(f.string());
      try {
        parts.push_back(parts.empty() ? load_partition(in)
                                      : load_partition(in, parts.front().size()));
      } catch (const Error& e) {
        throw Error(f.string() + ": " + e.what());
      }
    }
    return parts;
  }
  auto in = open_input(path);
  return load_ensemble(in);
}

inline std::size_t resolve_workers(std::size_t workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

struct ConsensusOptions {
  std::string graph, parts, out;
  std::optional<double> lambda;
  bool auto_lambda = false;
  std::string group = "largest";
  std::size_t workers = 1;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  std::string engine = "median";
};

inline std::string join(const std::vector<std::size_t>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

inline int run_consensus(const ConsensusOptions& opt, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  auto parts = stage("load-parts", [&] { return load_parts(opt.parts); });
  const std::size_t n = parts.front().size();
  Graph graph = stage("load-graph", [&] {
    auto in = open_input(opt.graph);
    return load_edge_list(in, n);
  });
  const std::size_t workers = resolve_workers(opt.workers);

  EnsembleGrouping grouping;
  std::optional<double> lambda_used;
  stage("group", [&] {
    if (opt.lambda || opt.auto_lambda) {
      auto pdg = build_distance_graph(parts, normalized_split_join, workers);
      double lambda = 0.0;
      if (opt.lambda) {
        lambda = *opt.lambda;
      } else {
        auto grid = default_lambda_grid();
        lambda = select_lambda(lambda_sweep(pdg, grid));
      }
      grouping = threshold_components(pdg, lambda);
      lambda_used = lambda;
    } else {
      std::vector<std::size_t> all(parts.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      grouping.groups = {all};
    }
  });

  std::vector<std::size_t> selected;
  if (opt.group == "all") {
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) selected.push_back(g);
  } else {
    selected.push_back(grouping.largest_group);
  }

  std::vector<std::size_t> group_sizes;
  for (const auto& g : grouping.groups) group_sizes.push_back(g.size());

  for (std::size_t g : selected) {
    std::vector<Partition> members;
    for (std::size_t i : grouping.groups[g]) members.push_back(parts[i]);

    Partition consensus;
    std::size_t iterations = 0;
    bool converged = true;
    stage("consensus", [&] {
      if (opt.engine == "median") {
        ConsensusConfig config{opt.max_iters, workers};
        const std::int64_t base = singleton_total_mirkin(members);
        auto result = run(graph, members, config, [&](const IterationInfo& info, const ConsensusState&) {
          err << "iter\t" << g << '\t' << info.iteration << '\t' << info.applied << '\t'
              << base + info.objective << '\n';
        });
        consensus = std::move(result.partition);
        iterations = result.iterations.size();
        converged = result.converged;
      } else if (opt.engine == "boem") {
        auto result = boem_run(members);
        consensus = std::move(result.partition);
        iterations = result.move_deltas.size();
        converged = result.converged;
      } else {
        consensus = exact_consensus(members).partition;
      }
    });

    std::string out_path = opt.out;
    if (selected.size() > 1) out_path += ".group" + std::to_string(g);
    stage("write-output", [&] {
      auto out = open_output(out_path);
      save_partition(consensus, out);
    });

    const std::int64_t final_total = total_mirkin(consensus, members);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto report = [&](const std::string& key, const std::string& value) {
      err << "report\t" << g << '\t' << key << '\t' << value << '\n';
    };
    report("engine", opt.engine);
    report("iterations", std::to_string(iterations));
    report("converged", converged ? "1" : "0");
    report("final_total_mirkin", std::to_string(final_total));
    report("clusters", std::to_string(consensus.num_clusters()));
    report("workers", std::to_string(workers));
    report("lambda_used", lambda_used ? fixed6(*lambda_used) : "none");
    report("group_sizes", join(group_sizes, ","));
    report("group_members", join(grouping.groups[g], ","));
    report("seed", std::to_string(opt.seed));
    report("wall_time", fixed6(wall));
    report("output", out_path);
  }
  return 0;
}

inline int run_group(const std::string& parts_path, std::optional<double> lambda,
                     std::size_t workers, std::ostream& out) {
  auto parts = stage("load-parts", [&] { return load_parts(parts_path); });
  stage("group", [&] {
    auto pdg = build_distance_graph(parts, normalized_split_join, resolve_workers(workers));
    auto grid = default_lambda_grid();
    auto sweep = lambda_sweep(pdg, grid);
    out << "lambda\tn_groups\tlargest_size\n";
    for (const auto& r : sweep) {
      out << fixed6(r.lambda) << '\t' << r.num_groups << '\t' << r.largest_size << '\n';
    }
    const double selected = lambda ? *lambda : select_lambda(sweep);
    auto grouping = threshold_components(pdg, selected);
    out << "selected_lambda\t" << fixed6(selected) << '\n';
    out << "largest_group\t" << grouping.largest_group << '\n';
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
      out << g << ": " << join(grouping.groups[g], " ") << '\n';
    }
  });
  return 0;
}

inline int run_compare(const std::string& a, const std::string& b, std::ostream& out) {
  auto p = stage("load-parts", [&] {
    auto in = open_input(a);
    return load_partition(in);
  });
  auto q = stage("load-parts", [&] {
    auto in = open_input(b);
    return load_partition(in, p.size());
  });
  stage("compare", [&] {
    const std::int64_t m = mirkin(p, q);
    const double rand = p.size() >= 2 ? rand_distance(p, q) : 0.0;
    const double sj = split_join(p, q, true);
    const double vi = variation_of_information(p, q);
    out << "mirkin " << m << '\n'
        << "rand " << fixed6(rand) << '\n'
        << "split_join " << fixed6(sj) << '\n'
        << "vi " << fixed6(vi) << '\n';
  });
  return 0;
}

struct GenOptions {
  std::size_t q = 10, s = 50;
  double p_in = 0.3, p_out = 0.02;
  std::uint64_t seed = 0;
  std::size_t ensemble = 16;
  double epsilon = 0.1;
  std::string out_graph, out_truth, out_parts;
};

inline int run_gen(const GenOptions& opt) {
  auto instance = stage("generate", [&] {
    return generate_planted({opt.q, opt.s, opt.p_in, opt.p_out, opt.seed});
  });
  auto ensemble = stage("generate", [&] {
    return perturbed_ensemble(instance.truth, opt.ensemble, opt.epsilon,
                              derive_seed(opt.seed, 0x656e73));
  });
  stage("write-output", [&] {
    auto g = open_output(opt.out_graph);
    save_edge_list(instance.graph, g);
    if (!opt.out_truth.empty()) {
      auto t = open_output(opt.out_truth);
      save_partition(instance.truth, t);
    }
    if (!opt.out_parts.empty()) {
      auto e = open_output(opt.out_parts);
      save_ensemble(ensemble, e);
    }
  });
  return 0;
}

/// Randomized self-check of the metric implementations against brute force.
inline int run_metrics_selftest(std::size_t trials, std::uint64_t seed, std::ostream& out) {
  Rng rng(seed);
  auto random_partition = [&](std::size_t n) {
    const std::size_t b = 1 + rng.below(n);
    std::vector<ClusterId> labels(n);
    for (auto& l : labels) l = static_cast<ClusterId>(rng.below(b));
    return Partition(labels);
  };
  std::size_t oracle_fail = 0, axiom_fail = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng.below(40);
    auto p = random_partition(n), q = random_partition(n), r = random_partition(n);
    if (mirkin_pairwise(p, q) != mirkin_contingency(p, q)) ++oracle_fail;
    const double eps = 1e-9;
    for (auto d : {+[](const Partition& a, const Partition& b) { return double(mirkin(a, b)); },
                   +[](const Partition& a, const Partition& b) { return split_join(a, b, false); },
                   +[](const Partition& a, const Partition& b) {
                     return variation_of_information(a, b);
                   }}) {
      if (std::abs(d(p, q) - d(q, p)) > eps || d(p, p) != 0.0 ||
          d(p, r) > d(p, q) + d(q, r) + eps) {
        ++axiom_fail;
      }
    }
  }
  out << "mirkin_oracle\t" << (oracle_fail ? "FAIL" : "pass") << '\t' << trials << '\n';
  out << "metric_axioms\t" << (axiom_fail ? "FAIL" : "pass") << '\t' << trials << '\n';
  return oracle_fail || axiom_fail ? 1 : 0;
}

/// Entry point: 0 on success, 2 on usage errors, 1 on runtime errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Median consensus clustering of graph partition ensembles", "medcons"};
  app.require_subcommand(1);

  ConsensusOptions copt;
  auto* consensus = app.add_subcommand("consensus", "Compute a consensus partition");
  consensus->add_option("--graph", copt.graph, "Edge list file")->required();
  consensus->add_option("--parts", copt.parts, "Ensemble TSV or directory of partition files")
      ->required();
  auto* lambda_opt = consensus->add_option("--lambda", copt.lambda, "Grouping threshold")
                         ->check(CLI::Range(0.0, 1.0));
  consensus->add_flag("--auto-lambda", copt.auto_lambda, "Select lambda from a sweep")
      ->excludes(lambda_opt);
  consensus->add_option("--group", copt.group, "Which groups to solve")
      ->check(CLI::IsMember({"largest", "all"}));
  consensus->add_option("--workers", copt.workers, "Proposal-phase threads (0 = all cores)");
  consensus->add_option("--max-iters", copt.max_iters, "Iteration cap");
  consensus->add_option("--seed", copt.seed, "Random seed");
  consensus->add_option("--engine", copt.engine, "Optimizer")
      ->check(CLI::IsMember({"median", "boem", "exact"}));
  consensus->add_option("--out", copt.out, "Output partition file")->required();

  std::string group_parts;
  std::optional<double> group_lambda;
  std::size_t group_workers = 1;
  auto* group = app.add_subcommand("group", "Group homogeneous partitions");
  group->add_option("--parts", group_parts, "Ensemble TSV or directory")->required();
  group->add_option("--lambda", group_lambda, "Override the selected threshold")
      ->check(CLI::Range(0.0, 1.0));
  group->add_option("--workers", group_workers, "Threads for pairwise distances");

  std::string cmp_a, cmp_b;
  auto* compare = app.add_subcommand("compare", "Compare two partition files");
  compare->add_option("a", cmp_a, "First partition")->required();
  compare->add_option("b", cmp_b, "Second partition")->required();

  GenOptions gopt;
  auto* gen = app.add_subcommand("gen", "Generate a planted-partition instance");
  gen->add_option("--q", gopt.q, "Community count");
  gen->add_option("--s", gopt.s, "Community size");
  gen->add_option("--p-in", gopt.p_in, "Intra-community edge probability");
  gen->add_option("--p-out", gopt.p_out, "Inter-community edge probability");
  gen->add_option("--seed", gopt.seed, "Random seed");
  gen->add_option("--ensemble", gopt.ensemble, "Number of perturbed partitions");
  gen->add_option("--epsilon", gopt.epsilon, "Per-vertex perturbation probability");
  gen->add_option("--out-graph", gopt.out_graph, "Edge list output")->required();
  gen->add_option("--out-truth", gopt.out_truth, "Ground-truth partition output");
  gen->add_option("--out-parts", gopt.out_parts, "Ensemble TSV output");

  std::size_t selftest_trials = 500;
  std::uint64_t selftest_seed = 0;
  auto* selftest = app.add_subcommand("metrics-selftest", "Check metrics against brute force");
  selftest->add_option("--trials", selftest_trials, "Random triples to test");
  selftest->add_option("--seed", selftest_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*consensus) return run_consensus(copt, err);
    if (*group) return run_group(group_parts, group_lambda, group_workers, out);
    if (*compare) return run_compare(cmp_a, cmp_b, out);
    if (*gen) return run_gen(gopt);
    if (*selftest) return run_metrics_selftest(selftest_trials, selftest_seed, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace medcons::cli
