// Command-line driver: instance generation, single runs, grid sweeps,
// and brute-force oracle reports for the variational bin packing solver.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdpack/decompose.hpp"
#include "cdpack/instance.hpp"
#include "cdpack/pipeline.hpp"
#include "cdpack/report.hpp"

namespace fs = std::filesystem;
using namespace cdpack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitLoad = 2;
constexpr int kExitConfig = 3;
constexpr int kExitCover = 4;

struct RunFlags {
  std::string instance_path;
  std::string ansatz = "cdmixer";
  int layers = 1;
  double stepsize = 1.0;
  int iterations = 100;
  int trials = 5;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  double threshold = -1.0;
  long long shots = 0;
  bool cd_weighted = false;
  int threads = 1;
  std::vector<int> snapshots;
  double snapshot_k = -1.0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool lists_elsewhere) {
  cmd->add_option("--instance", f.instance_path, "Instance file (JSON or CSV)")->required();
  if (!lists_elsewhere) {
    cmd->add_option("--ansatz", f.ansatz, "Ansatz: qaoa|dcqaoa|cd|cdmixer");
    cmd->add_option("--layers", f.layers, "Circuit layers p");
    cmd->add_option("--stepsize", f.stepsize, "k-schedule stepsize");
    cmd->add_option("--iterations", f.iterations, "Optimizer iterations");
  }
  cmd->add_option("--trials", f.trials, "Independent restarts per sub-Hamiltonian");
  cmd->add_option("--lr", f.learning_rate, "Adam learning rate");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--threshold", f.threshold,
                  "Selection probability threshold (default: 2^-n)");
  cmd->add_option("--shots", f.shots, "Shots per readout; 0 = exact distributions");
  cmd->add_flag("--cd-weighted", f.cd_weighted,
                "Weight the driving pool by the commutator coefficients");
  cmd->add_option("--threads", f.threads, "Worker threads for the k sweep");
}

RunConfig to_config(const RunFlags& f) {
  RunConfig cfg;
  cfg.kind = ansatz_from_name(f.ansatz);
  cfg.layers = f.layers;
  cfg.stepsize = f.stepsize;
  cfg.opt.iterations = f.iterations;
  cfg.opt.trials = f.trials;
  cfg.opt.learning_rate = f.learning_rate;
  cfg.opt.seed = f.seed;
  cfg.opt.snapshot_iterations = f.snapshots;
  cfg.threshold = f.threshold;
  cfg.shots = f.shots;
  cfg.cd_weighted = f.cd_weighted;
  cfg.snapshot_k = f.snapshot_k;
  cfg.threads = f.threads;
  return cfg;
}

void print_metrics(const RunReport& report) {
  std::printf("fr=%g fps=%lld ips=%lld", report.metrics.fr, report.metrics.fps,
              report.metrics.ips);
  if (report.metrics.cover_ok)
    std::printf(" m_opt=%d fs_unordered=%lld fs_ordered=%lld\n", report.metrics.m_opt,
                report.metrics.fs_unordered, report.metrics.fs_ordered);
  else
    std::printf(" cover=infeasible\n");
}

int cmd_generate(int n, long long lo, long long hi, long long capacity, std::uint64_t seed,
                 const std::string& out) {
  const BppInstance inst = generate_instance(n, lo, hi, capacity, seed);
  save_instance(inst, out);
  std::printf("wrote %s (n=%d, capacity=%lld)\n", out.c_str(), inst.num_items(),
              inst.capacity());
  return kExitOk;
}

int cmd_run(const RunFlags& flags, const std::string& out, bool with_oracle,
            const std::string& dump_circuit_path, const std::string& dump_decomp_path,
            const std::string& history_csv_path) {
  const BppInstance inst = load_instance(flags.instance_path);
  const RunConfig cfg = to_config(flags);

  RunReport report = run_experiment(inst, cfg);
  if (with_oracle) {
    report.with_oracle = true;
    report.oracle_pack = brute_force_pack(inst);
  }
  write_text_file(out, report_to_json(report).dump(2) + "\n");
  std::fprintf(stderr, "run took %.1f ms\n", report.wall_ms);

  if (!dump_circuit_path.empty() || !dump_decomp_path.empty()) {
    // Dump the program for the first schedule point; later points differ
    // only in coefficient values, not structure.
    const double dw = delta_omega(inst);
    const auto ks = k_schedule(static_cast<double>(inst.capacity()), dw, cfg.stepsize);
    EncodingParams params(inst, ks.front(), dw, 1.0);
    const CostHamiltonian cost_h = build_cost_hamiltonian(inst, params);
    const PauliSum h_mixer = build_mixer(inst.num_items());
    const PauliSum h_cd = cfg.cd_weighted
                              ? build_weighted_cd_pool(h_mixer, cost_h.hamiltonian)
                              : build_cd_pool(inst.num_items());
    const Circuit circuit =
        build_circuit(cfg.kind, cost_h.hamiltonian, h_mixer, h_cd, cfg.layers);
    if (!dump_circuit_path.empty()) write_text_file(dump_circuit_path, dump_circuit(circuit));
    if (!dump_decomp_path.empty())
      write_text_file(dump_decomp_path, dump_decomposition(decompose(circuit)));
  }

  if (!history_csv_path.empty()) {
    // Re-derive the optimizer trace for the snapshot schedule point.
    std::string csv = "k,trial,iteration,cost\n";
    char buf[96];
    for (const auto& rec : report.k_records)
      for (std::size_t t = 0; t < rec.histories.size(); ++t)
        for (std::size_t it = 0; it < rec.histories[t].size(); ++it) {
          std::snprintf(buf, sizeof buf, "%.17g,%zu,%zu,%.17g\n", rec.k, t, it,
                        rec.histories[t][it]);
          csv += buf;
        }
    write_text_file(history_csv_path, csv);
  }

  print_metrics(report);
  if (!report.metrics.cover_ok) return kExitCover;
  return kExitOk;
}

int cmd_sweep(const RunFlags& flags, const std::vector<std::string>& kinds,
              const std::vector<int>& layer_list, const std::vector<double>& step_list,
              const std::vector<int>& iter_list, const std::string& out_dir) {
  const BppInstance inst = load_instance(flags.instance_path);
  fs::create_directories(out_dir);

  std::vector<SweepCell> cells;
  for (const std::string& kind_name : kinds)
    for (int layers : layer_list)
      for (double stepsize : step_list)
        for (int iterations : iter_list) {
          SweepCell cell;
          cell.ansatz = kind_name;
          cell.layers = layers;
          cell.stepsize = stepsize;
          cell.iterations = iterations;

          RunFlags local = flags;
          local.ansatz = kind_name;
          local.layers = layers;
          local.stepsize = stepsize;
          local.iterations = iterations;
          char name[128];
          std::snprintf(name, sizeof name, "cell_%s_p%d_s%g_i%d.json", kind_name.c_str(),
                        layers, stepsize, iterations);
          try {
            cell.report = run_experiment(inst, to_config(local));
            cell.ok = true;
            write_text_file((fs::path(out_dir) / name).string(),
                            report_to_json(cell.report).dump(2) + "\n");
          } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
            std::fprintf(stderr, "cell %s failed: %s\n", name, e.what());
          }
          cells.push_back(std::move(cell));
        }

  write_text_file((fs::path(out_dir) / "aggregate.csv").string(), sweep_csv(cells));
  std::printf("wrote %zu cells to %s\n", cells.size(), out_dir.c_str());
  return kExitOk;
}

int cmd_oracle(const std::string& instance_path, const std::string& out) {
  const BppInstance inst = load_instance(instance_path);
  const json doc = oracle_report_json(inst);
  write_text_file(out, doc.dump(2) + "\n");
  std::printf("fps=%lld m_opt=%d fs_unordered=%lld fs_ordered=%lld\n",
              doc.at("fps").get<long long>(), doc.at("m_opt").get<int>(),
              doc.at("fs_unordered").get<long long>(), doc.at("fs_ordered").get<long long>());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweep-based variational Ising solver for one-dimensional bin packing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "Flat key=value config file; keys are dotted flag names (run.iterations=100)");

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a random instance file");
  int gen_n = 10;
  long long gen_lo = 21, gen_hi = 49, gen_capacity = 120;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "instance.json";
  generate->add_option("--n", gen_n, "Number of items");
  generate->add_option("--weight-lo", gen_lo, "Smallest item weight");
  generate->add_option("--weight-hi", gen_hi, "Largest item weight");
  generate->add_option("--capacity", gen_capacity, "Bin capacity");
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", gen_out, "Output instance path");

  // run
  auto* run = app.add_subcommand("run", "Run one experiment and write a JSON report");
  RunFlags run_flags;
  std::string run_out = "report.json";
  bool with_oracle = false;
  std::string dump_circuit_path, dump_decomp_path, history_csv_path;
  add_run_flags(run, run_flags, false);
  run->add_option("--snapshots", run_flags.snapshots,
                  "Record distributions after these iterations (e.g. 5,50,100)")
      ->delimiter(',');
  run->add_option("--snapshot-k", run_flags.snapshot_k,
                  "Schedule point for snapshots (default: mid-capacity)");
  run->add_option("--out", run_out, "Report path");
  run->add_flag("--with-oracle", with_oracle, "Embed brute-force results in the report");
  run->add_option("--dump-circuit", dump_circuit_path, "Write the rotation program");
  run->add_option("--dump-decomposition", dump_decomp_path, "Write the basic-gate program");
  run->add_option("--history-csv", history_csv_path, "Write cost histories as CSV");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Grid of runs with an aggregate CSV");
  RunFlags sweep_flags;
  std::vector<std::string> sweep_kinds{"qaoa", "dcqaoa", "cd", "cdmixer"};
  std::vector<int> sweep_layers{1};
  std::vector<double> sweep_steps{1.0};
  std::vector<int> sweep_iters{100};
  std::string sweep_out = "sweep";
  add_run_flags(sweep, sweep_flags, true);
  sweep->add_option("--ansatz", sweep_kinds, "Ansatz kinds to sweep")->delimiter(',');
  sweep->add_option("--layers", sweep_layers, "Layer counts to sweep")->delimiter(',');
  sweep->add_option("--stepsize", sweep_steps, "k stepsizes to sweep")->delimiter(',');
  sweep->add_option("--iterations", sweep_iters, "Iteration budgets to sweep")->delimiter(',');
  sweep->add_option("--out", sweep_out, "Output directory");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth for an instance");
  std::string oracle_instance, oracle_out = "oracle.json";
  oracle->add_option("--instance", oracle_instance, "Instance file")->required();
  oracle->add_option("--out", oracle_out, "Oracle report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (generate->parsed())
      return cmd_generate(gen_n, gen_lo, gen_hi, gen_capacity, gen_seed, gen_out);
    if (run->parsed())
      return cmd_run(run_flags, run_out, with_oracle, dump_circuit_path, dump_decomp_path,
                     history_csv_path);
    if (sweep->parsed())
      return cmd_sweep(sweep_flags, sweep_kinds, sweep_layers, sweep_steps, sweep_iters,
                       sweep_out);
    if (oracle->parsed()) return cmd_oracle(oracle_instance, oracle_out);
  } catch (const InstanceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitLoad;
  } catch (const CoverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCover;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
