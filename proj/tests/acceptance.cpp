// Acceptance suite: every release gate in one binary, one PASS/FAIL line
// per criterion. Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cdpack/decompose.hpp"
#include "cdpack/gradient.hpp"
#include "cdpack/oracle.hpp"
#include "cdpack/pipeline.hpp"
#include "cdpack/report.hpp"
#include "support/dense.hpp"

using namespace cdpack;
namespace fs = std::filesystem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int failures = 0;

void report(int index, const char* name, bool ok, const Timer& timer,
            const std::string& detail = "") {
  std::printf("criterion %d %-34s %s (%.1fs)%s%s\n", index, name, ok ? "PASS" : "FAIL",
              timer.seconds(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

BppInstance random_instance(rng::Stream& stream, int n, long long lo, long long hi,
                            long long capacity) {
  std::vector<long long> weights;
  for (int i = 0; i < n; ++i) weights.push_back(stream.next_int(lo, hi));
  return BppInstance(weights, capacity);
}

// --- criterion 1: encoding exactness -----------------------------------

bool encoding_exactness() {
  rng::Stream stream(101);
  for (int round = 0; round < 50; ++round) {
    const int n = static_cast<int>(stream.next_int(2, 10));
    const BppInstance inst = random_instance(stream, n, 20, 80, 120);
    const double dw = delta_omega(inst);
    for (double k : k_schedule(120.0, dw, 1.0)) {
      const EncodingParams params(inst, k, dw, 1.0);
      const CostHamiltonian ch = build_cost_hamiltonian(inst, params);
      const std::vector<double> diag = diagonal_profile(ch.hamiltonian);
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        const double expected = binary_objective(inst, params, b);
        const double got = diag[b] + ch.constant;
        if (std::abs(got - expected) > 1e-9 * std::max(1.0, std::abs(expected))) return false;
      }
    }
  }
  return true;
}

// --- criterion 2: ground-state targeting --------------------------------

bool ground_state_targeting() {
  rng::Stream stream(202);
  for (int round = 0; round < 50; ++round) {
    const int n = static_cast<int>(stream.next_int(2, 10));
    const BppInstance inst = random_instance(stream, n, 20, 80, 120);
    const double dw = delta_omega(inst);
    for (double k : k_schedule(120.0, dw, 1.0)) {
      const EncodingParams params(inst, k, dw, 1.0);
      const CostHamiltonian ch = build_cost_hamiltonian(inst, params);
      const std::vector<double> diag = diagonal_profile(ch.hamiltonian);

      double best = diag[0];
      for (std::uint64_t b = 1; b < diag.size(); ++b) best = std::min(best, diag[b]);
      std::vector<std::uint64_t> via_hamiltonian;
      const double tol = 1e-9 * std::max(1.0, std::abs(best));
      for (std::uint64_t b = 0; b < diag.size(); ++b)
        if (diag[b] <= best + tol) via_hamiltonian.push_back(b);

      if (via_hamiltonian != exact_ground_states(inst, params)) return false;
    }
  }
  return true;
}

// --- criterion 3: simulator fidelity ------------------------------------

PauliString random_string(rng::Stream& stream, int n) {
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};
  PauliString p(n);
  for (int q = 0; q < n; ++q) p.set_letter(q, letters[stream.next_int(0, 3)]);
  return p;
}

bool simulator_fidelity() {
  rng::Stream stream(303);

  // rotations against dense exponentials, n <= 4
  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(stream.next_int(1, 4));
    const PauliString p = random_string(stream, n);
    const double theta = stream.next_in(-3.0, 3.0);
    StateVector s = init_plus(n);
    for (int g = 0; g < 5; ++g)
      apply_pauli_rotation_in_place(s, random_string(stream, n), stream.next_in(-2.0, 2.0));
    const auto expected = dense::matvec(dense::pauli_rotation_matrix(p, theta),
                                        {s.amps.begin(), s.amps.end()});
    const StateVector got = apply_pauli_rotation(s, p, theta);
    for (std::size_t b = 0; b < got.dim(); ++b)
      if (std::abs(expected[b] - got.amps[b]) > 1e-10) return false;
  }

  // norm drift over 1e4 random gates
  StateVector s = init_plus(6);
  for (int g = 0; g < 10000; ++g)
    apply_pauli_rotation_in_place(s, random_string(stream, 6), stream.next_in(-3.0, 3.0));
  if (std::abs(s.norm() - 1.0) >= 1e-10) return false;

  // Gradients against central finite differences (h = 1e-5, absolute
  // 1e-6): all kinds, n = 6, p in {1, 2}, 20 random parameter vectors
  // each. The instance must be unit-scale: the difference quotient's own
  // truncation error grows cubically with the coefficient scale, and for
  // large coefficients the landscape oscillates on a period comparable to
  // h, so the quotient stops approximating anything. Larger scales are
  // covered by the unit suite with a correspondingly smaller step.
  const BppInstance inst({1, 1, 1, 2, 1, 1}, 3);
  const EncodingParams params(inst, 3, delta_omega(inst), 1.0);
  const CostHamiltonian ch = build_cost_hamiltonian(inst, params);
  const PauliSum mixer = build_mixer(6);
  const PauliSum cd = build_cd_pool(6);
  for (AnsatzKind kind : {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                          AnsatzKind::cd_mixer}) {
    for (int layers = 1; layers <= 2; ++layers) {
      const Circuit c = build_circuit(kind, ch.hamiltonian, mixer, cd, layers);
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> point(static_cast<std::size_t>(c.param_count));
        for (auto& v : point) v = stream.next_in(0.0, kTwoPi);
        const auto analytic = gradient(c, point, ch.hamiltonian);
        for (std::size_t j = 0; j < point.size(); ++j) {
          std::vector<double> up = point, down = point;
          up[j] += 1e-5;
          down[j] -= 1e-5;
          const double numeric =
              (cost(c, up, ch.hamiltonian) - cost(c, down, ch.hamiltonian)) / 2e-5;
          if (std::abs(analytic[j] - numeric) > 1e-6) return false;
        }
      }
    }
  }
  return true;
}

// --- criterion 4: counter-diabatic term structure ------------------------

bool cd_structure() {
  rng::Stream stream(404);
  for (int round = 0; round < 25; ++round) {
    const int n = static_cast<int>(stream.next_int(2, 8));
    const BppInstance inst = random_instance(stream, n, 20, 80, 120);
    const double dw = delta_omega(inst);
    const double k = static_cast<double>(stream.next_int(1, static_cast<long long>(120 / dw)));
    const EncodingParams params(inst, k, dw, 1.0);
    const CostHamiltonian ch = build_cost_hamiltonian(inst, params);
    const PauliSum cd = nc_first_order(build_mixer(n), ch.hamiltonian);
    for (const auto& t : cd.terms()) {
      int ys = 0, zs = 0, xs = 0;
      for (int q = 0; q < n; ++q) {
        const char l = t.string.letter(q);
        ys += l == 'Y';
        zs += l == 'Z';
        xs += l == 'X';
      }
      const bool single_y = ys == 1 && zs == 0 && xs == 0;
      const bool yz_pair = ys == 1 && zs == 1 && xs == 0;
      if (!single_y && !yz_pair) return false;
    }
  }
  return true;
}

// --- criterion 5: gate counts --------------------------------------------

bool gate_count_formulas(std::string& detail) {
  for (int n = 2; n <= 12; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (AnsatzKind kind : {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                            AnsatzKind::cd_mixer}) {
      const GateCounts counts = gate_counts(kind, n);
      const int expected = (kind == AnsatzKind::dc_qaoa ? 4 : 2) * pairs;
      if (counts.cnots != expected || counts.table_cnots != expected) return false;
    }
  }
  const GateCounts qaoa10 = gate_counts(AnsatzKind::qaoa, 10);
  const GateCounts dc10 = gate_counts(AnsatzKind::dc_qaoa, 10);
  if (qaoa10.cnots != 90 || dc10.cnots != 180) return false;

  // Parameterized totals, measured beside the reference formulas: the
  // reference counting convention is unstated, so they are reported, not
  // equated.
  std::ostringstream oss;
  for (AnsatzKind kind : {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                          AnsatzKind::cd_mixer}) {
    const GateCounts counts = gate_counts(kind, 10);
    oss << ansatz_name(kind) << " param " << counts.parameterized << "/"
        << counts.table_parameterized << " total " << counts.total << "/" << counts.table_total
        << "; ";
  }
  detail = oss.str();
  return true;
}

// --- criterion 6: schedule lengths ---------------------------------------

bool schedule_lengths() {
  return k_schedule(120, 1, 4).size() == 30 && k_schedule(120, 1, 0.5).size() == 240;
}

// --- criterion 7: pipeline soundness at desk scale ------------------------

bool pipeline_soundness() {
  rng::Stream stream(707);
  const AnsatzKind kinds[4] = {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                               AnsatzKind::cd_mixer};
  for (int round = 0; round < 20; ++round) {
    const int n = static_cast<int>(stream.next_int(3, 8));
    const BppInstance inst = random_instance(stream, n, 20, 80, 120);

    RunConfig cfg;
    cfg.kind = kinds[round % 4];
    cfg.layers = 1;
    cfg.stepsize = 1.0;
    cfg.threshold = 0.0;  // exhaustive selection
    cfg.opt.iterations = 10;
    cfg.opt.trials = 2;
    cfg.opt.seed = 7000 + static_cast<std::uint64_t>(round);

    const RunReport rep = run_experiment(inst, cfg);
    const auto exact = brute_force_partial(inst);
    if (rep.metrics.fr > 1.0 + 1e-12) return false;
    if (rep.metrics.fps > static_cast<long long>(exact.size())) return false;

    const auto sampled = subset_sampling(inst, cfg);
    for (const auto& p : sampled.best.feasible)
      if (!std::binary_search(exact.begin(), exact.end(), p.bits)) return false;

    if (std::abs(rep.metrics.fr - 1.0) < 1e-12) {
      const OraclePack pack = brute_force_pack(inst);
      if (!rep.metrics.cover_ok) return false;
      if (rep.metrics.m_opt != pack.m_opt) return false;
      if (rep.metrics.fs_unordered != pack.unordered) return false;
      long long fact = 1;
      for (int i = 2; i <= rep.metrics.m_opt; ++i) fact *= i;
      if (rep.metrics.fs_ordered != rep.metrics.fs_unordered * fact) return false;
      if (rep.metrics.fs_ordered != pack.ordered) return false;
    }
  }
  return true;
}

// --- criterion 8: statistical reproduction of the sweep claim -------------

// The per-instance feasibility ratio is taken on the five-trial
// aggregate selection — the restart-noise-mitigated object the "5
// independent trials" setting exists to produce (the report also carries
// the best-trial and per-trial ratios; the detail line prints all
// three). Individual-trial ratios straddle the 2^-n threshold on
// grid-edge blocks, so any single-selection comparison against a method
// pinned at the FR ceiling is a coin flip on one block in a thousand.
bool statistical_reproduction(std::string& detail) {
  int instances_ok = 0;
  std::ostringstream oss;
  for (int idx = 0; idx < 5; ++idx) {
    const BppInstance inst = generate_instance(10, 21, 49, 120, 800 + idx);

    RunConfig cdm;
    cdm.kind = AnsatzKind::cd_mixer;
    cdm.layers = 1;
    cdm.stepsize = 1.0;
    cdm.opt.iterations = 100;
    cdm.opt.learning_rate = 0.05;
    cdm.opt.trials = 5;
    cdm.opt.seed = 880 + static_cast<std::uint64_t>(idx);

    const auto trial_mean_fr = [](const RunReport& r) {
      double sum = 0;
      for (const auto& m : r.per_trial) sum += m.fr;
      return sum / static_cast<double>(r.per_trial.size());
    };
    const auto print = [&](const char* tag, const RunReport& r) {
      oss << tag << "=" << r.trial_aggregate.fr << " (best " << r.metrics.fr << ", trials "
          << trial_mean_fr(r) << ")";
    };

    const RunReport fine = run_experiment(inst, cdm);

    RunConfig cdm4 = cdm;
    cdm4.stepsize = 4.0;
    const RunReport coarse_cdm = run_experiment(inst, cdm4);

    RunConfig qaoa4 = cdm4;
    qaoa4.kind = AnsatzKind::qaoa;
    const RunReport coarse_qaoa = run_experiment(inst, qaoa4);

    const bool fine_ok = fine.trial_aggregate.fr >= 0.9;
    const bool coarse_ok =
        coarse_cdm.trial_aggregate.fr >= coarse_qaoa.trial_aggregate.fr - 1e-12;
    const bool ok = fine_ok && coarse_ok;
    instances_ok += ok;
    oss << "inst" << idx << " ";
    print("fr1", fine);
    oss << " ";
    print("fr4cdm", coarse_cdm);
    oss << " ";
    print("fr4qaoa", coarse_qaoa);
    oss << (ok ? " ok; " : " MISS; ");
  }
  detail = oss.str();
  return instances_ok >= 4;
}

// --- criterion 9: CLI determinism -----------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool run_cli(const std::string& args) {
  const std::string cmd = std::string(CDPACK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "cdpack_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string inst = (dir / "inst.json").string();

  if (!run_cli("generate --n 4 --weight-lo 2 --weight-hi 9 --capacity 12 --seed 9 --out " + inst))
    return false;
  const std::string inst_a = slurp(dir / "inst.json");
  if (!run_cli("generate --n 4 --weight-lo 2 --weight-hi 9 --capacity 12 --seed 9 --out " + inst))
    return false;
  if (slurp(dir / "inst.json") != inst_a) return false;

  const std::string run_args = "run --instance " + inst +
                               " --ansatz cdmixer --iterations 20 --trials 2 --seed 4 "
                               "--threshold 0 --out ";
  if (!run_cli(run_args + (dir / "r1.json").string())) return false;
  if (!run_cli(run_args + (dir / "r2.json").string())) return false;
  if (slurp(dir / "r1.json") != slurp(dir / "r2.json")) return false;
  if (slurp(dir / "r1.json").empty()) return false;

  if (!run_cli("oracle --instance " + inst + " --out " + (dir / "o1.json").string()))
    return false;
  if (!run_cli("oracle --instance " + inst + " --out " + (dir / "o2.json").string()))
    return false;
  if (slurp(dir / "o1.json") != slurp(dir / "o2.json")) return false;

  const std::string sweep_args = "sweep --instance " + inst +
                                 " --ansatz qaoa,cdmixer --iterations 10 --trials 2 --seed 4 "
                                 "--threshold 0 --out ";
  if (!run_cli(sweep_args + (dir / "s1").string())) return false;
  if (!run_cli(sweep_args + (dir / "s2").string())) return false;
  if (slurp(dir / "s1" / "aggregate.csv") != slurp(dir / "s2" / "aggregate.csv")) return false;
  if (slurp(dir / "s1" / "cell_qaoa_p1_s1_i10.json") !=
      slurp(dir / "s2" / "cell_qaoa_p1_s1_i10.json"))
    return false;

  // config file supplies flags; command line overrides the file
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "run.instance=" << inst << "\nrun.ansatz=cdmixer\nrun.iterations=5\n"
        << "run.trials=2\nrun.seed=4\nrun.threshold=0\n";
  }
  if (!run_cli("run --config " + (dir / "run.cfg").string() + " --iterations 20 --out " +
               (dir / "r3.json").string()))
    return false;
  if (slurp(dir / "r3.json") != slurp(dir / "r1.json")) return false;

  fs::remove_all(dir);
  return true;
}

}  // namespace

int main() {
  {
    Timer t;
    report(1, "encoding exactness", encoding_exactness(), t);
  }
  {
    Timer t;
    report(2, "ground-state targeting", ground_state_targeting(), t);
  }
  {
    Timer t;
    report(3, "simulator fidelity", simulator_fidelity(), t);
  }
  {
    Timer t;
    report(4, "cd term structure", cd_structure(), t);
  }
  {
    Timer t;
    std::string detail;
    const bool ok = gate_count_formulas(detail);
    report(5, "gate counts", ok, t, detail);
  }
  {
    Timer t;
    report(6, "schedule lengths", schedule_lengths(), t);
  }
  {
    Timer t;
    report(7, "pipeline soundness", pipeline_soundness(), t);
  }
  {
    Timer t;
    std::string detail;
    const bool ok = statistical_reproduction(detail);
    report(8, "statistical reproduction", ok, t, detail);
  }
  {
    Timer t;
    report(9, "cli determinism", cli_determinism(), t);
  }
  std::printf("%s (%d criteria failed)\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures;
}
