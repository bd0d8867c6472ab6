#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdpack/ansatz.hpp"
#include "cdpack/gradient.hpp"
#include "cdpack/rng.hpp"
#include "cdpack/statevector.hpp"

namespace cdpack {

/// Minimization settings. Restart trials draw their starting angles
/// uniformly from [init_lo, init_hi) with per-trial seeds derived from
/// `seed`; the iteration budget is always exhausted (no early stopping).
struct OptConfig {
  int iterations = 100;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int trials = 5;
  std::uint64_t seed = 0;
  double init_lo = 0.0;
  double init_hi = kTwoPi;
  std::vector<int> snapshot_iterations;  // record distributions after these steps

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (learning_rate <= 0) throw std::invalid_argument("learning rate must be positive");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(init_lo < init_hi)) throw std::invalid_argument("empty init range");
  }
};

/// First-moment/second-moment state for bias-corrected Adam.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long step = 0;
  double learning_rate, beta1, beta2, epsilon;

  AdamState(std::size_t dim, const OptConfig& cfg)
      : m(dim, 0.0), v(dim, 0.0), learning_rate(cfg.learning_rate), beta1(cfg.beta1),
        beta2(cfg.beta2), epsilon(cfg.epsilon) {}
};

/// Standard bias-corrected Adam update, in place.
inline void adam_step(AdamState& state, std::vector<double>& params,
                      const std::vector<double>& grad) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step: dimension mismatch");
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

struct TrialResult {
  std::vector<double> params;
  double final_cost = 0.0;
  std::vector<double> history;  // length iterations + 1, starts at the initial cost
  StateVector final_state;
  std::map<int, SampleSet> snapshots;
};

struct OptResult {
  int best_trial = 0;
  double best_cost = 0.0;
  std::vector<double> best_params;
  std::vector<TrialResult> trials;
};

/// Runs seeded multi-trial Adam descent of <H_c>. Trials are independent
/// and deterministic: trial t uses seed derive(cfg.seed, t), so permuting
/// trial indices permutes outputs without changing any trajectory.
inline OptResult optimize(const Circuit& circuit, const PauliSum& h_cost, const OptConfig& cfg) {
  cfg.validate();
  if (h_cost.num_qubits() != circuit.n)
    throw std::invalid_argument("optimize: Hamiltonian/circuit qubit mismatch");

  const CompiledCircuit cc = compile(circuit);
  const std::vector<double> h_diag = diagonal_profile(h_cost);
  const StateVector start = init_plus(circuit.n);

  const auto cost_of = [&](const std::vector<double>& params) {
    StateVector s = start;
    run_compiled(cc, params, s);
    double e = 0;
    for (std::size_t b = 0; b < s.dim(); ++b) e += h_diag[b] * std::norm(s.amps[b]);
    return e;
  };

  OptResult result;
  result.trials.resize(static_cast<std::size_t>(cfg.trials));

  for (int t = 0; t < cfg.trials; ++t) {
    TrialResult& trial = result.trials[static_cast<std::size_t>(t)];
    rng::Stream stream(rng::derive(cfg.seed, static_cast<std::uint64_t>(t)));
    trial.params.resize(static_cast<std::size_t>(circuit.param_count));
    for (double& p : trial.params) p = stream.next_in(cfg.init_lo, cfg.init_hi);

    AdamState adam(trial.params.size(), cfg);
    trial.history.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
    trial.history.push_back(cost_of(trial.params));

    for (int it = 1; it <= cfg.iterations; ++it) {
      const std::vector<double> grad = gradient_compiled(cc, trial.params, h_diag, start);
      adam_step(adam, trial.params, grad);
      trial.history.push_back(cost_of(trial.params));
      for (int snap : cfg.snapshot_iterations) {
        if (snap == it) {
          StateVector s = start;
          run_compiled(cc, trial.params, s);
          trial.snapshots.emplace(it, full_distribution(s));
        }
      }
    }

    trial.final_state = start;
    run_compiled(cc, trial.params, trial.final_state);
    trial.final_cost = trial.history.back();
  }

  result.best_trial = 0;
  result.best_cost = result.trials[0].final_cost;
  for (int t = 1; t < cfg.trials; ++t) {
    const double c = result.trials[static_cast<std::size_t>(t)].final_cost;
    if (c < result.best_cost) {
      result.best_cost = c;
      result.best_trial = t;
    }
  }
  result.best_params = result.trials[static_cast<std::size_t>(result.best_trial)].params;
  return result;
}

/// Cost histories as CSV rows `trial,iteration,cost`.
inline std::string histories_to_csv(const OptResult& result) {
  std::string out = "trial,iteration,cost\n";
  char buf[80];
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const auto& hist = result.trials[t].history;
    for (std::size_t it = 0; it < hist.size(); ++it) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", t, it, hist[it]);
      out += buf;
    }
  }
  return out;
}

}  // namespace cdpack
