#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cdpack/ansatz.hpp"
#include "cdpack/decompose.hpp"
#include "cdpack/encoding.hpp"
#include "cdpack/instance.hpp"
#include "cdpack/oracle.hpp"
#include "cdpack/optimizer.hpp"

namespace cdpack {

/// Raised by the combination step when the supplied single-bin solutions
/// cannot cover every item; usually means the sampling stage lost a
/// needed block.
class CoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A candidate single-bin packing surfaced by the sampling stage.
struct PartialSolution {
  std::uint64_t bits = 0;
  long long weight_sum = 0;
  double max_probability = 0.0;
  std::vector<double> k_values;  // schedule points that surfaced it, ascending
};

/// Candidates split by the classical capacity check. The all-zero string
/// is excluded from both sides: an empty bin is never a useful block.
struct PartialSolutionSet {
  int n = 0;
  std::vector<PartialSolution> feasible;    // weight sum <= C, sorted by bits
  std::vector<PartialSolution> infeasible;  // weight sum > C, sorted by bits

  std::vector<std::uint64_t> feasible_bits() const {
    std::vector<std::uint64_t> out;
    out.reserve(feasible.size());
    for (const auto& p : feasible) out.push_back(p.bits);
    return out;
  }
};

/// Classifies raw bitstrings by weight sum.
inline PartialSolutionSet filter_feasible(const std::vector<std::uint64_t>& raw,
                                          const BppInstance& inst) {
  PartialSolutionSet out;
  out.n = inst.num_items();
  std::set<std::uint64_t> seen(raw.begin(), raw.end());
  for (std::uint64_t bits : seen) {
    if (bits == 0) continue;
    if (bits >> inst.num_items())
      throw std::invalid_argument("filter_feasible: bitstring wider than the instance");
    PartialSolution p;
    p.bits = bits;
    p.weight_sum = inst.subset_weight(bits);
    (p.weight_sum <= inst.capacity() ? out.feasible : out.infeasible).push_back(p);
  }
  return out;
}

/// Minimal multi-bin combination of feasible blocks. `solutions` holds
/// every unordered partition at the minimal bin count, each as a sorted
/// list of block bitstrings.
struct PackingResult {
  int m_opt = 0;
  long long unordered = 0;  // collections of m_opt disjoint blocks covering all items
  long long ordered = 0;    // unordered * m_opt!
  std::vector<std::vector<std::uint64_t>> solutions;
};

namespace detail {

/// Exact-cover search over the provided blocks: always branch on the
/// lowest-index uncovered item, trying each disjoint block that contains
/// it. Every unordered cover is visited exactly once.
class CoverSearch {
 public:
  CoverSearch(const std::vector<std::uint64_t>& blocks, int n) : n_(n) {
    full_ = (n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    by_item_.resize(static_cast<std::size_t>(n));
    for (std::uint64_t block : blocks)
      for (int item = 0; item < n; ++item)
        if (bit_set(block, item, n)) by_item_[static_cast<std::size_t>(item)].push_back(block);
  }

  bool exists(int limit) {
    limit_ = limit;
    counting_ = false;
    found_ = 0;
    search(0, 0);
    return found_ > 0;
  }

  long long enumerate(int limit, std::vector<std::vector<std::uint64_t>>& solutions) {
    limit_ = limit;
    counting_ = true;
    found_ = 0;
    solutions_ = &solutions;
    search(0, 0);
    solutions_ = nullptr;
    return found_;
  }

 private:
  void search(std::uint64_t covered, int used) {
    if (covered == full_) {
      ++found_;
      if (solutions_) {
        std::vector<std::uint64_t> blocks = stack_;
        std::sort(blocks.begin(), blocks.end());
        solutions_->push_back(std::move(blocks));
      }
      return;
    }
    if (used == limit_) return;
    if (!counting_ && found_ > 0) return;
    int item = 0;
    while (bit_set(covered, item, n_)) ++item;
    for (std::uint64_t block : by_item_[static_cast<std::size_t>(item)]) {
      if (block & covered) continue;
      stack_.push_back(block);
      search(covered | block, used + 1);
      stack_.pop_back();
      if (!counting_ && found_ > 0) return;
    }
  }

  int n_;
  std::uint64_t full_ = 0;
  std::vector<std::vector<std::uint64_t>> by_item_;
  std::vector<std::uint64_t> stack_;
  std::vector<std::vector<std::uint64_t>>* solutions_ = nullptr;
  int limit_ = 0;
  bool counting_ = false;
  long long found_ = 0;
};

}  // namespace detail

/// Packs all items using the given feasible blocks: finds the smallest m
/// admitting a disjoint cover and enumerates every cover at that m.
inline PackingResult combine_bins(const std::vector<std::uint64_t>& fps,
                                  const BppInstance& inst) {
  if (fps.empty()) throw CoverError("no feasible partial solutions to combine");
  const int n = inst.num_items();
  std::uint64_t coverage = 0;
  for (std::uint64_t b : fps) coverage |= b;
  const std::uint64_t full = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  if (coverage != full)
    throw CoverError("cover infeasible: some item appears in no feasible block");

  detail::CoverSearch search(fps, n);
  const long long total = inst.total_weight();
  const int lower =
      static_cast<int>((total + inst.capacity() - 1) / inst.capacity());
  PackingResult result;
  for (int m = std::max(1, lower); m <= n; ++m) {
    if (search.exists(m)) {
      result.m_opt = m;
      result.unordered = search.enumerate(m, result.solutions);
      result.ordered = result.unordered * detail::factorial(m);
      return result;
    }
  }
  throw CoverError("cover infeasible: no disjoint cover from the provided blocks");
}

inline PackingResult combine_bins(const std::vector<PartialSolution>& fps,
                                  const BppInstance& inst) {
  std::vector<std::uint64_t> bits;
  bits.reserve(fps.size());
  for (const auto& p : fps) bits.push_back(p.bits);
  return combine_bins(bits, inst);
}

/// Fraction of the exact single-bin solutions the sampler recovered.
inline double feasibility_ratio(const PartialSolutionSet& found, long long exact_count) {
  if (exact_count < 1) throw std::invalid_argument("feasibility_ratio: exact count must be >= 1");
  return static_cast<double>(found.feasible.size()) / static_cast<double>(exact_count);
}

/// Everything a single experiment needs beyond the instance.
struct RunConfig {
  AnsatzKind kind = AnsatzKind::cd_mixer;
  int layers = 1;
  double stepsize = 1.0;
  OptConfig opt;
  double threshold = -1.0;  // negative = default 2^-n (strictly above uniform)
  bool cd_weighted = false;
  long long shots = 0;      // 0 = exact distributions
  double snapshot_k = -1.0; // negative = mid-schedule; used when snapshots requested
  int threads = 1;
};

/// Per-schedule-point record kept for reporting.
struct KRecord {
  double k = 0;
  double penalty_a = 0;
  int best_trial = 0;
  double best_cost = 0;
  std::vector<std::vector<double>> histories;  // trial -> cost history
};

struct SnapshotRecord {
  double k = 0;
  int trial = 0;
  int iteration = 0;
  SampleSet distribution;
};

struct SubsetSamplingResult {
  PartialSolutionSet best;                      // union over k of the best trial's picks
  std::vector<PartialSolutionSet> per_trial;    // same union per trial index
  PartialSolutionSet trial_aggregate;           // union over every trial and k
  std::vector<KRecord> k_records;
  std::vector<SnapshotRecord> snapshots;
  double delta_w = 1.0;
  std::vector<double> schedule;
};

namespace detail {

struct Candidate {
  double max_probability = 0;
  std::set<double> ks;
};

inline void keep_above(const SampleSet& dist, long long shots, double threshold, double k,
                       std::map<std::uint64_t, Candidate>& into) {
  const double denom = shots > 0 ? static_cast<double>(shots) : 1.0;
  for (const auto& [bits, value] : dist.entries) {
    const double prob = value / denom;
    if (prob > threshold) {
      Candidate& c = into[bits];
      c.max_probability = std::max(c.max_probability, prob);
      c.ks.insert(k);
    }
  }
}

inline PartialSolutionSet classify(const std::map<std::uint64_t, Candidate>& candidates,
                                   const BppInstance& inst) {
  PartialSolutionSet out;
  out.n = inst.num_items();
  for (const auto& [bits, cand] : candidates) {
    if (bits == 0) continue;
    PartialSolution p;
    p.bits = bits;
    p.weight_sum = inst.subset_weight(bits);
    p.max_probability = cand.max_probability;
    p.k_values.assign(cand.ks.begin(), cand.ks.end());
    (p.weight_sum <= inst.capacity() ? out.feasible : out.infeasible).push_back(p);
  }
  return out;
}

}  // namespace detail

/// Step I of the procedure: sweep the target index k over its schedule,
/// minimize each sub-Hamiltonian, and union the bitstrings whose final
/// probability clears the selection threshold. Accumulation dedupes
/// across k; classification by weight sum is Step II.
///
/// Schedule points are independent: each k derives its own seed from the
/// master seed, so the result does not depend on the number of worker
/// threads.
inline SubsetSamplingResult subset_sampling(const BppInstance& inst, const RunConfig& cfg) {
  cfg.opt.validate();
  const int n = inst.num_items();
  const double dw = delta_omega(inst);
  const std::vector<double> schedule =
      k_schedule(static_cast<double>(inst.capacity()), dw, cfg.stepsize);
  const double threshold = cfg.threshold >= 0 ? cfg.threshold : std::pow(2.0, -n);
  if (threshold >= 1.0) throw std::invalid_argument("selection threshold must be below 1");

  const PauliSum h_mixer = build_mixer(n);
  const PauliSum cd_unweighted = build_cd_pool(n);

  double snapshot_k = -1.0;
  if (!cfg.opt.snapshot_iterations.empty()) {
    // Default to the schedule point nearest mid-capacity.
    const double want = cfg.snapshot_k >= 0
                            ? cfg.snapshot_k
                            : static_cast<double>(inst.capacity()) / (2.0 * dw);
    double best_gap = -1;
    for (double k : schedule) {
      const double gap = std::abs(k - want);
      if (best_gap < 0 || gap < best_gap) {
        best_gap = gap;
        snapshot_k = k;
      }
    }
  }

  struct KOutcome {
    KRecord record;
    std::map<std::uint64_t, detail::Candidate> best_picks;
    std::vector<std::map<std::uint64_t, detail::Candidate>> trial_picks;
    std::vector<SnapshotRecord> snapshots;
  };
  std::vector<KOutcome> outcomes(schedule.size());

  const auto run_one_k = [&](std::size_t idx) {
    const double k = schedule[idx];
    EncodingParams params(inst, k, dw, 1.0);
    const CostHamiltonian cost_h = build_cost_hamiltonian(inst, params);
    const PauliSum h_cd =
        cfg.cd_weighted ? build_weighted_cd_pool(h_mixer, cost_h.hamiltonian) : cd_unweighted;
    const Circuit circuit = build_circuit(cfg.kind, cost_h.hamiltonian, h_mixer, h_cd, cfg.layers);

    OptConfig opt = cfg.opt;
    opt.seed = rng::derive(cfg.opt.seed, idx);
    if (!(snapshot_k >= 0 && schedule[idx] == snapshot_k)) opt.snapshot_iterations.clear();
    const OptResult opt_result = optimize(circuit, cost_h.hamiltonian, opt);

    KOutcome& out = outcomes[idx];
    out.record.k = k;
    out.record.penalty_a = params.penalty_a;
    out.record.best_trial = opt_result.best_trial;
    out.record.best_cost = opt_result.best_cost;
    out.trial_picks.resize(opt_result.trials.size());
    for (std::size_t t = 0; t < opt_result.trials.size(); ++t) {
      const TrialResult& trial = opt_result.trials[t];
      out.record.histories.push_back(trial.history);
      SampleSet dist = cfg.shots > 0
                           ? sample(trial.final_state, cfg.shots,
                                    rng::derive(opt.seed, t, 0x5ad5ULL))
                           : full_distribution(trial.final_state);
      detail::keep_above(dist, cfg.shots, threshold, k, out.trial_picks[t]);
      if (static_cast<int>(t) == opt_result.best_trial)
        detail::keep_above(dist, cfg.shots, threshold, k, out.best_picks);
      for (const auto& [iteration, snap] : trial.snapshots)
        out.snapshots.push_back(
            SnapshotRecord{k, static_cast<int>(t), iteration, snap});
    }
  };

  const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(schedule.size())));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < schedule.size(); ++idx) run_one_k(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t idx = next.fetch_add(1); idx < schedule.size();
             idx = next.fetch_add(1))
          run_one_k(idx);
      });
    for (auto& th : pool) th.join();
  }

  // Deterministic merge in schedule order.
  std::map<std::uint64_t, detail::Candidate> best_union;
  std::map<std::uint64_t, detail::Candidate> all_union;
  std::vector<std::map<std::uint64_t, detail::Candidate>> trial_union(
      static_cast<std::size_t>(cfg.opt.trials));
  const auto merge = [](std::map<std::uint64_t, detail::Candidate>& into, std::uint64_t bits,
                        const detail::Candidate& cand) {
    detail::Candidate& c = into[bits];
    c.max_probability = std::max(c.max_probability, cand.max_probability);
    c.ks.insert(cand.ks.begin(), cand.ks.end());
  };
  SubsetSamplingResult result;
  result.delta_w = dw;
  result.schedule = schedule;
  for (auto& out : outcomes) {
    for (const auto& [bits, cand] : out.best_picks) merge(best_union, bits, cand);
    for (std::size_t t = 0; t < out.trial_picks.size(); ++t)
      for (const auto& [bits, cand] : out.trial_picks[t]) {
        merge(trial_union[t], bits, cand);
        merge(all_union, bits, cand);
      }
    result.k_records.push_back(std::move(out.record));
    for (auto& snap : out.snapshots) result.snapshots.push_back(std::move(snap));
  }

  result.best = detail::classify(best_union, inst);
  result.trial_aggregate = detail::classify(all_union, inst);
  for (const auto& tu : trial_union) result.per_trial.push_back(detail::classify(tu, inst));
  return result;
}

/// Convenience overload returning just the classified selection.
inline PartialSolutionSet subset_sampling(const BppInstance& inst, AnsatzKind kind, int layers,
                                          double stepsize, const OptConfig& opt,
                                          double threshold) {
  RunConfig cfg;
  cfg.kind = kind;
  cfg.layers = layers;
  cfg.stepsize = stepsize;
  cfg.opt = opt;
  cfg.threshold = threshold;
  return subset_sampling(inst, cfg).best;
}

struct Metrics {
  double fr = 0.0;
  long long fps = 0;
  long long ips = 0;
  int m_opt = 0;
  long long fs_unordered = 0;
  long long fs_ordered = 0;
  bool cover_ok = false;
  std::string cover_error;
};

/// Full outcome of one experiment. Wall-clock stays in memory only; the
/// serialized report is byte-stable for a fixed seed.
struct RunReport {
  // configuration echo
  int n = 0;
  long long capacity = 0;
  std::vector<long long> weights;
  std::string ansatz;
  int layers = 1;
  double stepsize = 1.0;
  int iterations = 0;
  int trials = 0;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  double threshold = 0.0;
  bool cd_weighted = false;
  long long shots = 0;
  double delta_w = 1.0;
  std::vector<double> schedule;

  long long exact_fps = 0;
  Metrics metrics;                 // from the best-trial selection (the canonical S)
  Metrics trial_aggregate;         // from the union across all trials
  std::vector<Metrics> per_trial;  // one selection per restart index
  std::vector<KRecord> k_records;
  std::vector<SnapshotRecord> snapshots;
  GateCounts gates;
  bool has_gate_counts = false;

  bool with_oracle = false;
  OraclePack oracle_pack;

  double wall_ms = 0.0;  // informational; never serialized
};

namespace detail {

inline Metrics metrics_for(const PartialSolutionSet& set, long long exact_fps,
                           const BppInstance& inst) {
  Metrics m;
  m.fps = static_cast<long long>(set.feasible.size());
  m.ips = static_cast<long long>(set.infeasible.size());
  m.fr = feasibility_ratio(set, exact_fps);
  try {
    const PackingResult pack = combine_bins(set.feasible, inst);
    m.m_opt = pack.m_opt;
    m.fs_unordered = pack.unordered;
    m.fs_ordered = pack.ordered;
    m.cover_ok = true;
  } catch (const CoverError& e) {
    m.cover_ok = false;
    m.cover_error = e.what();
  }
  return m;
}

}  // namespace detail

/// Steps I-III plus metrics: sample, filter, combine, and score against
/// the brute-force single-bin ground truth. Deterministic given the seed.
inline RunReport run_experiment(const BppInstance& inst, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SubsetSamplingResult sampled = subset_sampling(inst, cfg);

  RunReport report;
  report.n = inst.num_items();
  report.capacity = inst.capacity();
  report.weights = inst.weights();
  report.ansatz = ansatz_name(cfg.kind);
  report.layers = cfg.layers;
  report.stepsize = cfg.stepsize;
  report.iterations = cfg.opt.iterations;
  report.trials = cfg.opt.trials;
  report.learning_rate = cfg.opt.learning_rate;
  report.seed = cfg.opt.seed;
  report.threshold = cfg.threshold >= 0 ? cfg.threshold : std::pow(2.0, -inst.num_items());
  report.cd_weighted = cfg.cd_weighted;
  report.shots = cfg.shots;
  report.delta_w = sampled.delta_w;
  report.schedule = sampled.schedule;
  report.k_records = std::move(sampled.k_records);
  report.snapshots = std::move(sampled.snapshots);

  report.exact_fps = static_cast<long long>(brute_force_partial(inst).size());
  report.metrics = detail::metrics_for(sampled.best, report.exact_fps, inst);
  report.trial_aggregate = detail::metrics_for(sampled.trial_aggregate, report.exact_fps, inst);
  for (const auto& trial_set : sampled.per_trial)
    report.per_trial.push_back(detail::metrics_for(trial_set, report.exact_fps, inst));

  if (inst.num_items() >= 2) {
    report.gates = gate_counts(cfg.kind, inst.num_items());
    report.has_gate_counts = true;
  }

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

}  // namespace cdpack
