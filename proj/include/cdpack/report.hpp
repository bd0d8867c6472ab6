#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdpack/oracle.hpp"
#include "cdpack/pipeline.hpp"

namespace cdpack {

using nlohmann::json;

namespace detail {

inline json metrics_to_json(const Metrics& m) {
  json j{{"fr", m.fr},
         {"fps", m.fps},
         {"ips", m.ips},
         {"cover_ok", m.cover_ok}};
  if (m.cover_ok) {
    j["m_opt"] = m.m_opt;
    j["fs_unordered"] = m.fs_unordered;
    j["fs_ordered"] = m.fs_ordered;
  } else {
    j["cover_error"] = m.cover_error;
  }
  return j;
}

inline json sampleset_to_json(const SampleSet& set) {
  json rows = json::array();
  for (const auto& [bits, value] : set.entries)
    rows.push_back(json::array({bitstring_str(bits, set.n), value}));
  return json{{"shots", set.shots}, {"entries", rows}};
}

}  // namespace detail

/// The experiment report document: {config, metrics, histories,
/// snapshots} plus the oracle block when requested. Byte-stable for a
/// fixed seed; wall-clock is deliberately not included.
inline json report_to_json(const RunReport& r) {
  json config{{"n", r.n},
              {"capacity", r.capacity},
              {"weights", r.weights},
              {"ansatz", r.ansatz},
              {"layers", r.layers},
              {"stepsize", r.stepsize},
              {"iterations", r.iterations},
              {"trials", r.trials},
              {"lr", r.learning_rate},
              {"seed", r.seed},
              {"threshold", r.threshold},
              {"cd_weighted", r.cd_weighted},
              {"shots", r.shots},
              {"delta_w", r.delta_w},
              {"schedule_len", r.schedule.size()},
              {"exact_fps", r.exact_fps}};

  json per_trial = json::array();
  for (const auto& m : r.per_trial) per_trial.push_back(detail::metrics_to_json(m));

  json histories = json::array();
  for (const auto& rec : r.k_records) {
    json h{{"k", rec.k},
           {"penalty_a", rec.penalty_a},
           {"best_trial", rec.best_trial},
           {"best_cost", rec.best_cost},
           {"trials", rec.histories}};
    histories.push_back(std::move(h));
  }

  json snapshots = json::array();
  for (const auto& snap : r.snapshots) {
    snapshots.push_back(json{{"k", snap.k},
                             {"trial", snap.trial},
                             {"iteration", snap.iteration},
                             {"distribution", detail::sampleset_to_json(snap.distribution)}});
  }

  json doc{{"config", std::move(config)},
           {"metrics", detail::metrics_to_json(r.metrics)},
           {"trial_aggregate_metrics", detail::metrics_to_json(r.trial_aggregate)},
           {"per_trial_metrics", std::move(per_trial)},
           {"histories", std::move(histories)},
           {"snapshots", std::move(snapshots)}};

  if (r.has_gate_counts) {
    doc["gate_counts"] = json{{"parameterized", r.gates.parameterized},
                              {"cnots", r.gates.cnots},
                              {"total", r.gates.total},
                              {"table_parameterized", r.gates.table_parameterized},
                              {"table_cnots", r.gates.table_cnots},
                              {"table_total", r.gates.table_total}};
  }
  if (r.with_oracle) {
    doc["oracle"] = json{{"exact_fps", r.exact_fps},
                         {"m_opt", r.oracle_pack.m_opt},
                         {"fs_unordered", r.oracle_pack.unordered},
                         {"fs_ordered", r.oracle_pack.ordered}};
  }
  return doc;
}

inline json oracle_report_json(const BppInstance& inst) {
  const auto fps = brute_force_partial(inst);
  const OraclePack pack = brute_force_pack(inst);
  return json{{"n", inst.num_items()},
              {"capacity", inst.capacity()},
              {"weights", inst.weights()},
              {"fps", fps.size()},
              {"m_opt", pack.m_opt},
              {"fs_unordered", pack.unordered},
              {"fs_ordered", pack.ordered}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

/// One sweep cell: grid coordinates plus the report (or the error that
/// kept the cell from completing).
struct SweepCell {
  std::string ansatz;
  int layers = 1;
  double stepsize = 1.0;
  int iterations = 100;
  bool ok = false;
  std::string error;
  RunReport report;
};

/// Aggregate CSV behind the sweep: one row per cell, sorted by grid
/// coordinates. FR mean/stddev aggregate the per-trial feasibility
/// ratios; the remaining metric columns come from the best-trial
/// selection.
inline std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out =
      "ansatz,layers,stepsize,iterations,fr_mean,fr_std,fps,ips,m_opt,fs_unordered,"
      "fs_ordered,status\n";
  char buf[256];
  for (const auto& cell : cells) {
    if (!cell.ok) {
      std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%d,nan,nan,0,0,0,0,0,error:%s\n",
                    cell.ansatz.c_str(), cell.layers, cell.stepsize, cell.iterations,
                    cell.error.c_str());
      out += buf;
      continue;
    }
    const auto& r = cell.report;
    double mean = 0;
    for (const auto& m : r.per_trial) mean += m.fr;
    mean /= static_cast<double>(r.per_trial.size());
    double var = 0;
    for (const auto& m : r.per_trial) var += (m.fr - mean) * (m.fr - mean);
    var /= static_cast<double>(r.per_trial.size());
    const double sd = std::sqrt(var);
    std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%d,%.17g,%.17g,%lld,%lld,%d,%lld,%lld,%s\n",
                  cell.ansatz.c_str(), cell.layers, cell.stepsize, cell.iterations, mean, sd,
                  r.metrics.fps, r.metrics.ips, r.metrics.m_opt, r.metrics.fs_unordered,
                  r.metrics.fs_ordered, r.metrics.cover_ok ? "ok" : "cover_infeasible");
    out += buf;
  }
  return out;
}

}  // namespace cdpack
