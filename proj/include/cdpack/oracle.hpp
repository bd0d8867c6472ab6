#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdpack/encoding.hpp"
#include "cdpack/instance.hpp"

namespace cdpack {

inline constexpr int kOracleSubsetCap = 20;     // 2^n subset scans
inline constexpr int kOraclePartitionCap = 14;  // set-partition enumeration

/// Every nonempty subset whose weight sum fits a single bin, sorted by
/// bitstring index. The ground truth for feasibility-ratio denominators.
inline std::vector<std::uint64_t> brute_force_partial(const BppInstance& inst) {
  const int n = inst.num_items();
  if (n > kOracleSubsetCap) throw std::invalid_argument("brute_force_partial: n exceeds cap");
  std::vector<std::uint64_t> feasible;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t b = 1; b < dim; ++b)
    if (inst.subset_weight(b) <= inst.capacity()) feasible.push_back(b);
  return feasible;
}

struct OraclePack {
  int m_opt = 0;
  long long unordered = 0;  // partitions into m_opt feasible blocks
  long long ordered = 0;    // unordered * m_opt!
};

namespace detail {

/// Restricted-growth enumeration of set partitions: item i joins one of
/// the blocks already open or opens the next block, which visits every
/// partition exactly once. Pruned by bin capacity, a block budget, and a
/// residual-weight lower bound.
class PartitionSearch {
 public:
  explicit PartitionSearch(const BppInstance& inst)
      : inst_(inst), n_(inst.num_items()), capacity_(inst.capacity()) {
    suffix_weight_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = n_ - 1; i >= 0; --i)
      suffix_weight_[static_cast<std::size_t>(i)] =
          suffix_weight_[static_cast<std::size_t>(i) + 1] + inst.weight(i);
  }

  int find_min_blocks() {
    best_ = n_;  // singletons are always feasible
    loads_.clear();
    descend_min(0);
    return best_;
  }

  long long count_at(int block_budget) {
    budget_ = block_budget;
    count_ = 0;
    loads_.clear();
    descend_count(0);
    return count_;
  }

 private:
  bool bound_exceeds(int item, int limit) const {
    long long free_space = 0;
    for (long long load : loads_) free_space += capacity_ - load;
    const long long remaining = suffix_weight_[static_cast<std::size_t>(item)];
    if (remaining <= free_space) return false;
    const long long extra = (remaining - free_space + capacity_ - 1) / capacity_;
    return static_cast<long long>(loads_.size()) + extra > limit;
  }

  void descend_min(int item) {
    if (static_cast<int>(loads_.size()) >= best_) return;
    if (item == n_) {
      best_ = static_cast<int>(loads_.size());
      return;
    }
    if (bound_exceeds(item, best_ - 1)) return;
    const long long w = inst_.weight(item);
    for (std::size_t b = 0; b < loads_.size(); ++b) {
      if (loads_[b] + w <= capacity_) {
        loads_[b] += w;
        descend_min(item + 1);
        loads_[b] -= w;
      }
    }
    loads_.push_back(w);
    descend_min(item + 1);
    loads_.pop_back();
  }

  void descend_count(int item) {
    if (item == n_) {
      if (static_cast<int>(loads_.size()) == budget_) ++count_;
      return;
    }
    if (bound_exceeds(item, budget_)) return;
    const long long w = inst_.weight(item);
    for (std::size_t b = 0; b < loads_.size(); ++b) {
      if (loads_[b] + w <= capacity_) {
        loads_[b] += w;
        descend_count(item + 1);
        loads_[b] -= w;
      }
    }
    if (static_cast<int>(loads_.size()) < budget_) {
      loads_.push_back(w);
      descend_count(item + 1);
      loads_.pop_back();
    }
  }

  const BppInstance& inst_;
  int n_;
  long long capacity_;
  std::vector<long long> suffix_weight_;
  std::vector<long long> loads_;
  int best_ = 0;
  int budget_ = 0;
  long long count_ = 0;
};

inline long long factorial(int m) {
  long long f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Exhaustive minimal packing: the smallest block count over all set
/// partitions into capacity-feasible blocks, with the exact number of
/// partitions achieving it.
inline OraclePack brute_force_pack(const BppInstance& inst) {
  if (inst.num_items() > kOraclePartitionCap)
    throw std::invalid_argument("brute_force_pack: n exceeds cap");
  detail::PartitionSearch search(inst);
  OraclePack pack;
  pack.m_opt = search.find_min_blocks();
  pack.unordered = search.count_at(pack.m_opt);
  pack.ordered = pack.unordered * detail::factorial(pack.m_opt);
  return pack;
}

/// All bitstrings minimizing the penalty objective, ties included. The
/// empty subset participates in the scan; whether it wins depends only on
/// the penalty parameters.
inline std::vector<std::uint64_t> exact_ground_states(const BppInstance& inst,
                                                      const EncodingParams& params) {
  const int n = inst.num_items();
  if (n > kOracleSubsetCap) throw std::invalid_argument("exact_ground_states: n exceeds cap");
  const std::uint64_t dim = std::uint64_t{1} << n;
  double min_value = binary_objective(inst, params, 0);
  for (std::uint64_t b = 1; b < dim; ++b)
    min_value = std::min(min_value, binary_objective(inst, params, b));
  const double tol = 1e-9 * std::max(1.0, std::abs(min_value));
  std::vector<std::uint64_t> winners;
  for (std::uint64_t b = 0; b < dim; ++b)
    if (binary_objective(inst, params, b) <= min_value + tol) winners.push_back(b);
  return winners;
}

}  // namespace cdpack
