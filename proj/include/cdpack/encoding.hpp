#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cdpack/instance.hpp"
#include "cdpack/pauli.hpp"

namespace cdpack {

/// Penalty parameters for one target weight sum. The linear coefficient is
/// always derived as A = 2B(C - k*delta_w), never set directly, so the
/// quadratic penalty's minimum sits exactly at weight sum k*delta_w.
struct EncodingParams {
  double penalty_b = 1.0;  // B
  double k = 1.0;
  double delta_w = 1.0;
  double penalty_a = 0.0;  // A, derived

  EncodingParams(const BppInstance& inst, double k_value, double delta_w_value,
                 double b_value = 1.0)
      : penalty_b(b_value), k(k_value), delta_w(delta_w_value) {
    if (penalty_b <= 0) throw std::invalid_argument("penalty weight B must be positive");
    if (k <= 0 || delta_w <= 0) throw std::invalid_argument("k and delta_w must be positive");
    const double target = k * delta_w;
    const double capacity = static_cast<double>(inst.capacity());
    if (target < delta_w - 1e-9 || target > capacity + 1e-9)
      throw std::invalid_argument("target weight sum k*delta_w must lie in [delta_w, C]");
    penalty_a = 2.0 * penalty_b * (capacity - target);
  }

  double target_weight() const { return k * delta_w; }
};

/// Minimum positive pairwise difference of the item weights; the grid
/// spacing of target weight sums. Falls back to 1 when all weights are
/// equal so C/delta_w stays finite and the grid stays integral.
inline double delta_omega(const BppInstance& inst) {
  std::vector<long long> w = inst.weights();
  std::sort(w.begin(), w.end());
  long long best = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const long long gap = w[i] - w[i - 1];
    if (gap > 0 && (best == 0 || gap < best)) best = gap;
  }
  return best == 0 ? 1.0 : static_cast<double>(best);
}

/// Target-index grid {stepsize, 2*stepsize, ...} up to C/delta_w. The
/// small tolerance absorbs binary-fraction rounding so grids like 0.5 and
/// 2.5 produce the expected exact counts.
inline std::vector<double> k_schedule(double capacity, double delta_w, double stepsize) {
  if (stepsize <= 0) throw std::invalid_argument("k stepsize must be positive");
  if (capacity <= 0 || delta_w <= 0)
    throw std::invalid_argument("capacity and delta_w must be positive");
  const double k_max = capacity / delta_w;
  const long long count = static_cast<long long>(std::floor(k_max / stepsize + 1e-9));
  if (count < 1)
    throw std::invalid_argument("empty k schedule: stepsize exceeds C/delta_w");
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(count));
  for (long long j = 1; j <= count; ++j) ks.push_back(static_cast<double>(j) * stepsize);
  return ks;
}

/// The shifted quadratic penalty A(s - C) + B(s - C)^2 evaluated on one
/// subset, with s its weight sum.
inline double binary_objective(const BppInstance& inst, const EncodingParams& p,
                               std::uint64_t bits) {
  const double gap = static_cast<double>(inst.subset_weight(bits)) -
                     static_cast<double>(inst.capacity());
  return p.penalty_a * gap + p.penalty_b * gap * gap;
}

/// The penalty objective in Pauli form under x_i = (1 - z_i)/2.
struct CostHamiltonian {
  PauliSum hamiltonian;
  double constant;  // dropped scalar: diagonal(H, x) + constant reproduces the objective

  CostHamiltonian(PauliSum h, double c) : hamiltonian(std::move(h)), constant(c) {}
};

/// Builds the diagonal cost Hamiltonian: n linear Z terms with coefficient
/// w_i * (-A/2 + B(C - W/2)) and pair couplings (B/2) w_i w_j Z_i Z_j for
/// i < j, plus the constant offset that makes the reconstruction exact.
inline CostHamiltonian build_cost_hamiltonian(const BppInstance& inst, const EncodingParams& p) {
  const int n = inst.num_items();
  const double cap = static_cast<double>(inst.capacity());
  const double total = static_cast<double>(inst.total_weight());
  const double linear_scale = -p.penalty_a / 2.0 + p.penalty_b * (cap - total / 2.0);

  PauliSum h(n);
  for (int i = 0; i < n; ++i) {
    const double w = static_cast<double>(inst.weight(i));
    h.add(complex{w * linear_scale, 0.0}, PauliString::single(n, i, 'Z'));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double wij = static_cast<double>(inst.weight(i)) * static_cast<double>(inst.weight(j));
      PauliString zz(n);
      zz.set_letter(i, 'Z');
      zz.set_letter(j, 'Z');
      h.add(complex{p.penalty_b / 2.0 * wij, 0.0}, zz);
    }
  }

  double sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double w = static_cast<double>(inst.weight(i));
    sum_sq += w * w;
  }
  const double d = total / 2.0 - cap;
  const double constant = p.penalty_a * d + p.penalty_b * (d * d + sum_sq / 4.0);
  return CostHamiltonian(simplify(h), constant);
}

/// Evaluates the diagonal of a Z/I Pauli sum on one basis state.
inline double diagonal_value(const PauliSum& h, std::uint64_t bits) {
  if (!h.is_diagonal()) throw std::invalid_argument("diagonal_value: sum is not diagonal");
  const int n = h.num_qubits();
  double value = 0;
  for (const auto& t : h.terms()) {
    // z_i = +1 for bit 0, -1 for bit 1; translate item index to bit position.
    std::uint64_t mask = 0;
    for (int q = 0; q < n; ++q)
      if ((t.string.z_bits() >> q) & 1) mask |= std::uint64_t{1} << (n - 1 - q);
    const int par = PauliString::popcount(bits & mask) & 1;
    value += t.coeff.real() * (par ? -1.0 : 1.0);
  }
  return value;
}

/// Transverse-field mixer: one unit X per qubit.
inline PauliSum build_mixer(int n) {
  PauliSum h(n);
  for (int i = 0; i < n; ++i) h.add(complex{1.0, 0.0}, PauliString::single(n, i, 'X'));
  return h;
}

/// The counter-diabatic driving pool: for every pair i < j the YZ and ZY
/// strings, then a single Y per qubit. Terms are kept in pair-grouped
/// order (partners adjacent) because the circuit decomposition lets each
/// pair share its entangling gates.
///
/// Unweighted (default) uses unit coefficients on every string; weighted
/// retains the first-order commutator coefficients, which are proportional
/// to the cost Hamiltonian's local fields and couplings.
inline PauliSum build_cd_pool(int n, bool weighted = false,
                              const PauliSum* commutator_structure = nullptr) {
  if (weighted && commutator_structure == nullptr)
    throw std::invalid_argument("build_cd_pool: weighted pool needs the commutator structure");
  const auto coeff_of = [&](const PauliString& s) -> complex {
    if (!weighted) return complex{1.0, 0.0};
    for (const auto& t : commutator_structure->terms())
      if (t.string == s) return t.coeff;
    return complex{0.0, 0.0};
  };

  PauliSum pool(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      PauliString yz(n), zy(n);
      yz.set_letter(i, 'Y');
      yz.set_letter(j, 'Z');
      zy.set_letter(i, 'Z');
      zy.set_letter(j, 'Y');
      const complex cyz = coeff_of(yz);
      const complex czy = coeff_of(zy);
      if (std::abs(cyz) > 0) pool.add(cyz, yz);
      if (std::abs(czy) > 0) pool.add(czy, zy);
    }
  }
  for (int i = 0; i < n; ++i) {
    const PauliString y = PauliString::single(n, i, 'Y');
    const complex cy = coeff_of(y);
    if (std::abs(cy) > 0) pool.add(cy, y);
  }
  return pool;
}

/// Convenience for the weighted pool: derives the structure from the given
/// mixer and cost Hamiltonian.
inline PauliSum build_weighted_cd_pool(const PauliSum& h_mixer, const PauliSum& h_cost) {
  const PauliSum structure = nc_first_order(h_mixer, h_cost);
  return build_cd_pool(h_mixer.num_qubits(), true, &structure);
}

}  // namespace cdpack
