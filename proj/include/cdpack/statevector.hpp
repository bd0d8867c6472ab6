#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdpack/bitstring.hpp"
#include "cdpack/pauli.hpp"
#include "cdpack/rng.hpp"

namespace cdpack {

/// Largest register the exact engine accepts; 2^24 amplitudes is 256 MiB.
inline constexpr int kMaxSimQubits = 24;

/// Exact amplitudes of an n-qubit state. Amplitude index b renders with
/// qubit/item 0 as the most significant bit, matching the bitstring
/// convention used everywhere else.
struct StateVector {
  int n = 0;
  std::vector<complex> amps;

  std::size_t dim() const { return amps.size(); }

  double norm() const {
    double s = 0;
    for (const complex& a : amps) s += std::norm(a);
    return std::sqrt(s);
  }
};

/// Uniform superposition: every amplitude 2^(-n/2).
inline StateVector init_plus(int n) {
  if (n < 1 || n > kMaxSimQubits)
    throw std::invalid_argument("qubit count outside supported range");
  StateVector s;
  s.n = n;
  const std::size_t dim = std::size_t{1} << n;
  s.amps.assign(dim, complex{std::pow(2.0, -0.5 * n), 0.0});
  return s;
}

inline StateVector basis_state(int n, std::uint64_t b) {
  if (n < 1 || n > kMaxSimQubits)
    throw std::invalid_argument("qubit count outside supported range");
  StateVector s;
  s.n = n;
  s.amps.assign(std::size_t{1} << n, complex{0.0, 0.0});
  s.amps[b] = complex{1.0, 0.0};
  return s;
}

namespace detail {

/// Maps a qubit-indexed mask (bit q = qubit q) onto amplitude-index bit
/// positions (qubit 0 = most significant).
inline std::uint64_t index_mask(std::uint64_t qubit_mask, int n) {
  std::uint64_t m = 0;
  for (int q = 0; q < n; ++q)
    if ((qubit_mask >> q) & 1) m |= std::uint64_t{1} << (n - 1 - q);
  return m;
}

inline int parity(std::uint64_t v) {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_parityll(v);
#else
  return PauliString::popcount(v) & 1;
#endif
}

}  // namespace detail

/// In-place s <- exp(-i theta P) s = cos(theta) s - i sin(theta) (P s).
///
/// P = i^y X(x) Z(z), so P|b> = i^y (-1)^par(b & z) |b ^ x>. Diagonal
/// strings reduce to a phase per amplitude; otherwise amplitudes are
/// updated in (b, b ^ x) pairs, visiting each pair once via the highest
/// bit of the flip mask.
inline void apply_pauli_rotation_in_place(StateVector& s, const PauliString& p, double theta) {
  if (p.num_qubits() != s.n)
    throw std::invalid_argument("apply_pauli_rotation: qubit count mismatch");
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const std::uint64_t x = detail::index_mask(p.x_bits(), s.n);
  const std::uint64_t z = detail::index_mask(p.z_bits(), s.n);
  const std::size_t dim = s.dim();

  if (x == 0) {
    // exp(-i theta (+/-1)) per amplitude depending on the Z parity.
    const complex plus{c, -sn};
    const complex minus{c, sn};
    for (std::size_t b = 0; b < dim; ++b)
      s.amps[b] *= detail::parity(b & z) ? minus : plus;
    return;
  }

  const int y = PauliString::popcount(p.x_bits() & p.z_bits());
  // f = -i sin(theta) i^y; the per-amplitude phase is then +/- f.
  static const complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const complex f = complex{0.0, -sn} * i_pow[y & 3];
  const int partner_sign_flip = y & 1;  // par(x & z) relates the two phases
  const std::uint64_t pivot = std::uint64_t{1} << (63 - __builtin_clzll(x));

  for (std::size_t b = 0; b < dim; ++b) {
    if (b & pivot) continue;
    const std::size_t bp = b ^ x;
    const int par_b = detail::parity(b & z);
    const int par_bp = par_b ^ partner_sign_flip;
    const complex fb = par_b ? -f : f;    // factor on P|b> -> |bp>
    const complex fbp = par_bp ? -f : f;  // factor on P|bp> -> |b>
    const complex ab = s.amps[b];
    const complex abp = s.amps[bp];
    s.amps[b] = c * ab + fbp * abp;
    s.amps[bp] = c * abp + fb * ab;
  }
}

inline StateVector apply_pauli_rotation(StateVector s, const PauliString& p, double theta) {
  apply_pauli_rotation_in_place(s, p, theta);
  return s;
}

/// <s|P|s> for a single string; building block for expectation values.
inline complex pauli_expectation(const StateVector& s, const PauliString& p) {
  if (p.num_qubits() != s.n) throw std::invalid_argument("pauli_expectation: qubit mismatch");
  const std::uint64_t x = detail::index_mask(p.x_bits(), s.n);
  const std::uint64_t z = detail::index_mask(p.z_bits(), s.n);
  const int y = PauliString::popcount(p.x_bits() & p.z_bits());
  static const complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const complex yphase = i_pow[y & 3];
  complex acc{0.0, 0.0};
  const std::size_t dim = s.dim();
  for (std::size_t b = 0; b < dim; ++b) {
    const complex contrib = yphase * (detail::parity(b & z) ? -s.amps[b] : s.amps[b]);
    acc += std::conj(s.amps[b ^ x]) * contrib;
  }
  return acc;
}

/// <s|H|s> as a real scalar. A non-negligible imaginary part means H was
/// not Hermitian and is reported as an error.
inline double expectation(const StateVector& s, const PauliSum& h) {
  if (h.num_qubits() != s.n) throw std::invalid_argument("expectation: qubit count mismatch");
  complex acc{0.0, 0.0};
  for (const auto& t : h.terms()) acc += t.coeff * pauli_expectation(s, t.string);
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, std::abs(acc.real())))
    throw std::runtime_error("expectation: non-Hermitian observable (imaginary part " +
                             std::to_string(acc.imag()) + ")");
  return acc.real();
}

/// |out> = H |s>, used by the gradient sweep.
inline StateVector apply_paulisum(const StateVector& s, const PauliSum& h) {
  if (h.num_qubits() != s.n) throw std::invalid_argument("apply_paulisum: qubit count mismatch");
  StateVector out;
  out.n = s.n;
  out.amps.assign(s.dim(), complex{0.0, 0.0});
  static const complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : h.terms()) {
    const std::uint64_t x = detail::index_mask(t.string.x_bits(), s.n);
    const std::uint64_t z = detail::index_mask(t.string.z_bits(), s.n);
    const int y = PauliString::popcount(t.string.x_bits() & t.string.z_bits());
    const complex scale = t.coeff * i_pow[y & 3];
    const std::size_t dim = s.dim();
    for (std::size_t b = 0; b < dim; ++b) {
      const complex v = detail::parity(b & z) ? -s.amps[b] : s.amps[b];
      out.amps[b ^ x] += scale * v;
    }
  }
  return out;
}

/// Measurement statistics: exact probabilities (shots == 0) or integer
/// counts from a seeded multinomial draw. Entries are keyed by amplitude
/// index and kept sorted.
struct SampleSet {
  int n = 0;
  long long shots = 0;  // 0 = exact probabilities
  std::vector<std::pair<std::uint64_t, double>> entries;

  double total() const {
    double t = 0;
    for (const auto& [b, v] : entries) t += v;
    return t;
  }
};

inline SampleSet full_distribution(const StateVector& s) {
  SampleSet out;
  out.n = s.n;
  out.shots = 0;
  out.entries.reserve(s.dim());
  for (std::size_t b = 0; b < s.dim(); ++b)
    out.entries.emplace_back(static_cast<std::uint64_t>(b), std::norm(s.amps[b]));
  return out;
}

/// Multinomial sampling by inverse CDF; identical output for identical
/// (state, shots, seed).
inline SampleSet sample(const StateVector& s, long long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  std::vector<double> cdf(s.dim());
  double running = 0;
  for (std::size_t b = 0; b < s.dim(); ++b) {
    running += std::norm(s.amps[b]);
    cdf[b] = running;
  }
  std::vector<long long> counts(s.dim(), 0);
  rng::Stream stream(rng::derive(seed, 0x73616dULL));
  for (long long t = 0; t < shots; ++t) {
    const double u = stream.next_unit() * running;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= counts.size()) idx = counts.size() - 1;
    ++counts[idx];
  }
  SampleSet out;
  out.n = s.n;
  out.shots = shots;
  for (std::size_t b = 0; b < counts.size(); ++b)
    if (counts[b] > 0) out.entries.emplace_back(static_cast<std::uint64_t>(b),
                                                static_cast<double>(counts[b]));
  return out;
}

/// CSV rows `bitstring,probability_or_count`, one per entry.
inline std::string sampleset_to_csv(const SampleSet& set) {
  std::string out = "bitstring,probability_or_count\n";
  char buf[64];
  for (const auto& [b, v] : set.entries) {
    out += bitstring_str(b, set.n);
    std::snprintf(buf, sizeof buf, ",%.17g\n", v);
    out += buf;
  }
  return out;
}

}  // namespace cdpack
