#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdpack {

using complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// An n-qubit Pauli string in the two-bitplane representation: bit q of
/// x_bits / z_bits records an X / Z component on qubit q. X and Z set on
/// the same qubit means Y. Identity everywhere is x_bits == z_bits == 0.
///
/// The string renders with qubit 0 leftmost, so X on qubit 0 of a
/// three-qubit register prints "XII".
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(int n, std::uint64_t x_bits = 0, std::uint64_t z_bits = 0)
      : n_(n), x_(x_bits), z_(z_bits) {
    check_qubit_count(n);
  }

  /// Parses letters such as "IXYZ" (qubit 0 leftmost).
  static PauliString from_letters(const std::string& letters) {
    PauliString p(static_cast<int>(letters.size()));
    for (int q = 0; q < p.n_; ++q) p.set_letter(q, letters[static_cast<std::size_t>(q)]);
    return p;
  }

  /// Single non-identity letter on one qubit of an n-qubit register.
  static PauliString single(int n, int qubit, char letter) {
    PauliString p(n);
    p.set_letter(qubit, letter);
    return p;
  }

  int num_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Number of non-identity letters.
  int weight() const { return popcount(x_ | z_); }

  /// True when every letter is I or Z.
  bool is_diagonal() const { return x_ == 0; }

  char letter(int qubit) const {
    const bool x = (x_ >> qubit) & 1;
    const bool z = (z_ >> qubit) & 1;
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  void set_letter(int qubit, char letter) {
    if (qubit < 0 || qubit >= n_) throw std::out_of_range("qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    x_ &= ~bit;
    z_ &= ~bit;
    switch (letter) {
      case 'I': break;
      case 'X': x_ |= bit; break;
      case 'Y': x_ |= bit; z_ |= bit; break;
      case 'Z': z_ |= bit; break;
      default: throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
    }
  }

  std::string str() const {
    std::string s(static_cast<std::size_t>(n_), 'I');
    for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = letter(q);
    return s;
  }

  bool operator==(const PauliString& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }
  bool operator!=(const PauliString& o) const { return !(*this == o); }

  /// Canonical order: lexicographic on the rendered letters, qubit 0 first,
  /// with I < X < Y < Z. Keeps serialized Hamiltonians byte-stable.
  bool operator<(const PauliString& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    for (int q = 0; q < n_; ++q) {
      const char a = letter(q), b = o.letter(q);
      if (a != b) return a < b;
    }
    return false;
  }

  static int popcount(std::uint64_t v) {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_popcountll(v);
#else
    int c = 0;
    while (v) { v &= v - 1; ++c; }
    return c;
#endif
  }

  static void check_qubit_count(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("qubit count must be in [1, 64]");
  }

 private:
  int n_ = 1;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// One scaled Pauli string; the building block of operator sums.
struct PauliTerm {
  complex coeff{1.0, 0.0};
  PauliString string;

  PauliTerm() = default;
  PauliTerm(complex c, PauliString s) : coeff(c), string(std::move(s)) {}
};

/// A weighted sum of Pauli strings over a fixed register size. Terms are
/// stored in insertion order; `simplify` merges duplicates and sorts
/// canonically.
class PauliSum {
 public:
  explicit PauliSum(int n) : n_(n) { PauliString::check_qubit_count(n); }

  int num_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(complex coeff, const PauliString& s) {
    if (s.num_qubits() != n_) throw std::invalid_argument("term qubit count mismatch");
    terms_.push_back(PauliTerm{coeff, s});
  }

  void add(const PauliTerm& t) { add(t.coeff, t.string); }

  void add(const PauliSum& other) {
    if (other.n_ != n_) throw std::invalid_argument("sum qubit count mismatch");
    for (const auto& t : other.terms_) terms_.push_back(t);
  }

  bool is_diagonal() const {
    for (const auto& t : terms_)
      if (!t.string.is_diagonal()) return false;
    return true;
  }

 private:
  int n_ = 1;
  std::vector<PauliTerm> terms_;
};

/// Phase of a product of two Pauli strings as a power of i, so the result
/// is always one of {+1, +i, -1, -i}.
struct PauliProduct {
  int phase_exponent;  // product phase = i^phase_exponent, exponent in [0, 4)
  PauliString string;

  complex phase() const {
    static const complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_exponent & 3];
  }
};

/// Multiplies two Pauli strings: a * b == phase * product.
///
/// Writing P = i^y X(x) Z(z) with y = |{q : Y on q}| gives the exponent
/// arithmetic (y_a + y_b - y_c) mod 4 plus a sign from commuting Z(z_a)
/// past X(x_b).
inline PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("multiply: qubit count mismatch");
  const std::uint64_t cx = a.x_bits() ^ b.x_bits();
  const std::uint64_t cz = a.z_bits() ^ b.z_bits();
  const int ya = PauliString::popcount(a.x_bits() & a.z_bits());
  const int yb = PauliString::popcount(b.x_bits() & b.z_bits());
  const int yc = PauliString::popcount(cx & cz);
  const int sign_swaps = PauliString::popcount(a.z_bits() & b.x_bits());
  const int exponent = ((ya + yb - yc + 2 * sign_swaps) % 4 + 4) % 4;
  return PauliProduct{exponent, PauliString(a.num_qubits(), cx, cz)};
}

inline bool commutes(const PauliString& a, const PauliString& b) {
  const int s1 = PauliString::popcount(a.x_bits() & b.z_bits());
  const int s2 = PauliString::popcount(a.z_bits() & b.x_bits());
  return ((s1 ^ s2) & 1) == 0;
}

/// Sorts terms canonically, merges equal strings, and drops terms whose
/// coefficient magnitude is <= tol.
inline PauliSum simplify(const PauliSum& s, double tol = 1e-12) {
  if (tol < 0) throw std::invalid_argument("simplify: tol must be >= 0");
  std::vector<PauliTerm> terms = s.terms();
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  PauliSum out(s.num_qubits());
  std::size_t i = 0;
  while (i < terms.size()) {
    complex coeff = terms[i].coeff;
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].string == terms[i].string) {
      coeff += terms[j].coeff;
      ++j;
    }
    if (std::abs(coeff) > tol) out.add(coeff, terms[i].string);
    i = j;
  }
  return out;
}

/// Commutator [a, b] = ab - ba as a simplified sum; empty when the strings
/// commute.
inline PauliSum commutator(const PauliTerm& a, const PauliTerm& b) {
  if (a.string.num_qubits() != b.string.num_qubits())
    throw std::invalid_argument("commutator: qubit count mismatch");
  PauliSum out(a.string.num_qubits());
  if (commutes(a.string, b.string)) return out;
  const PauliProduct ab = multiply(a.string, b.string);
  const PauliProduct ba = multiply(b.string, a.string);
  const complex coeff = a.coeff * b.coeff * (ab.phase() - ba.phase());
  out.add(coeff, ab.string);
  return simplify(out, 0.0);
}

/// First-order nested-commutator structure of the adiabatic gauge
/// potential for H(lambda) = (1-lambda) * h_mixer + lambda * h_cost.
///
/// Because [H, dH/dlambda] collapses to [h_mixer, h_cost] identically in
/// lambda, the first order is i[h_mixer, h_cost] with the scheduling
/// scalar dropped (it is absorbed into the variational parameter). For a
/// transverse-field mixer and a diagonal cost this yields only single-Y
/// and two-qubit YZ/ZY strings.
inline PauliSum nc_first_order(const PauliSum& h_mixer, const PauliSum& h_cost) {
  if (h_mixer.num_qubits() != h_cost.num_qubits())
    throw std::invalid_argument("nc_first_order: qubit count mismatch");
  for (const auto& t : h_mixer.terms()) {
    const bool single_x = t.string.weight() == 1 && t.string.z_bits() == 0;
    if (!single_x)
      throw std::invalid_argument("nc_first_order: mixer must contain only single-qubit X terms");
  }
  if (!h_cost.is_diagonal())
    throw std::invalid_argument("nc_first_order: cost Hamiltonian must be diagonal");

  PauliSum accum(h_mixer.num_qubits());
  const complex i_unit{0.0, 1.0};
  for (const auto& m : h_mixer.terms()) {
    for (const auto& c : h_cost.terms()) {
      PauliSum comm = commutator(m, c);
      for (const auto& t : comm.terms()) accum.add(i_unit * t.coeff, t.string);
    }
  }
  return simplify(accum, 0.0);
}

/// Serializes one term per line as `coeff_re coeff_im STRING` with qubit 0
/// leftmost, in stored term order.
inline std::string to_text(const PauliSum& s) {
  std::string out;
  char buf[80];
  for (const auto& t : s.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", t.coeff.real(), t.coeff.imag());
    out += buf;
    out += t.string.str();
    out += '\n';
  }
  return out;
}

inline PauliSum paulisum_from_text(const std::string& text, int n) {
  PauliSum out(n);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double re = 0, im = 0;
    std::string letters;
    if (!(row >> re >> im >> letters))
      throw std::invalid_argument("paulisum_from_text: malformed line: " + line);
    if (static_cast<int>(letters.size()) != n)
      throw std::invalid_argument("paulisum_from_text: string length mismatch");
    out.add(complex{re, im}, PauliString::from_letters(letters));
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.str(); }

}  // namespace cdpack
