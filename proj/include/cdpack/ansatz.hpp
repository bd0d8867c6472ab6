#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdpack/pauli.hpp"
#include "cdpack/statevector.hpp"

namespace cdpack {

/// The four circuit families. Parameters per layer: QAOA 2 (alpha, beta),
/// DC-QAOA 3 (alpha, beta, gamma), CD-inspired 1 (gamma), CD-mixer 2
/// (beta, gamma).
enum class AnsatzKind { qaoa, dc_qaoa, cd_inspired, cd_mixer };

inline int params_per_layer(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::qaoa: return 2;
    case AnsatzKind::dc_qaoa: return 3;
    case AnsatzKind::cd_inspired: return 1;
    case AnsatzKind::cd_mixer: return 2;
  }
  throw std::invalid_argument("unknown ansatz kind");
}

inline std::string ansatz_name(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::qaoa: return "qaoa";
    case AnsatzKind::dc_qaoa: return "dcqaoa";
    case AnsatzKind::cd_inspired: return "cd";
    case AnsatzKind::cd_mixer: return "cdmixer";
  }
  throw std::invalid_argument("unknown ansatz kind");
}

inline AnsatzKind ansatz_from_name(const std::string& name) {
  if (name == "qaoa") return AnsatzKind::qaoa;
  if (name == "dcqaoa") return AnsatzKind::dc_qaoa;
  if (name == "cd") return AnsatzKind::cd_inspired;
  if (name == "cdmixer") return AnsatzKind::cd_mixer;
  throw std::invalid_argument("unknown ansatz name: " + name +
                              " (expected qaoa|dcqaoa|cd|cdmixer)");
}

/// One rotation exp(-i theta c P): generator P, term coefficient c, and
/// the shared layer parameter theta it is bound to.
struct Gate {
  PauliString generator;
  double coeff = 1.0;
  int slot = 0;
};

/// An ordered rotation program. Within each layer, parameter slots follow
/// application order; e.g. a DC-QAOA layer consumes (gamma, alpha, beta).
struct Circuit {
  AnsatzKind kind = AnsatzKind::qaoa;
  int n = 0;
  int layers = 0;
  int param_count = 0;
  std::vector<Gate> gates;
};

/// Assembles one of the four ansatz programs. Per layer the Hamiltonian
/// exponentials appear in the order the defining operator applies them to
/// the state (cost before mixer, CD before both), each realized as a
/// first-order product over its terms with every rotation bound to that
/// layer's shared parameter.
inline Circuit build_circuit(AnsatzKind kind, const PauliSum& h_cost, const PauliSum& h_mixer,
                             const PauliSum& h_cd, int layers) {
  const int n = h_cost.num_qubits();
  if (h_mixer.num_qubits() != n || h_cd.num_qubits() != n)
    throw std::invalid_argument("build_circuit: Hamiltonian qubit counts differ");
  if (layers < 1) throw std::invalid_argument("build_circuit: need at least one layer");

  Circuit c;
  c.kind = kind;
  c.n = n;
  c.layers = layers;
  c.param_count = params_per_layer(kind) * layers;

  const auto emit = [&c](const PauliSum& h, int slot) {
    for (const auto& t : h.terms()) {
      if (std::abs(t.coeff.imag()) > 1e-12)
        throw std::invalid_argument("build_circuit: Hamiltonian coefficients must be real");
      c.gates.push_back(Gate{t.string, t.coeff.real(), slot});
    }
  };

  for (int j = 0; j < layers; ++j) {
    const int base = j * params_per_layer(kind);
    switch (kind) {
      case AnsatzKind::qaoa:
        emit(h_cost, base + 0);   // alpha_j
        emit(h_mixer, base + 1);  // beta_j
        break;
      case AnsatzKind::dc_qaoa:
        emit(h_cd, base + 0);     // gamma_j
        emit(h_cost, base + 1);   // alpha_j
        emit(h_mixer, base + 2);  // beta_j
        break;
      case AnsatzKind::cd_inspired:
        emit(h_cd, base + 0);  // gamma_j
        break;
      case AnsatzKind::cd_mixer:
        emit(h_cd, base + 0);     // gamma_j
        emit(h_mixer, base + 1);  // beta_j
        break;
    }
  }
  return c;
}

/// Executable form of a circuit. Runs of consecutive diagonal rotations
/// sharing a parameter slot are fused into a single precomputed phase
/// profile; the fusion is exact because diagonal rotations commute. All
/// other gates stay individual Pauli rotations.
struct CompiledCircuit {
  struct Op {
    bool fused_diagonal = false;
    int slot = 0;
    // fused: phase profile D with op = exp(-i theta D)
    std::vector<double> diag;
    // plain rotation
    PauliString generator;
    double coeff = 1.0;
  };

  int n = 0;
  int param_count = 0;
  std::vector<Op> ops;
};

inline CompiledCircuit compile(const Circuit& c) {
  CompiledCircuit cc;
  cc.n = c.n;
  cc.param_count = c.param_count;
  const std::size_t dim = std::size_t{1} << c.n;

  std::size_t g = 0;
  while (g < c.gates.size()) {
    const Gate& gate = c.gates[g];
    // Fuse only genuine runs; a lone diagonal gate is cheaper unfused.
    if (gate.generator.is_diagonal() && g + 1 < c.gates.size() &&
        c.gates[g + 1].generator.is_diagonal() && c.gates[g + 1].slot == gate.slot) {
      CompiledCircuit::Op op;
      op.fused_diagonal = true;
      op.slot = gate.slot;
      op.diag.assign(dim, 0.0);
      while (g < c.gates.size() && c.gates[g].generator.is_diagonal() &&
             c.gates[g].slot == gate.slot) {
        const std::uint64_t z = detail::index_mask(c.gates[g].generator.z_bits(), c.n);
        const double coeff = c.gates[g].coeff;
        for (std::size_t b = 0; b < dim; ++b)
          op.diag[b] += detail::parity(b & z) ? -coeff : coeff;
        ++g;
      }
      cc.ops.push_back(std::move(op));
    } else {
      CompiledCircuit::Op op;
      op.slot = gate.slot;
      op.generator = gate.generator;
      op.coeff = gate.coeff;
      cc.ops.push_back(std::move(op));
      ++g;
    }
  }
  return cc;
}

namespace detail {

inline void apply_diag_phase(StateVector& s, const std::vector<double>& diag, double theta) {
  const std::size_t dim = s.dim();
  for (std::size_t b = 0; b < dim; ++b) {
    const double phi = theta * diag[b];
    s.amps[b] *= complex{std::cos(phi), -std::sin(phi)};
  }
}

}  // namespace detail

inline void run_compiled(const CompiledCircuit& cc, const std::vector<double>& params,
                         StateVector& s) {
  if (static_cast<int>(params.size()) != cc.param_count)
    throw std::invalid_argument("parameter count mismatch");
  for (const auto& op : cc.ops) {
    if (op.fused_diagonal)
      detail::apply_diag_phase(s, op.diag, params[static_cast<std::size_t>(op.slot)]);
    else
      apply_pauli_rotation_in_place(s, op.generator,
                                    params[static_cast<std::size_t>(op.slot)] * op.coeff);
  }
}

/// Evolves the uniform superposition through all gates in order.
inline StateVector evaluate(const Circuit& c, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != c.param_count)
    throw std::invalid_argument("evaluate: parameter count mismatch");
  StateVector s = init_plus(c.n);
  for (const auto& g : c.gates)
    apply_pauli_rotation_in_place(s, g.generator, params[static_cast<std::size_t>(g.slot)] * g.coeff);
  return s;
}

/// Variational cost <psi(params)| H |psi(params)>.
inline double cost(const Circuit& c, const std::vector<double>& params, const PauliSum& h_cost) {
  return expectation(evaluate(c, params), h_cost);
}

/// Text dump: one line `ROT <pauli-string> <coeff> <param-slot>` per gate.
inline std::string dump_circuit(const Circuit& c) {
  std::string out;
  char buf[64];
  for (const auto& g : c.gates) {
    out += "ROT ";
    out += g.generator.str();
    std::snprintf(buf, sizeof buf, " %.17g %d\n", g.coeff, g.slot);
    out += buf;
  }
  return out;
}

}  // namespace cdpack
