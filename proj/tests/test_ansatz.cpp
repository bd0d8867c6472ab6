#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cdpack/ansatz.hpp"
#include "cdpack/encoding.hpp"
#include "support/dense.hpp"

using namespace cdpack;

namespace {

struct TestSetup {
  CostHamiltonian cost_h;
  PauliSum mixer;
  PauliSum cd;

  explicit TestSetup(const BppInstance& inst, double k = 2)
      : cost_h(build_cost_hamiltonian(inst, EncodingParams(inst, k, delta_omega(inst), 1.0))),
        mixer(build_mixer(inst.num_items())),
        cd(build_cd_pool(inst.num_items())) {}
};

dense::Matrix circuit_unitary(const Circuit& c, const std::vector<double>& params) {
  dense::Matrix u = dense::identity(std::size_t{1} << c.n);
  for (const auto& g : c.gates) {
    const double angle = params[static_cast<std::size_t>(g.slot)] * g.coeff;
    u = dense::matmul(dense::pauli_rotation_matrix(g.generator, angle), u);
  }
  return u;
}

std::vector<dense::complexd> to_dense(const StateVector& s) {
  return {s.amps.begin(), s.amps.end()};
}

}  // namespace

TEST_CASE("parameters per layer", "[ansatz]") {
  CHECK(params_per_layer(AnsatzKind::qaoa) == 2);
  CHECK(params_per_layer(AnsatzKind::dc_qaoa) == 3);
  CHECK(params_per_layer(AnsatzKind::cd_inspired) == 1);
  CHECK(params_per_layer(AnsatzKind::cd_mixer) == 2);
  CHECK(ansatz_from_name("dcqaoa") == AnsatzKind::dc_qaoa);
  CHECK(ansatz_name(AnsatzKind::cd_inspired) == "cd");
  CHECK_THROWS_AS(ansatz_from_name("nope"), std::invalid_argument);
}

TEST_CASE("qaoa circuit structure n=2 p=1", "[ansatz]") {
  const BppInstance inst({2, 3}, 4);
  const TestSetup s(inst);
  const Circuit c = build_circuit(AnsatzKind::qaoa, s.cost_h.hamiltonian, s.mixer, s.cd, 1);
  CHECK(c.param_count == 2);
  REQUIRE(c.gates.size() == 5);
  CHECK(c.gates[0].generator.str() == "IZ");
  CHECK(c.gates[1].generator.str() == "ZI");
  CHECK(c.gates[2].generator.str() == "ZZ");
  for (int g = 0; g < 3; ++g) CHECK(c.gates[static_cast<std::size_t>(g)].slot == 0);
  CHECK(c.gates[3].generator.str() == "XI");
  CHECK(c.gates[4].generator.str() == "IX");
  CHECK(c.gates[3].slot == 1);
  CHECK(c.gates[4].slot == 1);
}

TEST_CASE("cd-inspired circuit n=2 p=3", "[ansatz]") {
  const BppInstance inst({2, 3}, 4);
  const TestSetup s(inst);
  const Circuit c = build_circuit(AnsatzKind::cd_inspired, s.cost_h.hamiltonian, s.mixer, s.cd, 3);
  CHECK(c.param_count == 3);
  CHECK(c.gates.size() == 12);  // 4 pool gates per layer
  CHECK(c.gates[0].slot == 0);
  CHECK(c.gates[4].slot == 1);
  CHECK(c.gates[8].slot == 2);
}

TEST_CASE("dc-qaoa circuit n=2 p=1", "[ansatz]") {
  const BppInstance inst({2, 3}, 4);
  const TestSetup s(inst);
  const Circuit c = build_circuit(AnsatzKind::dc_qaoa, s.cost_h.hamiltonian, s.mixer, s.cd, 1);
  CHECK(c.param_count == 3);
  CHECK(c.gates.size() == 4 + 3 + 2);
  // CD block first (gamma), then cost (alpha), then mixer (beta)
  CHECK(c.gates[0].generator.str() == "YZ");
  CHECK(c.gates[0].slot == 0);
  CHECK(c.gates[4].generator.str() == "IZ");
  CHECK(c.gates[4].slot == 1);
  CHECK(c.gates[7].generator.str() == "XI");
  CHECK(c.gates[7].slot == 2);
}

TEST_CASE("zero parameters leave the plus state untouched", "[ansatz]") {
  const BppInstance inst({2, 3, 4}, 5);
  const TestSetup s(inst);
  for (AnsatzKind kind : {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                          AnsatzKind::cd_mixer}) {
    const Circuit c = build_circuit(kind, s.cost_h.hamiltonian, s.mixer, s.cd, 2);
    const std::vector<double> zeros(static_cast<std::size_t>(c.param_count), 0.0);
    const StateVector out = evaluate(c, zeros);
    const StateVector plus = init_plus(3);
    CHECK(dense::max_abs_diff(to_dense(out), to_dense(plus)) == 0.0);
  }
}

TEST_CASE("single-qubit qaoa closed form", "[ansatz]") {
  // One item, H_c = h Z with h = w(-A/2 + B(C - w/2)).
  const BppInstance inst({2}, 4);
  const EncodingParams p(inst, 2, 1, 1.0);
  const CostHamiltonian ch = build_cost_hamiltonian(inst, p);
  REQUIRE(ch.hamiltonian.size() == 1);
  const double h = ch.hamiltonian.terms()[0].coeff.real();

  const PauliSum mixer = build_mixer(1);
  const PauliSum cd = build_cd_pool(1);
  const Circuit c = build_circuit(AnsatzKind::qaoa, ch.hamiltonian, mixer, cd, 1);
  const double alpha = 0.31;
  const StateVector out = evaluate(c, {alpha, 0.0});
  const double angle = alpha * h;
  CHECK(std::abs(out.amps[0] - std::exp(complex{0, -angle}) / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(out.amps[1] - std::exp(complex{0, angle}) / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("evaluate matches dense gate products", "[ansatz][property]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  const BppInstance inst({2, 3, 4, 5}, 9);
  const TestSetup s(inst, 3);
  for (AnsatzKind kind : {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                          AnsatzKind::cd_mixer}) {
    for (int p = 1; p <= 2; ++p) {
      const Circuit c = build_circuit(kind, s.cost_h.hamiltonian, s.mixer, s.cd, p);
      std::vector<double> params(static_cast<std::size_t>(c.param_count));
      for (auto& v : params) v = angle(rng);

      const auto u = circuit_unitary(c, params);
      const auto expected = dense::matvec(u, to_dense(init_plus(4)));
      const auto got = evaluate(c, params);
      CHECK(dense::max_abs_diff(expected, to_dense(got)) < 1e-10);
    }
  }
}

TEST_CASE("compiled execution agrees with the gate-by-gate path", "[ansatz]") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  const BppInstance inst({2, 3, 4, 5, 6}, 11);
  const TestSetup s(inst, 4);
  for (AnsatzKind kind : {AnsatzKind::qaoa, AnsatzKind::dc_qaoa, AnsatzKind::cd_inspired,
                          AnsatzKind::cd_mixer}) {
    const Circuit c = build_circuit(kind, s.cost_h.hamiltonian, s.mixer, s.cd, 2);
    const CompiledCircuit cc = compile(c);
    std::vector<double> params(static_cast<std::size_t>(c.param_count));
    for (auto& v : params) v = angle(rng);

    StateVector fast = init_plus(5);
    run_compiled(cc, params, fast);
    const StateVector slow = evaluate(c, params);
    CHECK(dense::max_abs_diff(to_dense(fast), to_dense(slow)) < 1e-12);
  }
}

TEST_CASE("diagonal cost layer equals the exact exponential", "[ansatz]") {
  // All cost rotations commute, so the layer is exactly exp(-i alpha H_c).
  const BppInstance inst({2, 3, 4}, 6);
  const TestSetup s(inst);
  const Circuit c = build_circuit(AnsatzKind::qaoa, s.cost_h.hamiltonian, s.mixer, s.cd, 1);
  const double alpha = 0.47;
  const auto u = circuit_unitary(c, {alpha, 0.0});

  const auto hm = dense::paulisum_matrix(s.cost_h.hamiltonian);
  dense::Matrix exact(hm.dim);
  for (std::size_t b = 0; b < hm.dim; ++b) {
    const double e = hm.at(b, b).real();
    exact.at(b, b) = std::exp(dense::complexd{0, -alpha * e});
  }
  CHECK(dense::max_abs_diff(u, exact) < 1e-10);
}

TEST_CASE("cost at zero parameters is the diagonal mean", "[ansatz]") {
  const BppInstance inst({2, 3}, 4);
  const TestSetup s(inst);
  const Circuit c = build_circuit(AnsatzKind::qaoa, s.cost_h.hamiltonian, s.mixer, s.cd, 1);
  double mean = 0;
  for (std::uint64_t b = 0; b < 4; ++b) mean += diagonal_value(s.cost_h.hamiltonian, b);
  mean /= 4.0;
  CHECK(cost(c, {0.0, 0.0}, s.cost_h.hamiltonian) == Catch::Approx(mean));
}

TEST_CASE("cd-mixer reaches the single-qubit ground state on a grid", "[ansatz]") {
  // H_c = Z, CD pool = {Y}, mixer = {X}: scan both angles for min <Z>.
  PauliSum z(1);
  z.add(complex{1, 0}, PauliString::from_letters("Z"));
  const PauliSum mixer = build_mixer(1);
  const PauliSum cd = build_cd_pool(1);
  const Circuit c = build_circuit(AnsatzKind::cd_mixer, z, mixer, cd, 1);

  double best = 1e9;
  const int grid = 60;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double gamma = kTwoPi * i / grid;
      const double beta = kTwoPi * j / grid;
      best = std::min(best, cost(c, {gamma, beta}, z));
    }
  CHECK(best < -0.99);
}

TEST_CASE("parameter count mismatches are rejected", "[ansatz]") {
  const BppInstance inst({2, 3}, 4);
  const TestSetup s(inst);
  const Circuit c = build_circuit(AnsatzKind::qaoa, s.cost_h.hamiltonian, s.mixer, s.cd, 1);
  CHECK_THROWS_AS(evaluate(c, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_circuit(AnsatzKind::qaoa, s.cost_h.hamiltonian, s.mixer, s.cd, 0),
                  std::invalid_argument);
}

TEST_CASE("circuit dump format", "[ansatz][io]") {
  PauliSum z(1);
  z.add(complex{-0.5, 0}, PauliString::from_letters("Z"));
  const Circuit c = build_circuit(AnsatzKind::qaoa, z, build_mixer(1), build_cd_pool(1), 1);
  CHECK(dump_circuit(c) == "ROT Z -0.5 0\nROT X 1 1\n");
}
