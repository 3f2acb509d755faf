#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qudo/core.hpp"
#include "qudo/simulator.hpp"

using namespace qudo;
using Catch::Approx;

namespace {

Eigen::MatrixXcd as_eigen(const std::vector<std::complex<double>>& m, int d) {
  Eigen::MatrixXcd out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out(a, b) = m[static_cast<std::size_t>(a) * d + b];
  return out;
}

/// Reference mixer: exp(-i*beta*(S + S^dagger)) by dense matrix exponential,
/// with S the cyclic shift S|a> = |a+1 mod d>.
Eigen::MatrixXcd mixer_reference(int d, double beta) {
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a) shift((a + 1) % d, a) = 1.0;
  const Eigen::MatrixXcd h = shift + shift.adjoint();
  return (std::complex<double>(0.0, -beta) * h).exp();
}

Statevector random_state(int sites, int d, std::uint64_t seed) {
  Statevector state = init_uniform(sites, d);
  std::mt19937_64 rng(seed);
  double norm = 0.0;
  for (auto& a : state.amplitudes) {
    a = {uniform_double(rng) - 0.5, uniform_double(rng) - 0.5};
    norm += std::norm(a);
  }
  for (auto& a : state.amplitudes) a /= std::sqrt(norm);
  return state;
}

}  // namespace

TEST_CASE("uniform start state has exact amplitudes", "[simulator]") {
  const Statevector state = init_uniform(3, 5);
  REQUIRE(state.dimension() == 125);
  const double expected = 1.0 / std::sqrt(125.0);
  for (const auto& a : state.amplitudes) {
    CHECK(a.real() == expected);  // assigned, not accumulated: exact
    CHECK(a.imag() == 0.0);
  }
  CHECK(state.norm_squared() == Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(init_uniform(30, 3, 1000), resource_limit_error);
}

TEST_CASE("dft matrices are unitary", "[simulator]") {
  for (int d : {2, 3, 4, 5, 7}) {
    const Eigen::MatrixXcd f = as_eigen(dft_matrix(d), d);
    const Eigen::MatrixXcd gram = f * f.adjoint();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        CHECK(std::abs(gram(a, b) - (a == b ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("mixer matches the dense matrix exponential", "[simulator]") {
  for (int d : {2, 3, 4, 5, 7}) {
    for (double beta : {0.0, 0.1, 0.7, 1.9, 3.0}) {
      const Eigen::MatrixXcd u = as_eigen(mixer_unitary(d, beta), d);
      const Eigen::MatrixXcd ref = mixer_reference(d, beta);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) CHECK(std::abs(u(a, b) - ref(a, b)) < 1e-10);
    }
  }
}

TEST_CASE("qubit mixer reduces to a transverse-field rotation", "[simulator]") {
  // For d=2, S + S^dagger = 2X, so U = cos(2b) I - i sin(2b) X.
  const double beta = 0.43;
  const auto u = mixer_unitary(2, beta);
  CHECK(std::abs(u[0] - std::complex<double>(std::cos(2 * beta), 0)) < 1e-12);
  CHECK(std::abs(u[1] - std::complex<double>(0, -std::sin(2 * beta))) < 1e-12);
  CHECK(std::abs(u[2] - std::complex<double>(0, -std::sin(2 * beta))) < 1e-12);
  CHECK(std::abs(u[3] - std::complex<double>(std::cos(2 * beta), 0)) < 1e-12);
}

TEST_CASE("mixer layers preserve the norm", "[simulator]") {
  for (int d : {2, 3, 5}) {
    Statevector state = random_state(3, d, 77 + d);
    apply_mixer_layer(state, 0.91);
    apply_mixer_layer(state, -2.3);
    CHECK(state.norm_squared() == Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("single-site application follows big-endian strides", "[simulator]") {
  // Flip site 0 of a 2-qubit register: |00> -> |10>, i.e. index 0 -> index 2.
  Statevector state = init_uniform(2, 2);
  state.amplitudes = {1.0, 0.0, 0.0, 0.0};
  const std::vector<std::complex<double>> flip = {0.0, 1.0, 1.0, 0.0};
  apply_single_site(state, flip, 0);
  CHECK(std::abs(state.amplitudes[2] - 1.0) < 1e-15);
  CHECK(std::abs(state.amplitudes[0]) < 1e-15);

  // Same flip on site 1 moves |00> to |01> (index 1).
  state.amplitudes = {1.0, 0.0, 0.0, 0.0};
  apply_single_site(state, flip, 1);
  CHECK(std::abs(state.amplitudes[1] - 1.0) < 1e-15);
}

TEST_CASE("single-site application matches a dense operator", "[simulator]") {
  const int n = 3, d = 3;
  const auto u = mixer_unitary(d, 0.61);
  for (int site = 0; site < n; ++site) {
    Statevector state = random_state(n, d, 900 + site);
    const std::vector<std::complex<double>> before = state.amplitudes;
    apply_single_site(state, u, site);

    // Dense oracle: out[z] = sum_b U[digit_site(z)][b] * in[z with digit b].
    const std::uint64_t dim = state.dimension();
    for (std::uint64_t z = 0; z < dim; ++z) {
      Assignment digits = index_to_assignment(z, n, d);
      std::complex<double> expected = 0.0;
      const int a = digits[site];
      for (int b = 0; b < d; ++b) {
        digits[site] = b;
        expected += u[static_cast<std::size_t>(a) * d + b] *
                    before[assignment_to_index(digits, d)];
      }
      CHECK(std::abs(state.amplitudes[z] - expected) < 1e-12);
    }
  }
}

TEST_CASE("cost phases are diagonal and additive", "[simulator]") {
  std::mt19937_64 rng(5);
  std::vector<double> diag(27);
  for (auto& v : diag) v = uniform_double(rng) * 10.0 - 5.0;

  Statevector state = random_state(3, 3, 44);
  const Statevector before = state;
  apply_cost_phase(state, diag, 0.37);
  for (std::uint64_t z = 0; z < 27; ++z) {
    const auto expected = before.amplitudes[z] * std::polar(1.0, -0.37 * diag[z]);
    CHECK(std::abs(state.amplitudes[z] - expected) < 1e-14);
  }

  // gamma1 then gamma2 equals gamma1 + gamma2.
  Statevector two_step = before;
  apply_cost_phase(two_step, diag, 0.2);
  apply_cost_phase(two_step, diag, 0.5);
  Statevector one_step = before;
  apply_cost_phase(one_step, diag, 0.7);
  for (std::uint64_t z = 0; z < 27; ++z)
    CHECK(std::abs(two_step.amplitudes[z] - one_step.amplitudes[z]) < 1e-12);
}

TEST_CASE("identity circuit leaves the uniform state alone", "[simulator]") {
  std::vector<double> diag(16, 0.0);
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = static_cast<double>(i);
  const QaoaParams params{{0.0}, {0.0}};
  const Statevector state = run_circuit(2, 4, diag, params);
  const double expected = 1.0 / 4.0;
  for (const auto& a : state.amplitudes) CHECK(std::abs(a - expected) < 1e-12);
}

TEST_CASE("circuits preserve the norm at depth", "[simulator]") {
  std::mt19937_64 rng(9);
  std::vector<double> diag(3 * 3 * 3 * 3);
  for (auto& v : diag) v = uniform_double(rng) * 8.0;
  QaoaParams params;
  for (int layer = 0; layer < 4; ++layer) {
    params.gammas.push_back(uniform_double(rng) * 6.0);
    params.betas.push_back(uniform_double(rng) * 3.0);
  }
  const Statevector state = run_circuit(4, 3, diag, params);
  CHECK(state.norm_squared() == Approx(1.0).margin(1e-10));
}

TEST_CASE("expectation and event probability", "[simulator]") {
  std::vector<double> diag = {1.0, 2.0, 3.0, 4.0};
  Statevector state = init_uniform(2, 2);
  CHECK(expectation(state, diag) == Approx(2.5).margin(1e-12));

  state.amplitudes = {0.0, 0.0, 1.0, 0.0};
  CHECK(expectation(state, diag) == Approx(3.0).margin(1e-12));

  state.amplitudes = {0.6, 0.0, 0.8, 0.0};
  const std::vector<std::uint64_t> events = {0, 2};
  CHECK(probability_of(state, events) == Approx(1.0).margin(1e-12));
  const std::vector<std::uint64_t> only_two = {2};
  CHECK(probability_of(state, only_two) == Approx(0.64).margin(1e-12));
}

TEST_CASE("qaoa amplifies the ground state on a toy diagonal", "[simulator]") {
  // One deep minimum at index 5 of a 2-site qutrit register; a single layer
  // with small angles must already bias probability toward it.
  std::vector<double> diag(9, 4.0);
  diag[5] = 0.0;
  const QaoaParams params{{0.7}, {0.5}};
  const Statevector state = run_circuit(2, 3, diag, params);
  const double uniform_mass = 1.0 / 9.0;
  CHECK(std::norm(state.amplitudes[5]) > uniform_mass * 2.0);
  double best = 0.0;
  for (std::uint64_t z = 0; z < 9; ++z) best = std::max(best, std::norm(state.amplitudes[z]));
  CHECK(std::norm(state.amplitudes[5]) == Approx(best));
}
