#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qudo/core.hpp"

namespace qudo {

/// Dense state of n qudits with d levels each. Basis indices are mixed-radix
/// big-endian: site 0 is the most significant digit.
struct Statevector {
  int num_sites = 0;
  int local_dim = 0;
  std::vector<std::complex<double>> amplitudes;

  std::uint64_t dimension() const { return amplitudes.size(); }

  double norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes) total += std::norm(a);
    return total;
  }
};

struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int depth() const { return static_cast<int>(gammas.size()); }
};

/// Uniform superposition: the d-dimensional DFT applied to |0> on every site
/// leaves each amplitude at exactly d^(-n/2).
inline Statevector init_uniform(int num_sites, int local_dim,
                                std::uint64_t max_elements = kDefaultElementBudget) {
  if (num_sites < 1 || local_dim < 1)
    throw std::invalid_argument("init_uniform: need at least one site and one level");
  const std::uint64_t dim = pow_u64(local_dim, num_sites);
  if (dim > max_elements)
    throw resource_limit_error("init_uniform: " + std::to_string(dim) +
                                   " amplitudes exceed budget of " + std::to_string(max_elements),
                               dim);
  Statevector state;
  state.num_sites = num_sites;
  state.local_dim = local_dim;
  state.amplitudes.assign(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return state;
}

/// d-dimensional discrete Fourier transform, F[a][k] = omega^(a*k) / sqrt(d)
/// with omega = exp(2*pi*i/d). Row-major.
inline std::vector<std::complex<double>> dft_matrix(int d) {
  std::vector<std::complex<double>> f(static_cast<std::size_t>(d) * d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k)
      f[static_cast<std::size_t>(a) * d + k] =
          std::polar(scale, 2.0 * std::numbers::pi * a * k / d);
  return f;
}

/// exp(-i*beta*(S + S^dagger)) where S|a> = |a+1 mod d>. The DFT diagonalizes
/// the cyclic shift, S|chi_k> = omega^(-k)|chi_k>, so S + S^dagger has
/// eigenvalue 2*cos(2*pi*k/d) on the k-th Fourier vector and
///
///   U[a][b] = (1/d) sum_k omega^((a-b)*k) * exp(-i*2*beta*cos(2*pi*k/d)).
///
/// The result is circulant; only the d distinct diagonals are computed.
/// For d=2 this reduces to exp(-i*beta*2X).
inline std::vector<std::complex<double>> mixer_unitary(int d, double beta) {
  std::vector<std::complex<double>> eigenphase(d);
  for (int k = 0; k < d; ++k)
    eigenphase[k] = std::polar(1.0, -2.0 * beta * std::cos(2.0 * std::numbers::pi * k / d));
  std::vector<std::complex<double>> circulant(d);
  for (int diff = 0; diff < d; ++diff) {
    std::complex<double> sum = 0.0;
    for (int k = 0; k < d; ++k)
      sum += std::polar(1.0, 2.0 * std::numbers::pi * diff * k / d) * eigenphase[k];
    circulant[diff] = sum / static_cast<double>(d);
  }
  std::vector<std::complex<double>> u(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      u[static_cast<std::size_t>(a) * d + b] = circulant[((a - b) % d + d) % d];
  return u;
}

/// Applies a d x d unitary to one site, in place. The site's basis digit has
/// stride d^(n-1-site), so the d amplitudes of each mix group sit that far
/// apart; groups are enumerated as (block base, offset) pairs.
inline void apply_single_site(Statevector& state, std::span<const std::complex<double>> u,
                              int site) {
  const int d = state.local_dim;
  if (site < 0 || site >= state.num_sites)
    throw std::invalid_argument("apply_single_site: site out of range");
  if (u.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("apply_single_site: matrix shape mismatch");

  const std::uint64_t stride = pow_u64(d, state.num_sites - 1 - site);
  const std::uint64_t block = stride * d;
  const std::uint64_t dim = state.dimension();
  std::complex<double>* amp = state.amplitudes.data();
  std::vector<std::complex<double>> mixed(d);

  for (std::uint64_t base = 0; base < dim; base += block) {
    for (std::uint64_t offset = 0; offset < stride; ++offset) {
      std::complex<double>* group = amp + base + offset;
      for (int a = 0; a < d; ++a) {
        std::complex<double> sum = 0.0;
        const std::complex<double>* row = u.data() + static_cast<std::size_t>(a) * d;
        for (int b = 0; b < d; ++b) sum += row[b] * group[b * stride];
        mixed[a] = sum;
      }
      for (int a = 0; a < d; ++a) group[a * stride] = mixed[a];
    }
  }
}

/// Cost layer: amplitude z picks up the phase exp(-i*gamma*diagonal[z]).
inline void apply_cost_phase(Statevector& state, std::span<const double> diagonal, double gamma) {
  if (diagonal.size() != state.dimension())
    throw std::invalid_argument("apply_cost_phase: diagonal length " +
                                std::to_string(diagonal.size()) + " does not match dimension " +
                                std::to_string(state.dimension()));
  for (std::uint64_t z = 0; z < diagonal.size(); ++z)
    state.amplitudes[z] *= std::polar(1.0, -gamma * diagonal[z]);
}

/// Mixer layer: the same single-site unitary exp(-i*beta*(S+S^dagger)) on
/// every site.
inline void apply_mixer_layer(Statevector& state, double beta) {
  const auto u = mixer_unitary(state.local_dim, beta);
  for (int site = 0; site < state.num_sites; ++site) apply_single_site(state, u, site);
}

/// Uniform start, then p alternating cost and mixer layers.
inline Statevector run_circuit(int num_sites, int local_dim, std::span<const double> diagonal,
                               const QaoaParams& params,
                               std::uint64_t max_elements = kDefaultElementBudget) {
  if (params.betas.size() != params.gammas.size())
    throw std::invalid_argument("run_circuit: gamma/beta length mismatch");
  Statevector state = init_uniform(num_sites, local_dim, max_elements);
  for (int layer = 0; layer < params.depth(); ++layer) {
    apply_cost_phase(state, diagonal, params.gammas[layer]);
    apply_mixer_layer(state, params.betas[layer]);
  }
  return state;
}

/// <H> = sum_z |amp_z|^2 * diagonal[z].
inline double expectation(const Statevector& state, std::span<const double> diagonal) {
  if (diagonal.size() != state.dimension())
    throw std::invalid_argument("expectation: diagonal length mismatch");
  double value = 0.0;
  for (std::uint64_t z = 0; z < diagonal.size(); ++z)
    value += std::norm(state.amplitudes[z]) * diagonal[z];
  return value;
}

/// Total probability mass on a set of basis indices.
inline double probability_of(const Statevector& state, std::span<const std::uint64_t> indices) {
  double total = 0.0;
  for (std::uint64_t z : indices) {
    if (z >= state.dimension())
      throw std::invalid_argument("probability_of: index " + std::to_string(z) + " out of range");
    total += std::norm(state.amplitudes[z]);
  }
  return total;
}

}  // namespace qudo
