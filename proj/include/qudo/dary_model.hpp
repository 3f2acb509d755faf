#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qudo/core.hpp"

namespace qudo {

/// Quadratic model over n sites with d values each:
///
///   E(v) = offset + sum_j L[j][v_j] + sum_{j<k} W[j,k][v_j][v_k]
///
/// Couplings are stored once per unordered site pair under j < k; adding a
/// term with j > k transposes the value table so both call orders accumulate
/// into the same entry. Same-site "pairs" collapse to linear terms, because
/// delta(v_j = a) * delta(v_j = b) is zero unless a == b.
struct DAryQuadraticModel {
  int num_sites = 0;
  int local_dim = 0;
  double offset = 0.0;
  /// Linear coefficients, indexed [site * local_dim + value].
  std::vector<double> linear;
  /// Per-pair d x d coefficient tables, indexed [a * local_dim + b] where a is
  /// the value of the smaller site.
  std::map<std::pair<int, int>, std::vector<double>> quadratic;

  DAryQuadraticModel() = default;

  DAryQuadraticModel(int sites, int dim) : num_sites(sites), local_dim(dim) {
    if (sites < 1 || dim < 1)
      throw std::invalid_argument("DAryQuadraticModel: need at least one site and one value");
    linear.assign(static_cast<std::size_t>(sites) * dim, 0.0);
  }

  std::uint64_t dimension() const { return pow_u64(local_dim, num_sites); }

  void add_linear(int site, int value, double coeff) {
    check_site(site);
    check_value(value);
    linear[static_cast<std::size_t>(site) * local_dim + value] += coeff;
  }

  void add_coupling(int site_a, int site_b, int value_a, int value_b, double coeff) {
    check_site(site_a);
    check_site(site_b);
    check_value(value_a);
    check_value(value_b);
    if (site_a == site_b) {
      if (value_a == value_b) add_linear(site_a, value_a, coeff);
      return;
    }
    if (site_a > site_b) {
      std::swap(site_a, site_b);
      std::swap(value_a, value_b);
    }
    auto& table = quadratic[{site_a, site_b}];
    if (table.empty()) table.assign(static_cast<std::size_t>(local_dim) * local_dim, 0.0);
    table[static_cast<std::size_t>(value_a) * local_dim + value_b] += coeff;
  }

  double evaluate(std::span<const int> values) const {
    if (static_cast<int>(values.size()) != num_sites)
      throw std::invalid_argument("evaluate: expected " + std::to_string(num_sites) +
                                  " values, got " + std::to_string(values.size()));
    for (int v : values) check_value(v);
    double energy = offset;
    for (int j = 0; j < num_sites; ++j)
      energy += linear[static_cast<std::size_t>(j) * local_dim + values[j]];
    for (const auto& [sites, table] : quadratic)
      energy += table[static_cast<std::size_t>(values[sites.first]) * local_dim +
                      values[sites.second]];
    return energy;
  }

  /// Dense energy table over all d^n assignments in big-endian index order.
  ///
  /// Built by depth-first recursion over sites, carrying the partial energy of
  /// the fixed prefix, so each coupling is touched once per prefix instead of
  /// once per completed assignment. Leaves are emitted in lexicographic order,
  /// which is exactly ascending basis-index order.
  std::vector<double> build_diagonal(std::uint64_t max_elements = kDefaultElementBudget) const {
    const std::uint64_t dim = dimension();
    if (dim > max_elements)
      throw resource_limit_error("build_diagonal: " + std::to_string(dim) +
                                     " elements exceed budget of " + std::to_string(max_elements),
                                 dim);

    // For each site k, the couplings (j, k) with j < k, so a site's
    // contribution is final once all earlier digits are fixed.
    struct Partner {
      int site;
      const double* table;
    };
    std::vector<std::vector<Partner>> partners(num_sites);
    for (const auto& [sites, table] : quadratic)
      partners[sites.second].push_back({sites.first, table.data()});

    std::vector<double> diagonal(dim);
    std::vector<int> digits(num_sites, 0);
    std::uint64_t next_index = 0;
    const int d = local_dim;

    auto descend = [&](auto&& self, int site, double partial) -> void {
      if (site == num_sites) {
        diagonal[next_index++] = partial;
        return;
      }
      const double* site_linear = linear.data() + static_cast<std::size_t>(site) * d;
      for (int value = 0; value < d; ++value) {
        double energy = partial + site_linear[value];
        for (const Partner& p : partners[site])
          energy += p.table[static_cast<std::size_t>(digits[p.site]) * d + value];
        digits[site] = value;
        self(self, site + 1, energy);
      }
    };
    descend(descend, 0, offset);
    return diagonal;
  }

 private:
  void check_site(int site) const {
    if (site < 0 || site >= num_sites)
      throw std::invalid_argument("site " + std::to_string(site) + " out of range");
  }
  void check_value(int value) const {
    if (value < 0 || value >= local_dim)
      throw std::invalid_argument("value " + std::to_string(value) + " out of range");
  }
};

/// Binary quadratic model, E(x) = offset + sum_{i<=j} Q[i][j] x_i x_j with
/// x in {0,1}^n. Diagonal entries are linear terms since x^2 = x.
struct QuboModel {
  int num_vars = 0;
  double offset = 0.0;
  /// Upper-triangular coefficients, row-major; entries with i > j stay zero.
  std::vector<double> coeffs;

  QuboModel() = default;

  explicit QuboModel(int vars) : num_vars(vars) {
    if (vars < 1) throw std::invalid_argument("QuboModel: need at least one variable");
    coeffs.assign(static_cast<std::size_t>(vars) * vars, 0.0);
  }

  void add(int i, int j, double coeff) {
    check_var(i);
    check_var(j);
    if (i > j) std::swap(i, j);
    coeffs[static_cast<std::size_t>(i) * num_vars + j] += coeff;
  }

  double coefficient(int i, int j) const {
    check_var(i);
    check_var(j);
    if (i > j) std::swap(i, j);
    return coeffs[static_cast<std::size_t>(i) * num_vars + j];
  }

  double evaluate(std::span<const int> bits) const {
    if (static_cast<int>(bits.size()) != num_vars)
      throw std::invalid_argument("evaluate: expected " + std::to_string(num_vars) +
                                  " bits, got " + std::to_string(bits.size()));
    for (int b : bits)
      if (b != 0 && b != 1) throw std::invalid_argument("evaluate: bits must be 0 or 1");
    double energy = offset;
    for (int i = 0; i < num_vars; ++i) {
      if (!bits[i]) continue;
      const double* row = coeffs.data() + static_cast<std::size_t>(i) * num_vars;
      energy += row[i];
      for (int j = i + 1; j < num_vars; ++j)
        if (bits[j]) energy += row[j];
    }
    return energy;
  }

  /// The same model as a d=2 DAryQuadraticModel (qubit register), energies
  /// preserved exactly: Q[i][i] becomes a linear coefficient on value 1 and
  /// Q[i][j] a coupling on the value pair (1, 1).
  DAryQuadraticModel to_dary() const {
    DAryQuadraticModel model(num_vars, 2);
    model.offset = offset;
    for (int i = 0; i < num_vars; ++i) {
      const double* row = coeffs.data() + static_cast<std::size_t>(i) * num_vars;
      if (row[i] != 0.0) model.add_linear(i, 1, row[i]);
      for (int j = i + 1; j < num_vars; ++j)
        if (row[j] != 0.0) model.add_coupling(i, j, 1, 1, row[j]);
    }
    return model;
  }

 private:
  void check_var(int i) const {
    if (i < 0 || i >= num_vars)
      throw std::invalid_argument("variable " + std::to_string(i) + " out of range");
  }
};

}  // namespace qudo
