#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qudo {

/// Thrown when a dense object (diagonal, statevector) would exceed the
/// configured element budget. Carries the element count that was requested.
class resource_limit_error : public std::runtime_error {
 public:
  resource_limit_error(const std::string& what, std::uint64_t required)
      : std::runtime_error(what), required_elements(required) {}

  std::uint64_t required_elements;
};

/// Default cap on dense diagonal / statevector sizes (element count).
inline constexpr std::uint64_t kDefaultElementBudget = std::uint64_t{1} << 26;

/// d^n in 64 bits, throwing on overflow.
inline std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t result = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base)
      throw std::overflow_error("pow_u64: " + std::to_string(base) + "^" +
                                std::to_string(exp) + " exceeds 64 bits");
    result *= base;
  }
  return result;
}

/// An assignment of one value in [0, d) to each of n sites.
using Assignment = std::vector<int>;

/// Decodes a basis index into its big-endian mixed-radix digits
/// (site 0 is the most significant digit).
inline Assignment index_to_assignment(std::uint64_t index, int num_sites, int local_dim) {
  if (num_sites < 1 || local_dim < 1)
    throw std::invalid_argument("index_to_assignment: num_sites and local_dim must be positive");
  const std::uint64_t dim = pow_u64(local_dim, num_sites);
  if (index >= dim)
    throw std::invalid_argument("index_to_assignment: index " + std::to_string(index) +
                                " out of range for dimension " + std::to_string(dim));
  Assignment values(num_sites);
  for (int site = num_sites - 1; site >= 0; --site) {
    values[site] = static_cast<int>(index % local_dim);
    index /= local_dim;
  }
  return values;
}

/// Inverse of index_to_assignment.
inline std::uint64_t assignment_to_index(std::span<const int> values, int local_dim) {
  std::uint64_t index = 0;
  for (int v : values) {
    if (v < 0 || v >= local_dim)
      throw std::invalid_argument("assignment_to_index: value " + std::to_string(v) +
                                  " not in [0, " + std::to_string(local_dim) + ")");
    index = index * local_dim + static_cast<std::uint64_t>(v);
  }
  return index;
}

// Deterministic RNG helpers. Distributions are hand-rolled so that streams do
// not depend on the standard library's implementation-defined algorithms.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi], inclusive.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Multiply-shift bounded draw; bias is < 2^-64 per call.
  const unsigned __int128 wide = static_cast<unsigned __int128>(rng()) * span;
  return lo + static_cast<int>(wide >> 64);
}

/// Decimal rendering for 128-bit counts (register dimensions can reach 2^64).
inline std::string u128_to_string(unsigned __int128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return {digits.rbegin(), digits.rend()};
}

}  // namespace qudo
