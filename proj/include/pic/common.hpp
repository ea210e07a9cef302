#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pic {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Error hierarchy. The CLI maps each category onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or out-of-range parameters (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Solver failure or numerical pathology (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// splitmix64 finalizer; used wherever a seed has to be derived from other values.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased integer in [0, bound) drawn from a 64-bit engine. Written out so that
// results do not depend on the standard library's distribution implementation.
template <class Engine>
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

// Uniform double in [0, 1) with 53 random bits.
template <class Engine>
double uniform_unit(Engine& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on uniform_unit; portable across standard libraries.
template <class Engine>
double standard_normal(Engine& rng) {
  double u1;
  do {
    u1 = uniform_unit(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace pic
