// Shared aliases, error types and the seeded generator used for random data.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nlhelm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Input outside the mathematical domain of an operation (z <= 0 etc.).
// Plain std::domain_error is used for these.

// Requested point lies outside the validated accuracy range of a routine.
struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Asymptotic series requested outside its useful regime.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally incompatible arguments (grid/band mismatch, wrong dimension).
struct MismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A stated operation precondition does not hold for the given data.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: ill-conditioned fit, resonant Wronskian, step-size
// breakdown, overflow in the nonlinearity.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64. Chosen over std:: distributions so that a seed fixes the
// generated data bit-for-bit on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (-1,1)
  double sym() { return 2.0 * uniform() - 1.0; }

 private:
  std::uint64_t state_;
};

}  // namespace nlhelm
