#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace kothe {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  DimensionMismatch,
  Precondition,
  NonConvergence,
};

// All library failures are reported through this type. The kind decides the
// CLI exit code (precondition -> 2, nonconvergence -> 3).
class KotheError : public std::runtime_error {
 public:
  KotheError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_precondition(const std::string& what) {
  throw KotheError(ErrorKind::Precondition, what);
}

[[noreturn]] inline void fail_dimension(const std::string& what) {
  throw KotheError(ErrorKind::DimensionMismatch, what);
}

// Value produced by an iterative method. `value` is the best bound found even
// when `converged` is false.
struct Estimate {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

// Deterministic stream derived from (seed, stream). Streams let independent
// sub-experiments draw from non-overlapping sequences regardless of the
// order in which they run.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

// x log x with the 0 log 0 = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// x log(x / y) with 0 log(0 / y) = 0.
inline double xlogxy(double x, double y) {
  return x > 0.0 ? x * std::log(x / y) : 0.0;
}

}  // namespace kothe
