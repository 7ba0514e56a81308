#pragma once

#include <stdexcept>
#include <string>

namespace trion {

/// Invalid user input (bad flags, unreadable interaction file, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested (L, parity, i) state does not exist for the chosen statistics.
class NonexistentStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite matrices, failed quadrature, broken normalization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(int l, int n, int n_prime, double estimate)
      : NumericalError("radial quadrature did not converge for l=" + std::to_string(l) +
                       " n=" + std::to_string(n) + " n'=" + std::to_string(n_prime) +
                       " (estimated error " + std::to_string(estimate) + ")"),
        l_(l),
        n_(n),
        n_prime_(n_prime) {}

  int l() const noexcept { return l_; }
  int n() const noexcept { return n_; }
  int n_prime() const noexcept { return n_prime_; }

 private:
  int l_;
  int n_;
  int n_prime_;
};

}  // namespace trion
