#pragma once

#include <stdexcept>
#include <string>

namespace qosc {

/// Boundary terms of a spectral window are not negligible.
class WindowTooSmall : public std::runtime_error {
 public:
  WindowTooSmall(const std::string& what, double boundary_term)
      : std::runtime_error(what), boundary_term_(boundary_term) {}
  double boundary_term() const { return boundary_term_; }

 private:
  double boundary_term_;
};

class WindowMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Spot validation of a transform matrix against the series oracle failed.
class ValidationFailure : public std::runtime_error {
 public:
  ValidationFailure(const std::string& what, int r_prime, int r, double discrepancy)
      : std::runtime_error(what), r_prime_(r_prime), r_(r), discrepancy_(discrepancy) {}
  int r_prime() const { return r_prime_; }
  int r() const { return r_; }
  double discrepancy() const { return discrepancy_; }

 private:
  int r_prime_;
  int r_;
  double discrepancy_;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qosc
