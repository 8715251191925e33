#pragma once

#include <cstddef>
#include <vector>

#include "qosc/qcore.hpp"

namespace qosc {

/// Truncated state sum_{n<=N} c_n |n>.
class FockVector {
 public:
  /// Zero vector with coefficients c_0..c_N.
  explicit FockVector(std::size_t truncation);
  explicit FockVector(std::vector<complex> coefficients);

  static FockVector basis(std::size_t n, std::size_t truncation);

  std::size_t truncation() const { return coeffs_.size() - 1; }
  const std::vector<complex>& coefficients() const { return coeffs_; }
  complex operator[](std::size_t n) const { return coeffs_[n]; }
  complex& operator[](std::size_t n) { return coeffs_[n]; }

  double norm() const;
  bool normalized(double rel_tol = 1e-10) const;

  /// Set when a creation step pushed nonzero amplitude past N. Sticky
  /// through later ladder operations.
  bool truncation_loss() const { return truncation_loss_; }
  void mark_truncation_loss() { truncation_loss_ = true; }

  FockVector& operator+=(const FockVector& other);
  FockVector& operator-=(const FockVector& other);
  FockVector& operator*=(complex s);

 private:
  std::vector<complex> coeffs_;
  bool truncation_loss_ = false;
};

FockVector operator+(FockVector a, const FockVector& b);
FockVector operator-(FockVector a, const FockVector& b);
FockVector operator*(complex s, FockVector v);

/// a|n> = {n}^{1/2} |n-1>. c'_N is zero.
FockVector apply_annihilation(const FockVector& v, const QParameters& params);

/// a+|n> = {n+1}^{1/2} |n+1>; the |N+1> component is dropped and flagged.
FockVector apply_creation(const FockVector& v, const QParameters& params);

FockVector apply_number(const FockVector& v);

/// H = (a a+ + a+ a)/2 on the truncated space.
FockVector apply_hamiltonian(const FockVector& v, const QParameters& params);

/// ({n+1}_q + {n}_q) / 2.
double hamiltonian_eigenvalue(std::size_t n, const QParameters& params);

}  // namespace qosc
