#include "qosc/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace qosc {

FockVector::FockVector(std::size_t truncation) : coeffs_(truncation + 1) {}

FockVector::FockVector(std::vector<complex> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty())
    throw std::invalid_argument("FockVector needs at least one coefficient");
}

FockVector FockVector::basis(std::size_t n, std::size_t truncation) {
  if (n > truncation)
    throw std::out_of_range("basis index exceeds truncation");
  FockVector v(truncation);
  v[n] = 1.0;
  return v;
}

double FockVector::norm() const {
  double acc = 0.0;
  for (const auto& c : coeffs_) acc += std::norm(c);
  return std::sqrt(acc);
}

bool FockVector::normalized(double rel_tol) const {
  return std::abs(norm() - 1.0) < rel_tol;
}

FockVector& FockVector::operator+=(const FockVector& other) {
  if (other.coeffs_.size() != coeffs_.size())
    throw std::invalid_argument("FockVector truncation mismatch");
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
  truncation_loss_ = truncation_loss_ || other.truncation_loss_;
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& other) {
  if (other.coeffs_.size() != coeffs_.size())
    throw std::invalid_argument("FockVector truncation mismatch");
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
  truncation_loss_ = truncation_loss_ || other.truncation_loss_;
  return *this;
}

FockVector& FockVector::operator*=(complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
FockVector operator*(complex s, FockVector v) { return v *= s; }

FockVector apply_annihilation(const FockVector& v, const QParameters& params) {
  const std::size_t N = v.truncation();
  FockVector out(N);
  for (std::size_t n = 0; n < N; ++n)
    out[n] = std::sqrt(q_number(n + 1, params)) * v[n + 1];
  if (v.truncation_loss()) out.mark_truncation_loss();
  return out;
}

FockVector apply_creation(const FockVector& v, const QParameters& params) {
  const std::size_t N = v.truncation();
  FockVector out(N);
  for (std::size_t n = 0; n < N; ++n)
    out[n + 1] = std::sqrt(q_number(n + 1, params)) * v[n];
  if (v.truncation_loss() || v[N] != complex{}) out.mark_truncation_loss();
  return out;
}

FockVector apply_number(const FockVector& v) {
  FockVector out = v;
  for (std::size_t n = 0; n <= v.truncation(); ++n)
    out[n] *= static_cast<double>(n);
  return out;
}

FockVector apply_hamiltonian(const FockVector& v, const QParameters& params) {
  FockVector out = apply_annihilation(apply_creation(v, params), params) +
                   apply_creation(apply_annihilation(v, params), params);
  return 0.5 * out;
}

double hamiltonian_eigenvalue(std::size_t n, const QParameters& params) {
  return 0.5 * (q_number(n + 1, params) + q_number(n, params));
}

}  // namespace qosc
