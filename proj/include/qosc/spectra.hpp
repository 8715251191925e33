#pragma once

#include <cstddef>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/fock.hpp"
#include "qosc/qcore.hpp"
#include "qosc/qhermite.hpp"

namespace qosc {

/// Extremal orthogonality measure labelling one self-adjoint extension of
/// Q (kind Position) or P (kind Momentum). b ranges over [1/q, 1).
class ExtremalMeasure {
 public:
  ExtremalMeasure(const QParameters& params, double b, Kind kind = Kind::Position,
                  const Tolerance& tol = {});

  const QParameters& params() const { return params_; }
  double b() const { return b_; }
  double sigma() const { return sigma_; }
  Kind kind() const { return kind_; }

  /// log of (-b^2; qb)_inf (-qb/b^2; qb)_inf (qb; qb)_inf.
  double log_normalizer() const { return log_normalizer_; }

 private:
  QParameters params_;
  double b_;
  double sigma_;
  Kind kind_;
  double log_normalizer_;
};

struct SpectralWindow {
  int r_min = 0;
  int r_max = 0;

  SpectralWindow() = default;
  SpectralWindow(int lo, int hi);
  static SpectralWindow symmetric(int R) { return {-R, R}; }

  std::size_t size() const { return static_cast<std::size_t>(r_max - r_min + 1); }
  std::size_t index(int r) const { return static_cast<std::size_t>(r - r_min); }
  bool contains(int r) const { return r >= r_min && r <= r_max; }
  friend bool operator==(const SpectralWindow&, const SpectralWindow&) = default;
};

/// Function on the spectral points of one measure, restricted to a window.
struct GridFunction {
  ExtremalMeasure measure;
  SpectralWindow window;
  std::vector<complex> values;

  complex at(int r) const { return values[window.index(r)]; }
  /// (sum_r m_r |F(r)|^2)^{1/2}
  double weighted_norm() const;
};

/// x_b(r) = 2 sinh(tau r - sigma) / (q-1)^{1/2}.
double spectrum_point(const ExtremalMeasure& m, int r);

/// log m_r, assembled term by term and never exponentiated.
double log_weight(const ExtremalMeasure& m, int r);

struct WeightResult {
  double value = 0.0;
  double log_value = 0.0;
  bool underflow = false;
};

WeightResult weight(const ExtremalMeasure& m, int r);

struct Extension {
  double b = 0.0;
  int r = 0;
};

/// The unique (b, r) with b in [1/q, 1) for which x0 is the spectral
/// point x_b(r).
Extension locate_extension(double x0, const QParameters& params,
                           Kind kind = Kind::Position);

/// Expansion coefficients of the eigenvector of the extension with
/// eigenvalue x_b(r) (position) or p_b(r) (momentum) in the Fock basis.
/// Position entries are the orthonormal polynomials p_n = (-1)^n P_coeff;
/// momentum entries are (-i)^n p_n(p_b(r)).
CoefficientFamily eigenvector_coefficients(const ExtremalMeasure& m, int r,
                                           std::size_t N);

/// m_r^{1/2} times the eigenvector coefficients.
CoefficientFamily normalized_eigenvector_coefficients(const ExtremalMeasure& m,
                                                      int r, std::size_t N);

struct MassIdentityResult {
  double value = 0.0;
  /// Second-half block of sum P_n^2 exceeds half of the preceding quarter.
  bool slow_convergence = false;
};

/// m_r * sum_{n<=N} P_n(x_b(r))^2, which tends to 1.
MassIdentityResult mass_identity(const ExtremalMeasure& m, int r, std::size_t N);

struct OrthogonalityReport {
  double max_deviation = 0.0;
  std::size_t worst_n = 0;
  std::size_t worst_n_prime = 0;
  SpectralWindow window;
};

/// Smallest symmetric window R <= 200 whose boundary terms m_R P_n(x_R)^2,
/// n <= N, are all below tol.tail_eps.
SpectralWindow auto_window(const ExtremalMeasure& m, std::size_t N,
                           const Tolerance& tol = {});

/// Smallest symmetric window R <= 200 with m_R |x_R|^n < tol.tail_eps at
/// both ends.
SpectralWindow auto_moment_window(const ExtremalMeasure& m, std::size_t n,
                                  const Tolerance& tol = {});

/// Largest boundary term m_r |P_k(x_r)|^2, k <= N, at the window edges.
double orthogonality_boundary_term(const ExtremalMeasure& m, std::size_t N,
                                   const SpectralWindow& window);

/// max_{n,n'<=N} |sum_r m_r P_n P_n' - delta_{nn'}|. Throws WindowTooSmall
/// if the boundary terms reach tol.tail_eps.
OrthogonalityReport verify_orthogonality(const ExtremalMeasure& m, std::size_t N,
                                         const SpectralWindow& window,
                                         const Tolerance& tol = {});
OrthogonalityReport verify_orthogonality(const ExtremalMeasure& m, std::size_t N,
                                         const Tolerance& tol = {});

/// (m_r m_r')^{1/2} sum_{n<=N} P_n(x_b(r)) conj(P_n(x_b(r'))).
complex dual_orthogonality(const ExtremalMeasure& m, int r, int r_prime, std::size_t N);

/// Omega (position) or Omega' (momentum): F(r) = m_r^{-1/2} <v, phi^norm_r>,
/// i.e. sum_n c_n conj(coefficient_n(r)). Throws WindowTooSmall.
GridFunction isometry_omega(const FockVector& v, const ExtremalMeasure& m,
                            const SpectralWindow& window, const Tolerance& tol = {});

/// Multiplication by the spectral variable on a grid function.
GridFunction multiply_by_point(const GridFunction& f);

struct EigenfunctionValue {
  complex value;
  double tail_bound = 0.0;
  bool converged = true;
};

/// phi_x(y) as the product of two infinite q-Pochhammer symbols.
EigenfunctionValue eigenfunction_product(double x, double y, const QParameters& params,
                                         const Tolerance& tol = {});

/// Partial sum through n = N of the q^{-1}-Hermite expansion of phi_x(y).
double eigenfunction_series(double x, double y, const QParameters& params, std::size_t N);

/// xi_p(y) = (i y qb (s+p'); qb)_inf (-i y qb (s-p'); qb)_inf.
EigenfunctionValue momentum_eigenfunction_product(double p, double y,
                                                  const QParameters& params,
                                                  const Tolerance& tol = {});

/// sum_{n<=N} i^{-n} y^n qb^{n(n+1)/2} / (qb;qb)_n h_n(p').
complex momentum_eigenfunction_series(double p, double y, const QParameters& params,
                                      std::size_t N);

/// sum_r m_r x_b(r)^n. Throws WindowTooSmall when m_r |x_r|^n at an edge
/// reaches tol.tail_eps.
double compute_moment(const ExtremalMeasure& m, std::size_t n, const SpectralWindow& window,
                      const Tolerance& tol = {});
double compute_moment(const ExtremalMeasure& m, std::size_t n, const Tolerance& tol = {});

/// Grid quantities for one measure over a window, filled in parallel over r.
struct GridTable {
  SpectralWindow window;
  std::vector<double> points;
  std::vector<double> log_weights;
  /// families[index(r)][n] are eigenvector coefficients up to n = N.
  std::vector<std::vector<complex>> families;
};

GridTable build_grid_table(const ExtremalMeasure& m, const SpectralWindow& window,
                           std::size_t N);

}  // namespace qosc
