#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/qcore.hpp"
#include "qosc/spectra.hpp"

namespace qosc {

struct SeriesEntry {
  complex value;
  /// Geometric bound from the last two terms of each parity; inf while
  /// the terms are not yet contracting.
  double tail_estimate = 0.0;
  std::size_t terms = 0;
};

/// F^{b'b}_{r'r} = m_{r'}(b') sum_{n<=N} (-i)^n qb^{n(n+1)/2}/(qb;qb)_n
///                 h_n(sinh(tau r' - sigma')) h_n(sinh(tau r - sigma)).
SeriesEntry transform_entry_series(int r_prime, int r, double b_prime, double b,
                                   const QParameters& params, std::size_t N);

/// Same sum, stopped once three consecutive terms fall below
/// tol.tail_eps relative to the partial sum (at most tol.max_terms terms).
SeriesEntry transform_entry_series(int r_prime, int r, double b_prime, double b,
                                   const QParameters& params, const Tolerance& tol);

struct ProductEntry {
  LogComplex log_value;
  double tail_bound = 0.0;
  bool converged = true;

  complex value() const { return log_value.value(); }
};

/// Closed form of the same entry: m_{r'}(b') / (-qb; qb)_inf times four
/// infinite products with arguments
///   alpha++ =  i qb^{ r+r'+1} b b'      alpha-- =  i qb^{-r-r'+1} / (b b')
///   alpha+- = -i qb^{ r-r'+1} b / b'    alpha-+ = -i qb^{-r+r'+1} b' / b
ProductEntry transform_entry_product(int r_prime, int r, double b_prime, double b,
                                     const QParameters& params, const Tolerance& tol = {});

struct TransformAlphas {
  complex plus_plus, minus_minus, plus_minus, minus_plus;
};

TransformAlphas transform_alphas(int r_prime, int r, double b_prime, double b,
                                 const QParameters& params);

enum class FillMode { Serial, Parallel };

struct TransformOptions {
  /// Number of entries checked against the series form.
  std::size_t validate = 9;
  /// Spot checks are drawn from [-radius, radius]^2 intersected with the
  /// window, where the series carries no cancellation.
  int validation_radius = 6;
  double validation_tol = 1e-7;
  std::uint64_t seed = 0x5eedULL;
  FillMode mode = FillMode::Parallel;
  /// 0 keeps the OpenMP default.
  int threads = 0;
};

/// Windowed matrices F[r'][r] and T[r'][r] = (m_r(b) / m_{r'}(b'))^{1/2} F.
class TransformMatrix {
 public:
  TransformMatrix(const QParameters& params, double b, double b_prime, SpectralWindow window,
                  std::vector<complex> F, std::vector<complex> T);

  const QParameters& params() const { return params_; }
  double b() const { return b_; }
  double b_prime() const { return b_prime_; }
  const SpectralWindow& window() const { return window_; }

  complex F(int r_prime, int r) const { return F_[offset(r_prime, r)]; }
  complex T(int r_prime, int r) const { return T_[offset(r_prime, r)]; }
  const std::vector<complex>& F_entries() const { return F_; }
  const std::vector<complex>& T_entries() const { return T_; }

  /// sum_{r' in window} |T_{r'r}|^2.
  double column_norm_squared(int r) const;
  /// sum_{r in window} |T_{r'r}|^2.
  double row_norm_squared(int r_prime) const;
  /// max |norm^2 - 1| over columns/rows with index in [lo, hi].
  double max_column_deviation(int lo, int hi) const;
  double max_row_deviation(int lo, int hi) const;
  double max_column_deviation() const;
  double max_row_deviation() const;

  /// Largest relative series-vs-product discrepancy seen during spot
  /// validation (0 when no entries were validated).
  double validation_discrepancy = 0.0;
  std::size_t validated_entries = 0;

 private:
  std::size_t offset(int r_prime, int r) const {
    return window_.index(r_prime) * window_.size() + window_.index(r);
  }

  QParameters params_;
  double b_;
  double b_prime_;
  SpectralWindow window_;
  std::vector<complex> F_;
  std::vector<complex> T_;
};

/// Fills the windowed transform from the product form and spot-validates
/// it against the series form. Throws ValidationFailure carrying the worst
/// entry. The fill is deterministic: Serial and Parallel give bit-identical
/// entries.
TransformMatrix build_transform(double b_prime, double b, const QParameters& params,
                                const SpectralWindow& window, const Tolerance& tol = {},
                                const TransformOptions& options = {});

/// F(x_b(r)) = sum_{r'} F_{r'r} Fhat(p_{b'}(r')). Fhat must live on the
/// momentum grid of b' over the matrix window.
GridFunction apply_transform(const TransformMatrix& M, const GridFunction& momentum);

/// Fhat(p_{b'}(r')) = sum_r (m_r(b)/m_{r'}(b'))^{1/2} conj(T_{r'r}) F(x_b(r)).
GridFunction apply_inverse(const TransformMatrix& M, const GridFunction& coordinate);

}  // namespace qosc
