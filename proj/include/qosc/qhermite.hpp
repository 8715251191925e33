#pragma once

#include <cstddef>
#include <vector>

#include "qosc/qcore.hpp"

namespace qosc {

enum class Kind { Position, Momentum };

const char* to_string(Kind k);

/// Real number as sign * exp(log_abs); zero has sign 0.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;

  double value() const;
};

struct HSumResult {
  double value = 0.0;
  double largest_term = 0.0;
  /// Largest summand exceeds |value| by more than 1e12.
  bool cancellation_warning = false;
};

/// Explicit sum for the q^{-1}-Hermite polynomial h_n(x | qbreve).
HSumResult h_poly_sum_checked(std::size_t n, double x, const QParameters& params);
double h_poly_sum(std::size_t n, double x, const QParameters& params);

/// Three-term recurrence h_{m+1} = 2x h_m - (q^m - 1) h_{m-1}. Plain
/// floating point; overflows for large n, see h_sequence_scaled.
double h_poly_rec(std::size_t n, double x, const QParameters& params);

/// h_0(x) .. h_N(x) by the same recurrence with running rescaling, so the
/// result stays finite for any N.
std::vector<SignedLog> h_sequence_scaled(std::size_t N, double x,
                                         const QParameters& params);

/// Rescaled argument x' = (q-1)^{1/2} x / 2.
double scaled_argument(double x, const QParameters& params);

/// log of qbreve^{n(n+1)/4} (qbreve; qbreve)_n^{-1/2}.
double log_coefficient_norm(std::size_t n, const QParameters& params);

/// P_n(x) = (-1)^n qbreve^{n(n+1)/4} (qbreve;qbreve)_n^{-1/2} h_n(x'|qbreve).
double P_coeff(std::size_t n, double x, const QParameters& params);

/// P~_n(p) = i^n qbreve^{n(n+1)/4} (qbreve;qbreve)_n^{-1/2} h_n(p'|qbreve).
complex P_tilde_coeff(std::size_t n, double p, const QParameters& params);

/// P_0(x) .. P_N(x).
std::vector<double> P_family(std::size_t N, double x, const QParameters& params);

/// P~_0(p) .. P~_N(p).
std::vector<complex> P_tilde_family(std::size_t N, double p,
                                    const QParameters& params);

/// Evaluations of one coefficient family at a single point.
struct CoefficientFamily {
  Kind kind = Kind::Position;
  double eval_point = 0.0;
  std::vector<complex> values;

  /// Partial sums of |values[n]|^2 have a decreasing tail increment over
  /// the last quarter of the range.
  bool tail_decreasing() const;
};

}  // namespace qosc
