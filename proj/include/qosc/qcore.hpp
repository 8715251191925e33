#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>

namespace qosc {

using complex = std::complex<double>;

/// Deformation parameter of the oscillator together with the derived
/// quantities qbreve = 1/q and tau = ln q.
class QParameters {
 public:
  /// Oscillator parameters; requires q > 1.
  static QParameters oscillator(double q);

  /// Admits any 0 < q != 1. Only the self-adjointness verdict accepts
  /// parameters built this way with q < 1.
  static QParameters relaxed(double q);

  double q() const { return q_; }
  double qbreve() const { return qbreve_; }
  double tau() const { return tau_; }
  bool is_oscillator() const { return q_ > 1.0; }

 private:
  explicit QParameters(double q);

  double q_;
  double qbreve_;
  double tau_;
};

struct Tolerance {
  double rel_tol = 1e-10;
  /// Truncation threshold for infinite products and series.
  double tail_eps = 1e-16;
  int max_terms = 500;

  /// Throws std::invalid_argument unless every field is positive and
  /// max_terms >= 8.
  void validate() const;
};

/// Complex number stored as (log|z|, arg z). Zero is log_mag = -inf.
struct LogComplex {
  double log_mag = 0.0;
  double phase = 0.0;

  static LogComplex from(complex z);
  complex value() const;
  bool is_zero() const;

  LogComplex& operator*=(const LogComplex& other) {
    log_mag += other.log_mag;
    phase += other.phase;
    return *this;
  }
  LogComplex& operator/=(const LogComplex& other) {
    log_mag -= other.log_mag;
    phase -= other.phase;
    return *this;
  }
};

inline LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
inline LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

struct PochhammerResult {
  LogComplex log_value;
  /// Upper bound on sum_{s>=S} |a| qb^s / (1 - qb); the relative error of
  /// the truncated product is O(tail_bound).
  double tail_bound = 0.0;
  int factors = 0;
  bool converged = true;

  complex value() const { return log_value.value(); }
};

/// {n}_q = (q^n - 1)/(q - 1). Throws std::overflow_error when q^n is not
/// representable.
double q_number(std::size_t n, const QParameters& params);

/// (a; qb)_n = prod_{s<n} (1 - a qb^s).
complex q_pochhammer(complex a, double qb, std::size_t n);

/// Signed finite product in log space. Used where (a; qb)_n would overflow.
LogComplex log_q_pochhammer(complex a, double qb, std::size_t n);

/// (a; qb)_inf truncated once |a| qb^s < tail_eps with at least 8 factors.
/// Never throws on slow convergence; inspect `converged`.
PochhammerResult q_pochhammer_inf(complex a, double qb,
                                  const Tolerance& tol = {});

/// log (qb; qb)_n for real qb in (0,1); the product is positive.
double log_qb_factorial(std::size_t n, double qb);

}  // namespace qosc
