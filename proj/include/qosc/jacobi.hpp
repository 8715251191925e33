#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qosc/qcore.hpp"

namespace qosc {

/// Symmetric Jacobi matrix acting as L e_n = a_n e_{n+1} + b_n e_n + a_{n-1} e_{n-1}.
/// The coefficient functions must be pure.
struct JacobiOperator {
  std::function<double(std::size_t)> a;  // off-diagonal, nonzero
  std::function<double(std::size_t)> b;  // diagonal
  std::string label;
};

JacobiOperator position_jacobi(const QParameters& params);

/// In the twisted basis e'_n = i^{-n} e_n the momentum operator has the
/// position operator's matrix; only the label differs.
JacobiOperator momentum_jacobi(const QParameters& params);

/// a_n = sqrt(n+1), b_n = 0: the undeformed oscillator.
JacobiOperator undeformed_jacobi();

struct RecurrenceResult {
  std::vector<double> values;  // p_0 .. p_N
  bool scale_warning = false;  // some |p_n| exceeded 1e100
};

/// Orthonormal polynomials of J evaluated at x, p_{-1} = 0, p_0 = 1.
RecurrenceResult recurrence_polynomials(const JacobiOperator& J, double x,
                                        std::size_t N);

struct Eigendecomposition {
  std::vector<double> eigenvalues;  // ascending
  /// Column-major N x N, column k belongs to eigenvalues[k].
  std::vector<double> eigenvectors;
  std::size_t size = 0;

  double vector(std::size_t row, std::size_t col) const {
    return eigenvectors[col * size + row];
  }
};

/// Spectral decomposition of the leading N x N block. Throws
/// std::runtime_error if the solver fails or a residual exceeds
/// 1e-10 * ||M||.
Eigendecomposition truncated_eigendecomposition(const JacobiOperator& J,
                                                std::size_t N);

enum class Verdict { SelfAdjointBounded, SelfAdjointCarleman, NotSelfAdjoint, Inconclusive };

const char* to_string(Verdict v);

struct VerdictEvidence {
  std::size_t n_probe = 0;
  double first_quartile_max = 0.0;
  double last_quartile_max = 0.0;
  /// Largest ratio of consecutive coefficient increments in the last
  /// quartile; < contraction cap certifies a finite supremum.
  double increment_contraction = 0.0;
  double sup_bound = 0.0;  // certified supremum (inf when not certified)
  std::vector<double> reciprocal_partial_sums;  // S_n = sum_{k<n} 1/|a_k|
  double block_ratio = 0.0;  // (S_N - S_{N/2}) / (S_{N/2} - S_{N/4})
  double tail_ratio = 0.0;   // max |a_n / a_{n+1}| over the last half
  double tail_bound = 0.0;   // bound on sum_{n>N} 1/|a_n| (inf when uncertified)
  bool diagonal_bounded = false;
  std::optional<std::size_t> log_convex_from;
};

struct SelfAdjointnessVerdict {
  Verdict verdict = Verdict::Inconclusive;
  VerdictEvidence evidence;
};

/// Finite-probe rendering of the classical criteria: boundedness, then
/// Carleman divergence of sum 1/a_n, then log-convexity with a certified
/// convergent sum 1/a_n. Requires n_probe >= 32.
SelfAdjointnessVerdict self_adjointness_verdict(const JacobiOperator& J,
                                                std::size_t n_probe,
                                                const Tolerance& tol = {});

}  // namespace qosc
