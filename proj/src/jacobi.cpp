#include "qosc/jacobi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qosc {

namespace {

constexpr double kScaleWarning = 1e100;
// Ratios at or below this count as geometric contraction.
constexpr double kContractionCap = 0.95;
// Block ratios at or above this count as a non-summable tail.
constexpr double kDivergenceRatio = 0.9;

JacobiOperator ladder_jacobi(const QParameters& params, std::string label) {
  return {[params](std::size_t n) { return std::sqrt(q_number(n + 1, params)); },
          [](std::size_t) { return 0.0; }, std::move(label)};
}

struct Boundedness {
  double first_max = 0.0;
  double last_max = 0.0;
  double contraction = 0.0;
  double sup_bound = std::numeric_limits<double>::infinity();
  bool bounded = false;
};

Boundedness probe_boundedness(const std::vector<double>& seq, double rel_tol) {
  const std::size_t N = seq.size();
  const std::size_t quarter = N / 4;
  Boundedness out;
  for (std::size_t n = 0; n < quarter; ++n)
    out.first_max = std::max(out.first_max, std::abs(seq[n]));
  for (std::size_t n = N - quarter; n < N; ++n)
    out.last_max = std::max(out.last_max, std::abs(seq[n]));

  if (out.last_max <= out.first_max * (1.0 + rel_tol)) {
    out.bounded = true;
    out.sup_bound = out.first_max;
    return out;
  }

  // Geometric contraction of the increments bounds the supremum by
  // last + d_last * rho / (1 - rho). Rounding-level increments count as flat.
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * out.last_max;
  double rho = 0.0;
  double last_inc = 0.0;
  for (std::size_t n = N - quarter; n + 1 < N; ++n) {
    const double d0 = std::abs(std::abs(seq[n]) - std::abs(seq[n - 1]));
    const double d1 = std::abs(std::abs(seq[n + 1]) - std::abs(seq[n]));
    if (d1 <= noise) continue;
    last_inc = d1;
    rho = d0 <= noise ? std::numeric_limits<double>::infinity() : std::max(rho, d1 / d0);
  }
  out.contraction = rho;
  if (rho <= kContractionCap) {
    out.bounded = true;
    out.sup_bound = out.last_max + noise + last_inc * rho / (1.0 - rho);
  }
  return out;
}

}  // namespace

JacobiOperator position_jacobi(const QParameters& params) {
  return ladder_jacobi(params, "position");
}

JacobiOperator momentum_jacobi(const QParameters& params) {
  return ladder_jacobi(params, "momentum");
}

JacobiOperator undeformed_jacobi() {
  return {[](std::size_t n) { return std::sqrt(static_cast<double>(n + 1)); },
          [](std::size_t) { return 0.0; }, "undeformed"};
}

RecurrenceResult recurrence_polynomials(const JacobiOperator& J, double x,
                                        std::size_t N) {
  RecurrenceResult out;
  out.values.resize(N + 1);
  out.values[0] = 1.0;
  double prev = 0.0;
  double a_prev = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const double an = J.a(n);
    if (an == 0.0) throw std::domain_error("Jacobi off-diagonal vanishes");
    const double cur = out.values[n];
    const double next = ((x - J.b(n)) * cur - a_prev * prev) / an;
    out.values[n + 1] = next;
    if (std::abs(next) > kScaleWarning) out.scale_warning = true;
    prev = cur;
    a_prev = an;
  }
  return out;
}

Eigendecomposition truncated_eigendecomposition(const JacobiOperator& J,
                                                std::size_t N) {
  if (N < 1) throw std::invalid_argument("truncation must be at least 1");
  Eigen::VectorXd diag(N);
  Eigen::VectorXd sub(N > 1 ? N - 1 : 0);
  for (std::size_t n = 0; n < N; ++n) diag[n] = J.b(n);
  for (std::size_t n = 0; n + 1 < N; ++n) sub[n] = J.a(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal eigensolver did not converge");

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  M.diagonal() = diag;
  for (std::size_t n = 0; n + 1 < N; ++n) M(n, n + 1) = M(n + 1, n) = sub[n];
  const double norm = std::max(M.norm(), std::numeric_limits<double>::min());

  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double residual = (M * vectors.col(k) - values[k] * vectors.col(k)).norm();
    if (residual >= 1e-10 * norm)
      throw std::runtime_error("eigenpair residual exceeds 1e-10 ||M||");
  }

  Eigendecomposition out;
  out.size = N;
  out.eigenvalues.assign(values.data(), values.data() + N);
  out.eigenvectors.assign(vectors.data(), vectors.data() + N * N);
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::SelfAdjointBounded: return "SelfAdjointBounded";
    case Verdict::SelfAdjointCarleman: return "SelfAdjointCarleman";
    case Verdict::NotSelfAdjoint: return "NotSelfAdjoint";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

SelfAdjointnessVerdict self_adjointness_verdict(const JacobiOperator& J,
                                                std::size_t n_probe,
                                                const Tolerance& tol) {
  if (n_probe < 32) throw std::invalid_argument("n_probe must be at least 32");
  tol.validate();

  const std::size_t N = n_probe;
  std::vector<double> a(N + 1), b(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    a[n] = J.a(n);
    b[n] = J.b(n);
    if (a[n] == 0.0 || !std::isfinite(a[n]) || !std::isfinite(b[n]))
      throw std::domain_error("Jacobi coefficients must be finite with a_n != 0");
  }

  SelfAdjointnessVerdict out;
  auto& ev = out.evidence;
  ev.n_probe = N;

  const Boundedness a_bound = probe_boundedness(a, tol.rel_tol);
  const Boundedness b_bound = probe_boundedness(b, tol.rel_tol);
  ev.first_quartile_max = std::max(a_bound.first_max, b_bound.first_max);
  ev.last_quartile_max = std::max(a_bound.last_max, b_bound.last_max);
  ev.increment_contraction = std::max(a_bound.contraction, b_bound.contraction);
  ev.sup_bound = std::max(a_bound.sup_bound, b_bound.sup_bound);
  ev.diagonal_bounded = b_bound.bounded;

  ev.reciprocal_partial_sums.resize(N + 2);
  ev.reciprocal_partial_sums[0] = 0.0;
  for (std::size_t n = 0; n <= N; ++n)
    ev.reciprocal_partial_sums[n + 1] = ev.reciprocal_partial_sums[n] + 1.0 / std::abs(a[n]);
  const auto& S = ev.reciprocal_partial_sums;
  const double late = S[N + 1] - S[N / 2];
  const double early = S[N / 2] - S[N / 4];
  ev.block_ratio = early > 0.0 ? late / early : 0.0;

  double rho = 0.0;
  for (std::size_t n = N / 2; n < N; ++n)
    rho = std::max(rho, std::abs(a[n] / a[n + 1]));
  ev.tail_ratio = rho;
  const bool tail_certified = rho <= kContractionCap;
  ev.tail_bound = tail_certified ? (1.0 / std::abs(a[N])) * rho / (1.0 - rho)
                                 : std::numeric_limits<double>::infinity();

  // Smallest j <= N/2 with a_{n-1} a_{n+1} <= a_n^2 for every n in [j, N).
  for (std::size_t j = 1; j <= N / 2 && !ev.log_convex_from; ++j) {
    bool holds = true;
    for (std::size_t n = j; n < N && holds; ++n)
      holds = std::abs(a[n - 1] * a[n + 1]) <= a[n] * a[n] * (1.0 + tol.rel_tol);
    if (holds) ev.log_convex_from = j;
  }

  if (a_bound.bounded && b_bound.bounded) {
    out.verdict = Verdict::SelfAdjointBounded;
  } else if (!tail_certified && ev.block_ratio >= kDivergenceRatio) {
    out.verdict = Verdict::SelfAdjointCarleman;
  } else if (ev.diagonal_bounded && ev.log_convex_from && tail_certified) {
    out.verdict = Verdict::NotSelfAdjoint;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

}  // namespace qosc
