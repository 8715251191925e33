#include "qosc/qfourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qosc {

namespace {

complex minus_i_power(std::size_t n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// Terms of the bilinear h_n series including the m_{r'}(b') prefactor.
class SeriesTerms {
 public:
  SeriesTerms(int r_prime, int r, double b_prime, double b, const QParameters& params,
              std::size_t N)
      : tau_(params.tau()), log_fact_(N + 1) {
    const ExtremalMeasure momentum(params, b_prime, Kind::Momentum);
    const ExtremalMeasure coordinate(params, b, Kind::Position);
    log_prefactor_ = log_weight(momentum, r_prime);
    hp_ = h_sequence_scaled(N, std::sinh(tau_ * r_prime - momentum.sigma()), params);
    hx_ = h_sequence_scaled(N, std::sinh(tau_ * r - coordinate.sigma()), params);
    for (std::size_t n = 1; n <= N; ++n)
      log_fact_[n] = log_fact_[n - 1] + std::log1p(-std::exp(-static_cast<double>(n) * tau_));
  }

  complex operator()(std::size_t n) const {
    const int sign = hp_[n].sign * hx_[n].sign;
    if (sign == 0) return {};
    const double nn = static_cast<double>(n);
    const double mag = std::exp(log_prefactor_ - 0.5 * nn * (nn + 1.0) * tau_ - log_fact_[n] +
                                hp_[n].log_abs + hx_[n].log_abs);
    return minus_i_power(n) * (sign * mag);
  }

 private:
  double tau_;
  double log_prefactor_ = 0.0;
  std::vector<double> log_fact_;
  std::vector<SignedLog> hp_, hx_;
};

/// Magnitudes of the last four nonzero terms, newest last. Even and odd
/// terms decay at different rates, so each parity chain is bounded by its
/// own two-step ratio.
class TailTracker {
 public:
  void push(double magnitude) {
    if (magnitude == 0.0) return;
    for (int i = 0; i < 3; ++i) t_[i] = t_[i + 1];
    t_[3] = magnitude;
    ++count_;
  }

  double estimate() const {
    if (count_ == 0) return 0.0;
    if (count_ < 4) return std::numeric_limits<double>::infinity();
    const double rho = std::max(t_[3] / t_[1], t_[2] / t_[0]);
    if (!(rho < 1.0)) return std::numeric_limits<double>::infinity();
    return (t_[3] + t_[2]) * rho / (1.0 - rho);
  }

 private:
  double t_[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t count_ = 0;
};

ProductEntry product_entry(const ExtremalMeasure& momentum, const ExtremalMeasure& coordinate,
                           int r_prime, int r, double log_neg_qb, const Tolerance& tol) {
  const auto alphas = transform_alphas(r_prime, r, momentum.b(), coordinate.b(),
                                       coordinate.params());
  const double qb = coordinate.params().qbreve();
  ProductEntry out;
  out.log_value = LogComplex{log_weight(momentum, r_prime) - log_neg_qb, 0.0};
  for (const complex a : {alphas.plus_plus, alphas.minus_minus, alphas.plus_minus,
                          alphas.minus_plus}) {
    const auto p = q_pochhammer_inf(a, qb, tol);
    out.log_value *= p.log_value;
    out.tail_bound += p.tail_bound;
    out.converged = out.converged && p.converged;
  }
  return out;
}

double neg_qb_log(const QParameters& params, const Tolerance& tol) {
  const auto p = q_pochhammer_inf(-params.qbreve(), params.qbreve(), tol);
  if (!p.converged) throw NonConvergence("(-qb; qb)_inf did not converge");
  return p.log_value.log_mag;
}

struct FilledEntry {
  complex F;
  complex T;
  bool converged;
};

FilledEntry fill_entry(const ExtremalMeasure& momentum, const ExtremalMeasure& coordinate,
                       int r_prime, int r, double log_neg_qb, const Tolerance& tol) {
  const ProductEntry e = product_entry(momentum, coordinate, r_prime, r, log_neg_qb, tol);
  LogComplex t = e.log_value;
  t.log_mag += 0.5 * (log_weight(coordinate, r) - log_weight(momentum, r_prime));
  return {e.value(), t.value(), e.converged};
}

}  // namespace

TransformAlphas transform_alphas(int r_prime, int r, double b_prime, double b,
                                 const QParameters& params) {
  const double tau = params.tau();
  const double s = std::log(b);
  const double sp = std::log(b_prime);
  const double rs = static_cast<double>(r) + r_prime;
  const double rd = static_cast<double>(r) - r_prime;
  return {complex{0.0, std::exp(-tau * (rs + 1.0) + s + sp)},
          complex{0.0, std::exp(-tau * (1.0 - rs) - s - sp)},
          complex{0.0, -std::exp(-tau * (rd + 1.0) + s - sp)},
          complex{0.0, -std::exp(-tau * (1.0 - rd) + sp - s)}};
}

SeriesEntry transform_entry_series(int r_prime, int r, double b_prime, double b,
                                   const QParameters& params, std::size_t N) {
  const SeriesTerms terms(r_prime, r, b_prime, b, params, N);
  SeriesEntry out;
  TailTracker tail;
  for (std::size_t n = 0; n <= N; ++n) {
    const complex t = terms(n);
    out.value += t;
    tail.push(std::abs(t));
  }
  out.terms = N + 1;
  out.tail_estimate = tail.estimate();
  return out;
}

SeriesEntry transform_entry_series(int r_prime, int r, double b_prime, double b,
                                   const QParameters& params, const Tolerance& tol) {
  tol.validate();
  const std::size_t cap = static_cast<std::size_t>(tol.max_terms);
  const SeriesTerms terms(r_prime, r, b_prime, b, params, cap);
  SeriesEntry out;
  TailTracker tail;
  int small_run = 0;
  std::size_t n = 0;
  for (; n <= cap; ++n) {
    const complex t = terms(n);
    out.value += t;
    tail.push(std::abs(t));
    small_run = std::abs(t) < tol.tail_eps * std::abs(out.value) ? small_run + 1 : 0;
    if (n >= 8 && small_run >= 3) break;
  }
  out.terms = std::min(n, cap) + 1;
  out.tail_estimate = tail.estimate();
  return out;
}

ProductEntry transform_entry_product(int r_prime, int r, double b_prime, double b,
                                     const QParameters& params, const Tolerance& tol) {
  tol.validate();
  const ExtremalMeasure momentum(params, b_prime, Kind::Momentum, tol);
  const ExtremalMeasure coordinate(params, b, Kind::Position, tol);
  return product_entry(momentum, coordinate, r_prime, r, neg_qb_log(params, tol), tol);
}

TransformMatrix::TransformMatrix(const QParameters& params, double b, double b_prime,
                                 SpectralWindow window, std::vector<complex> F,
                                 std::vector<complex> T)
    : params_(params), b_(b), b_prime_(b_prime), window_(window), F_(std::move(F)),
      T_(std::move(T)) {
  const std::size_t expected = window_.size() * window_.size();
  if (F_.size() != expected || T_.size() != expected)
    throw std::invalid_argument("transform entries do not match the window");
}

double TransformMatrix::column_norm_squared(int r) const {
  double acc = 0.0;
  for (int rp = window_.r_min; rp <= window_.r_max; ++rp) acc += std::norm(T(rp, r));
  return acc;
}

double TransformMatrix::row_norm_squared(int r_prime) const {
  double acc = 0.0;
  for (int r = window_.r_min; r <= window_.r_max; ++r) acc += std::norm(T(r_prime, r));
  return acc;
}

double TransformMatrix::max_column_deviation(int lo, int hi) const {
  double worst = 0.0;
  for (int r = std::max(lo, window_.r_min); r <= std::min(hi, window_.r_max); ++r)
    worst = std::max(worst, std::abs(column_norm_squared(r) - 1.0));
  return worst;
}

double TransformMatrix::max_row_deviation(int lo, int hi) const {
  double worst = 0.0;
  for (int rp = std::max(lo, window_.r_min); rp <= std::min(hi, window_.r_max); ++rp)
    worst = std::max(worst, std::abs(row_norm_squared(rp) - 1.0));
  return worst;
}

double TransformMatrix::max_column_deviation() const {
  return max_column_deviation(window_.r_min, window_.r_max);
}

double TransformMatrix::max_row_deviation() const {
  return max_row_deviation(window_.r_min, window_.r_max);
}

TransformMatrix build_transform(double b_prime, double b, const QParameters& params,
                                const SpectralWindow& window, const Tolerance& tol,
                                const TransformOptions& options) {
  tol.validate();
  const ExtremalMeasure momentum(params, b_prime, Kind::Momentum, tol);
  const ExtremalMeasure coordinate(params, b, Kind::Position, tol);
  const double log_neg_qb = neg_qb_log(params, tol);

  const std::size_t W = window.size();
  const long total = static_cast<long>(W * W);
  std::vector<complex> F(W * W), T(W * W);
  bool converged = true;

  auto fill = [&](long k) {
    const int rp = window.r_min + static_cast<int>(k / static_cast<long>(W));
    const int r = window.r_min + static_cast<int>(k % static_cast<long>(W));
    const FilledEntry e = fill_entry(momentum, coordinate, rp, r, log_neg_qb, tol);
    F[k] = e.F;
    T[k] = e.T;
    return e.converged;
  };

  if (options.mode == FillMode::Serial) {
    for (long k = 0; k < total; ++k) converged = fill(k) && converged;
  } else {
#ifdef _OPENMP
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads) reduction(&& : converged)
#endif
    for (long k = 0; k < total; ++k) converged = fill(k) && converged;
  }
  if (!converged) throw NonConvergence("transform product entries did not converge");

  TransformMatrix M(params, b, b_prime, window, std::move(F), std::move(T));

  if (options.validate == 0) return M;

  int lo = std::max(window.r_min, -options.validation_radius);
  int hi = std::min(window.r_max, options.validation_radius);
  if (lo > hi) {
    lo = window.r_min;
    hi = window.r_max;
  }
  const std::size_t side = static_cast<std::size_t>(hi - lo + 1);
  const std::size_t wanted = std::min(options.validate, side * side);

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(lo, hi);
  std::set<std::pair<int, int>> chosen;
  while (chosen.size() < wanted) chosen.emplace(pick(rng), pick(rng));

  double worst = 0.0;
  std::pair<int, int> worst_at{lo, lo};
  for (const auto& [rp, r] : chosen) {
    const complex series = transform_entry_series(rp, r, b_prime, b, params, tol).value;
    const complex product = M.F(rp, r);
    const double dev = std::abs(series - product) / std::max(std::abs(series), 1e-300);
    if (dev > worst) {
      worst = dev;
      worst_at = {rp, r};
    }
  }
  M.validation_discrepancy = worst;
  M.validated_entries = chosen.size();
  if (!(worst <= options.validation_tol))
    throw ValidationFailure("transform entry disagrees with its series form", worst_at.first,
                            worst_at.second, worst);
  return M;
}

GridFunction apply_transform(const TransformMatrix& M, const GridFunction& momentum) {
  if (!(momentum.window == M.window()))
    throw WindowMismatch("momentum grid window differs from the transform window");
  if (momentum.measure.kind() != Kind::Momentum || momentum.measure.b() != M.b_prime())
    throw WindowMismatch("input is not on the momentum grid of b'");

  const SpectralWindow& w = M.window();
  GridFunction out{ExtremalMeasure(M.params(), M.b(), Kind::Position), w,
                   std::vector<complex>(w.size())};
  const int count = static_cast<int>(w.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    const int r = w.r_min + i;
    complex acc{};
    for (int rp = w.r_min; rp <= w.r_max; ++rp) acc += M.F(rp, r) * momentum.at(rp);
    out.values[i] = acc;
  }
  return out;
}

GridFunction apply_inverse(const TransformMatrix& M, const GridFunction& coordinate) {
  if (!(coordinate.window == M.window()))
    throw WindowMismatch("coordinate grid window differs from the transform window");
  if (coordinate.measure.kind() != Kind::Position || coordinate.measure.b() != M.b())
    throw WindowMismatch("input is not on the coordinate grid of b");

  const SpectralWindow& w = M.window();
  const ExtremalMeasure momentum(M.params(), M.b_prime(), Kind::Momentum);
  GridFunction out{momentum, w, std::vector<complex>(w.size())};
  std::vector<double> lw(w.size());
  for (int r = w.r_min; r <= w.r_max; ++r) lw[w.index(r)] = log_weight(coordinate.measure, r);

  const int count = static_cast<int>(w.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    const int rp = w.r_min + i;
    const double lwp = log_weight(momentum, rp);
    complex acc{};
    for (int r = w.r_min; r <= w.r_max; ++r)
      acc += std::exp(0.5 * (lw[w.index(r)] - lwp)) * std::conj(M.T(rp, r)) * coordinate.at(r);
    out.values[i] = acc;
  }
  return out;
}

}  // namespace qosc
