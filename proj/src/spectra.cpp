#include "qosc/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qosc {

namespace {

constexpr int kMaxWindowRadius = 200;

complex minus_i_power(std::size_t n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// Orthonormal polynomials p_n(x) of the position Jacobi matrix, built from
// the log-scaled h_n recurrence: p_n = qb^{n(n+1)/4} (qb;qb)_n^{-1/2} h_n(x').
std::vector<double> orthonormal_family(double x, std::size_t N, const QParameters& params) {
  std::vector<double> out = P_family(N, x, params);
  for (std::size_t n = 1; n <= N; n += 2) out[n] = -out[n];
  return out;
}

// log |p_n(x)|, finite even where p_n itself would overflow.
std::vector<double> log_abs_family(double x, std::size_t N, const QParameters& params) {
  const auto h = h_sequence_scaled(N, scaled_argument(x, params), params);
  std::vector<double> out(N + 1);
  for (std::size_t n = 0; n <= N; ++n)
    out[n] = h[n].sign == 0 ? -std::numeric_limits<double>::infinity()
                            : log_coefficient_norm(n, params) + h[n].log_abs;
  return out;
}

std::vector<complex> eigen_family(const ExtremalMeasure& m, int r, std::size_t N) {
  const auto p = orthonormal_family(spectrum_point(m, r), N, m.params());
  std::vector<complex> out(N + 1);
  for (std::size_t n = 0; n <= N; ++n)
    out[n] = m.kind() == Kind::Position ? complex{p[n], 0.0} : minus_i_power(n) * p[n];
  return out;
}

// log(1 + e^y)
double softplus(double y) {
  return y > 35.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

// log |x|^n with |0|^0 = 1.
double log_power(double x, std::size_t n) {
  return n == 0 ? 0.0 : static_cast<double>(n) * std::log(std::abs(x));
}

std::pair<double, double> split_root(double xs) {
  const double root = std::hypot(1.0, xs);
  if (xs >= 0.0) {
    const double plus = root + xs;
    return {plus, 1.0 / plus};
  }
  const double minus = root - xs;
  return {1.0 / minus, minus};
}

}  // namespace

ExtremalMeasure::ExtremalMeasure(const QParameters& params, double b, Kind kind,
                                 const Tolerance& tol)
    : params_(params), b_(b), sigma_(std::log(b)), kind_(kind) {
  if (!params.is_oscillator())
    throw std::invalid_argument("extremal measures require q > 1");
  const double qb = params.qbreve();
  if (!std::isfinite(b) || b < qb * (1.0 - 4 * std::numeric_limits<double>::epsilon()) ||
      !(b < 1.0))
    throw std::invalid_argument("b must lie in [1/q, 1)");

  const auto p1 = q_pochhammer_inf(-b * b, qb, tol);
  const auto p2 = q_pochhammer_inf(-qb / (b * b), qb, tol);
  const auto p3 = q_pochhammer_inf(qb, qb, tol);
  if (!p1.converged || !p2.converged || !p3.converged)
    throw NonConvergence("weight normalizer products did not converge");
  log_normalizer_ = p1.log_value.log_mag + p2.log_value.log_mag + p3.log_value.log_mag;
}

SpectralWindow::SpectralWindow(int lo, int hi) : r_min(lo), r_max(hi) {
  if (lo > hi) throw std::invalid_argument("window requires r_min <= r_max");
}

double GridFunction::weighted_norm() const {
  double acc = 0.0;
  for (int r = window.r_min; r <= window.r_max; ++r)
    acc += std::exp(log_weight(measure, r)) * std::norm(at(r));
  return std::sqrt(acc);
}

double spectrum_point(const ExtremalMeasure& m, int r) {
  const auto& p = m.params();
  const double x = 2.0 * std::sinh(p.tau() * r - m.sigma()) / std::sqrt(p.q() - 1.0);
  if (!std::isfinite(x)) throw std::overflow_error("spectral point overflows");
  return x;
}

double log_weight(const ExtremalMeasure& m, int r) {
  const double rr = static_cast<double>(r);
  const double tau = m.params().tau();
  // b^{4r} qb^{r(2r-1)} (1 + b^2 qb^{2r}) / normalizer
  return 4.0 * rr * m.sigma() - rr * (2.0 * rr - 1.0) * tau +
         softplus(2.0 * m.sigma() - 2.0 * rr * tau) - m.log_normalizer();
}

WeightResult weight(const ExtremalMeasure& m, int r) {
  WeightResult out;
  out.log_value = log_weight(m, r);
  out.value = std::exp(out.log_value);
  out.underflow = out.value == 0.0 || out.value < std::numeric_limits<double>::min();
  return out;
}

Extension locate_extension(double x0, const QParameters& params, Kind) {
  if (!std::isfinite(x0)) throw std::invalid_argument("x0 must be finite");
  if (!params.is_oscillator()) throw std::invalid_argument("locate requires q > 1");
  const double theta = std::asinh(scaled_argument(x0, params));
  const double k = theta / params.tau();
  const double nearest = std::round(k);
  // sigma = tau r - theta must land in [-tau, 0)
  if (std::abs(k - nearest) <= 1e-12 * std::max(1.0, std::abs(k)))
    return {params.qbreve(), static_cast<int>(nearest) - 1};
  const int r = static_cast<int>(std::ceil(k)) - 1;
  return {std::exp(params.tau() * r - theta), r};
}

CoefficientFamily eigenvector_coefficients(const ExtremalMeasure& m, int r, std::size_t N) {
  CoefficientFamily out;
  out.kind = m.kind();
  out.eval_point = spectrum_point(m, r);
  out.values = eigen_family(m, r, N);
  return out;
}

CoefficientFamily normalized_eigenvector_coefficients(const ExtremalMeasure& m, int r,
                                                      std::size_t N) {
  CoefficientFamily out = eigenvector_coefficients(m, r, N);
  const double c = std::exp(0.5 * log_weight(m, r));
  for (auto& v : out.values) v *= c;
  return out;
}

MassIdentityResult mass_identity(const ExtremalMeasure& m, int r, std::size_t N) {
  if (N < 1) throw std::invalid_argument("mass identity needs N >= 1");
  const auto logs = log_abs_family(spectrum_point(m, r), N, m.params());
  const double lw = log_weight(m, r);
  MassIdentityResult out;
  for (std::size_t n = 0; n <= N; ++n) out.value += std::exp(lw + 2.0 * logs[n]);

  // Compare the block n in (N/2, N] with the block n in (N/4, N/2].
  double previous = 0.0, late = 0.0;
  for (std::size_t n = N / 4 + 1; n <= N; ++n) {
    const double term = std::exp(lw + 2.0 * logs[n]);
    if (n <= N / 2) previous += term; else late += term;
  }
  out.slow_convergence = late > 0.5 * previous;
  return out;
}

double orthogonality_boundary_term(const ExtremalMeasure& m, std::size_t N,
                                   const SpectralWindow& window) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int r : {window.r_min, window.r_max}) {
    const auto logs = log_abs_family(spectrum_point(m, r), N, m.params());
    const double lw = log_weight(m, r);
    for (double l : logs) worst = std::max(worst, lw + 2.0 * l);
  }
  return std::exp(worst);
}

SpectralWindow auto_window(const ExtremalMeasure& m, std::size_t N, const Tolerance& tol) {
  double boundary = 0.0;
  for (int R = 1; R <= kMaxWindowRadius; ++R) {
    const auto w = SpectralWindow::symmetric(R);
    boundary = orthogonality_boundary_term(m, N, w);
    if (boundary < tol.tail_eps) return w;
  }
  throw WindowTooSmall("no window with R <= 200 meets the boundary tolerance", boundary);
}

SpectralWindow auto_moment_window(const ExtremalMeasure& m, std::size_t n,
                                  const Tolerance& tol) {
  const double log_eps = std::log(tol.tail_eps);
  double worst = 0.0;
  for (int R = 1; R <= kMaxWindowRadius; ++R) {
    worst = -std::numeric_limits<double>::infinity();
    for (int r : {-R, R})
      worst = std::max(worst, log_weight(m, r) + log_power(spectrum_point(m, r), n));
    if (worst < log_eps) return SpectralWindow::symmetric(R);
  }
  throw WindowTooSmall("no window with R <= 200 meets the moment tolerance", std::exp(worst));
}

GridTable build_grid_table(const ExtremalMeasure& m, const SpectralWindow& window,
                           std::size_t N) {
  GridTable t;
  t.window = window;
  const std::size_t size = window.size();
  t.points.resize(size);
  t.log_weights.resize(size);
  t.families.resize(size);
  const int count = static_cast<int>(size);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const int r = window.r_min + i;
    t.points[i] = spectrum_point(m, r);
    t.log_weights[i] = log_weight(m, r);
    t.families[i] = eigen_family(m, r, N);
  }
  return t;
}

OrthogonalityReport verify_orthogonality(const ExtremalMeasure& m, std::size_t N,
                                         const SpectralWindow& window, const Tolerance& tol) {
  const double boundary = orthogonality_boundary_term(m, N, window);
  if (!(boundary < tol.tail_eps))
    throw WindowTooSmall("orthogonality window too small", boundary);

  const GridTable t = build_grid_table(m, window, N);
  std::vector<complex> gram((N + 1) * (N + 1));
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double w = std::exp(t.log_weights[i]);
    const auto& f = t.families[i];
    for (std::size_t n = 0; n <= N; ++n)
      for (std::size_t k = 0; k <= N; ++k) gram[n * (N + 1) + k] += w * f[n] * std::conj(f[k]);
  }

  OrthogonalityReport out;
  out.window = window;
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t k = 0; k <= N; ++k) {
      const double dev = std::abs(gram[n * (N + 1) + k] - (n == k ? 1.0 : 0.0));
      if (dev > out.max_deviation) {
        out.max_deviation = dev;
        out.worst_n = n;
        out.worst_n_prime = k;
      }
    }
  return out;
}

OrthogonalityReport verify_orthogonality(const ExtremalMeasure& m, std::size_t N,
                                         const Tolerance& tol) {
  return verify_orthogonality(m, N, auto_window(m, N, tol), tol);
}

complex dual_orthogonality(const ExtremalMeasure& m, int r, int r_prime, std::size_t N) {
  if (N < 1) throw std::invalid_argument("dual orthogonality needs N >= 1");
  const auto f = eigen_family(m, r, N);
  const auto g = eigen_family(m, r_prime, N);
  complex acc{};
  for (std::size_t n = 0; n <= N; ++n) acc += f[n] * std::conj(g[n]);
  return std::exp(0.5 * (log_weight(m, r) + log_weight(m, r_prime))) * acc;
}

GridFunction isometry_omega(const FockVector& v, const ExtremalMeasure& m,
                            const SpectralWindow& window, const Tolerance& tol) {
  const std::size_t N = v.truncation();
  const double boundary = orthogonality_boundary_term(m, N, window);
  if (!(boundary < tol.tail_eps)) throw WindowTooSmall("isometry window too small", boundary);

  const GridTable t = build_grid_table(m, window, N);
  GridFunction out{m, window, std::vector<complex>(window.size())};
  for (std::size_t i = 0; i < window.size(); ++i) {
    complex acc{};
    for (std::size_t n = 0; n <= N; ++n) acc += v[n] * std::conj(t.families[i][n]);
    out.values[i] = acc;
  }
  return out;
}

GridFunction multiply_by_point(const GridFunction& f) {
  GridFunction out = f;
  for (int r = f.window.r_min; r <= f.window.r_max; ++r)
    out.values[f.window.index(r)] *= spectrum_point(f.measure, r);
  return out;
}

EigenfunctionValue eigenfunction_product(double x, double y, const QParameters& params,
                                         const Tolerance& tol) {
  const double qb = params.qbreve();
  const auto [plus, minus] = split_root(scaled_argument(x, params));
  const auto first = q_pochhammer_inf(-y * qb * plus, qb, tol);
  const auto second = q_pochhammer_inf(y * qb * minus, qb, tol);
  return {(first.log_value * second.log_value).value(),
          first.tail_bound + second.tail_bound, first.converged && second.converged};
}

EigenfunctionValue momentum_eigenfunction_product(double p, double y,
                                                  const QParameters& params,
                                                  const Tolerance& tol) {
  const double qb = params.qbreve();
  const auto [plus, minus] = split_root(scaled_argument(p, params));
  const auto first = q_pochhammer_inf(complex{0.0, y * qb * plus}, qb, tol);
  const auto second = q_pochhammer_inf(complex{0.0, -y * qb * minus}, qb, tol);
  return {(first.log_value * second.log_value).value(),
          first.tail_bound + second.tail_bound, first.converged && second.converged};
}

namespace {

// y^n qb^{n(n+1)/2} / (qb;qb)_n h_n(x') as a signed log, n = 0..N.
std::vector<SignedLog> generating_terms(double x, double y, const QParameters& params,
                                        std::size_t N) {
  std::vector<SignedLog> out(N + 1);
  out[0] = {0.0, 1};
  if (y == 0.0) {
    for (std::size_t n = 1; n <= N; ++n) out[n] = {-std::numeric_limits<double>::infinity(), 0};
    return out;
  }
  const auto h = h_sequence_scaled(N, scaled_argument(x, params), params);
  const double log_y = std::log(std::abs(y));
  const int sign_y = y > 0.0 ? 1 : -1;
  for (std::size_t n = 1; n <= N; ++n) {
    const double nn = static_cast<double>(n);
    const int sign = h[n].sign * ((n % 2 == 1) ? sign_y : 1);
    out[n] = {nn * log_y - 0.5 * nn * (nn + 1.0) * params.tau() -
                  log_qb_factorial(n, params.qbreve()) + h[n].log_abs,
              sign};
  }
  return out;
}

}  // namespace

double eigenfunction_series(double x, double y, const QParameters& params, std::size_t N) {
  double acc = 0.0;
  for (const auto& t : generating_terms(x, y, params, N)) acc += t.value();
  return acc;
}

complex momentum_eigenfunction_series(double p, double y, const QParameters& params,
                                      std::size_t N) {
  const auto terms = generating_terms(p, y, params, N);
  complex acc{};
  for (std::size_t n = 0; n <= N; ++n) acc += minus_i_power(n) * terms[n].value();
  return acc;
}

double compute_moment(const ExtremalMeasure& m, std::size_t n, const SpectralWindow& window,
                      const Tolerance& tol) {
  const double log_eps = std::log(tol.tail_eps);
  for (int r : {window.r_min, window.r_max}) {
    const double lb = log_weight(m, r) + log_power(spectrum_point(m, r), n);
    if (!(lb < log_eps)) throw WindowTooSmall("moment window too small", std::exp(lb));
  }
  double acc = 0.0;
  for (int r = window.r_min; r <= window.r_max; ++r)
    acc += std::exp(log_weight(m, r)) * std::pow(spectrum_point(m, r), static_cast<double>(n));
  return acc;
}

double compute_moment(const ExtremalMeasure& m, std::size_t n, const Tolerance& tol) {
  return compute_moment(m, n, auto_moment_window(m, n, tol), tol);
}

}  // namespace qosc
