#include "qosc/qhermite.hpp"

#include <algorithm>
#include <vector>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qosc {

namespace {

constexpr std::size_t kExplicitSumLimit = 12;
constexpr double kGateTolerance = 1e-9;
constexpr double kCancellationRatio = 1e12;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// s = sqrt(x^2+1) + x and 1/s = sqrt(x^2+1) - x, each formed without
// cancellation.
std::pair<double, double> hermite_base(double x) {
  const double root = std::hypot(x, 1.0);
  if (x >= 0.0) {
    const double s = root + x;
    return {s, 1.0 / s};
  }
  const double inv = root - x;
  return {1.0 / inv, inv};
}

// log(q^m - 1) without overflow.
double log_q_power_minus_one(std::size_t m, double tau) {
  const double t = static_cast<double>(m) * tau;
  if (t > 30.0) return t + std::log1p(-std::exp(-t));
  return std::log(std::expm1(t));
}

SignedLog signed_log(double v) {
  if (v == 0.0) return {kNegInf, 0};
  return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

// a - b on signed logs.
SignedLog subtract(const SignedLog& a, const SignedLog& b) {
  if (b.sign == 0) return a;
  if (a.sign == 0) return {b.log_abs, -b.sign};
  const double top = std::max(a.log_abs, b.log_abs);
  const double diff = a.sign * std::exp(a.log_abs - top) - b.sign * std::exp(b.log_abs - top);
  if (diff == 0.0) return {kNegInf, 0};
  return {top + std::log(std::abs(diff)), diff > 0.0 ? 1 : -1};
}

complex i_power(std::size_t n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

const char* to_string(Kind k) {
  return k == Kind::Position ? "position" : "momentum";
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

HSumResult h_poly_sum_checked(std::size_t n, double x, const QParameters& params) {
  const auto [s, s_inv] = hermite_base(x);
  // qbreve^{k(k-n)} [n k]_qbreve = [n k]_q, built row by row with q-Pascal.
  std::vector<double> binom{1.0};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<double> row(m + 1, 1.0);
    double qk = 1.0;
    for (std::size_t k = 1; k < m; ++k) {
      qk *= params.q();
      row[k] = binom[k - 1] + qk * binom[k];
    }
    binom = std::move(row);
  }

  HSumResult out;
  double sum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const long power = static_cast<long>(n) - 2 * static_cast<long>(k);
    const double base = power >= 0 ? std::pow(s, static_cast<double>(power))
                                   : std::pow(s_inv, static_cast<double>(-power));
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * binom[k] * base;
    out.largest_term = std::max(out.largest_term, std::abs(term));
    sum += term;
  }
  out.value = sum;
  out.cancellation_warning = out.largest_term > kCancellationRatio * std::abs(sum);
  return out;
}

double h_poly_sum(std::size_t n, double x, const QParameters& params) {
  return h_poly_sum_checked(n, x, params).value;
}

double h_poly_rec(std::size_t n, double x, const QParameters& params) {
  if (n == 0) return 1.0;
  const double q = params.q();
  double prev = 1.0;
  double cur = 2.0 * x;
  double qm = 1.0;
  for (std::size_t m = 1; m < n; ++m) {
    qm *= q;
    const double next = 2.0 * x * cur - (qm - 1.0) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<SignedLog> h_sequence_scaled(std::size_t N, double x,
                                         const QParameters& params) {
  std::vector<SignedLog> h(N + 1);
  h[0] = {0.0, 1};
  if (N == 0) return h;
  h[1] = signed_log(2.0 * x);
  const SignedLog two_x = signed_log(2.0 * x);
  for (std::size_t m = 1; m < N; ++m) {
    SignedLog lead{two_x.log_abs + h[m].log_abs, two_x.sign * h[m].sign};
    if (lead.sign == 0) lead.log_abs = kNegInf;
    SignedLog trail{log_q_power_minus_one(m, params.tau()) + h[m - 1].log_abs, h[m - 1].sign};
    if (trail.sign == 0) trail.log_abs = kNegInf;
    h[m + 1] = subtract(lead, trail);
  }
  return h;
}

double scaled_argument(double x, const QParameters& params) {
  return 0.5 * std::sqrt(params.q() - 1.0) * x;
}

double log_coefficient_norm(std::size_t n, const QParameters& params) {
  const double nn = static_cast<double>(n);
  return 0.25 * nn * (nn + 1.0) * -params.tau() -
         0.5 * log_qb_factorial(n, params.qbreve());
}

double P_coeff(std::size_t n, double x, const QParameters& params) {
  const double xs = scaled_argument(x, params);
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  if (n <= kExplicitSumLimit) {
    const double by_sum = h_poly_sum(n, xs, params);
    const double by_rec = h_poly_rec(n, xs, params);
    if (std::abs(by_sum - by_rec) > kGateTolerance * std::max(1.0, std::abs(by_sum)))
      throw std::logic_error("h_n evaluators disagree");
    return sign * std::exp(log_coefficient_norm(n, params)) * by_sum;
  }
  const SignedLog h = h_sequence_scaled(n, xs, params)[n];
  if (h.sign == 0) return 0.0;
  return sign * h.sign * std::exp(log_coefficient_norm(n, params) + h.log_abs);
}

complex P_tilde_coeff(std::size_t n, double p, const QParameters& params) {
  // i^n times the unsigned magnitude of P_n(p)
  const double unsigned_value = (n % 2 == 0 ? 1.0 : -1.0) * P_coeff(n, p, params);
  return i_power(n) * unsigned_value;
}

std::vector<double> P_family(std::size_t N, double x, const QParameters& params) {
  const auto h = h_sequence_scaled(N, scaled_argument(x, params), params);
  std::vector<double> out(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    if (h[n].sign == 0) continue;
    const double sign = (n % 2 == 0 ? 1.0 : -1.0) * h[n].sign;
    out[n] = sign * std::exp(log_coefficient_norm(n, params) + h[n].log_abs);
  }
  return out;
}

std::vector<complex> P_tilde_family(std::size_t N, double p,
                                    const QParameters& params) {
  const auto h = h_sequence_scaled(N, scaled_argument(p, params), params);
  std::vector<complex> out(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    if (h[n].sign == 0) continue;
    out[n] = i_power(n) * (h[n].sign * std::exp(log_coefficient_norm(n, params) + h[n].log_abs));
  }
  return out;
}

bool CoefficientFamily::tail_decreasing() const {
  const std::size_t N = values.size();
  if (N < 8) return true;
  const std::size_t quarter = N / 4;
  double previous = 0.0, last = 0.0;
  for (std::size_t n = N - 2 * quarter; n < N - quarter; ++n) previous += std::norm(values[n]);
  for (std::size_t n = N - quarter; n < N; ++n) last += std::norm(values[n]);
  return last <= previous;
}

}  // namespace qosc
