#include "qosc/qcore.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qosc {

QParameters::QParameters(double q)
    : q_(q), qbreve_(1.0 / q), tau_(std::log(q)) {}

QParameters QParameters::oscillator(double q) {
  if (!std::isfinite(q) || !(q > 1.0))
    throw std::invalid_argument("oscillator requires q > 1");
  return QParameters(q);
}

QParameters QParameters::relaxed(double q) {
  if (!std::isfinite(q) || !(q > 0.0) || q == 1.0)
    throw std::invalid_argument("relaxed parameters require 0 < q != 1");
  return QParameters(q);
}

void Tolerance::validate() const {
  if (!(rel_tol > 0.0) || !(tail_eps > 0.0) || max_terms < 8)
    throw std::invalid_argument(
        "tolerance fields must be positive and max_terms >= 8");
}

LogComplex LogComplex::from(complex z) {
  const double mag = std::abs(z);
  if (mag == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  return {std::log(mag), std::arg(z)};
}

complex LogComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(log_mag), phase);
}

bool LogComplex::is_zero() const {
  return log_mag == -std::numeric_limits<double>::infinity();
}

double q_number(std::size_t n, const QParameters& params) {
  const double q = params.q();
  const double qn = std::pow(q, static_cast<double>(n));
  if (!std::isfinite(qn)) throw std::overflow_error("q_number: q^n overflows");
  return (qn - 1.0) / (q - 1.0);
}

complex q_pochhammer(complex a, double qb, std::size_t n) {
  complex product{1.0, 0.0};
  double power = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    product *= 1.0 - a * power;
    power *= qb;
  }
  return product;
}

LogComplex log_q_pochhammer(complex a, double qb, std::size_t n) {
  LogComplex acc;
  double power = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    acc *= LogComplex::from(1.0 - a * power);
    power *= qb;
  }
  return acc;
}

PochhammerResult q_pochhammer_inf(complex a, double qb, const Tolerance& tol) {
  tol.validate();
  PochhammerResult out;
  const double abs_a = std::abs(a);
  if (abs_a == 0.0) {
    out.factors = 8;
    return out;
  }

  double power = 1.0;
  int s = 0;
  for (;;) {
    const double term = abs_a * power;
    if (s >= 8 && term < tol.tail_eps) break;
    if (s >= tol.max_terms) {
      out.converged = false;
      break;
    }
    out.log_value *= LogComplex::from(1.0 - a * power);
    power *= qb;
    ++s;
  }
  out.factors = s;
  out.tail_bound = abs_a * power / (1.0 - qb);
  return out;
}

double log_qb_factorial(std::size_t n, double qb) {
  double acc = 0.0;
  double power = qb;
  for (std::size_t k = 1; k <= n; ++k) {
    acc += std::log1p(-power);
    power *= qb;
  }
  return acc;
}

}  // namespace qosc
