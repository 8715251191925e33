#include "qosc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>

#include "qosc/fock.hpp"
#include "qosc/jacobi.hpp"
#include "qosc/qfourier.hpp"
#include "qosc/qhermite.hpp"
#include "qosc/spectra.hpp"

namespace qosc {
namespace {

double relative(complex a, complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

/// (sum_r m_r |f(r) - g(r)|^2)^{1/2} under the measure of f.
double weighted_distance(const GridFunction& f, const GridFunction& g) {
  double sq = 0.0;
  for (int r = f.window.r_min; r <= f.window.r_max; ++r)
    sq += weight(f.measure, r).value * std::norm(f.at(r) - g.at(r));
  return std::sqrt(sq);
}

double transform_b_prime(const VerifyContext& ctx) { return ctx.b_prime.value_or(ctx.b); }

CheckOutcome evaluator_gate(const VerifyContext& ctx) {
  double worst = 0.0;
  for (double x : {-1.5, -1.0, -0.5, -0.1, 0.0, 0.3, 0.5, 1.0, 2.0}) {
    for (std::size_t n = 0; n <= 12; ++n) {
      const double rec = h_poly_rec(n, x, ctx.params);
      const double sum = h_poly_sum(n, x, ctx.params);
      worst = std::max(worst, std::abs(rec - sum) / std::max(1.0, std::abs(sum)));
    }
  }
  return {worst, 1e-9, "h_n recurrence vs explicit sum, n <= 12"};
}

CheckOutcome orthogonality(const VerifyContext& ctx) {
  double worst = 0.0;
  for (double b : {ctx.b, transform_b_prime(ctx)}) {
    ExtremalMeasure m(ctx.params, b, Kind::Position, ctx.tol);
    worst = std::max(worst, verify_orthogonality(m, 15, ctx.tol).max_deviation);
  }
  return {worst, 1e-8, "sum_r m_r P_n P_n' vs delta, N = 15, auto window"};
}

CheckOutcome mass_check(const VerifyContext& ctx) {
  ExtremalMeasure m(ctx.params, ctx.b, Kind::Position, ctx.tol);
  double worst = 0.0;
  for (int r = -5; r <= 5; ++r)
    worst = std::max(worst, std::abs(mass_identity(m, r, 80).value - 1.0));
  return {worst, 1e-6, "m_r sum_{n<=80} P_n^2 vs 1, r in [-5, 5]"};
}

CheckOutcome eigenfunction_check(const VerifyContext& ctx) {
  double worst = 0.0;
  for (double x : {0.0, 0.5, -0.5, 1.5, -1.5}) {
    for (double y : {0.0, 0.3, -0.3}) {
      const complex product = eigenfunction_product(x, y, ctx.params, ctx.tol).value;
      const double series = eigenfunction_series(x, y, ctx.params, 200);
      worst = std::max(worst, relative(product, series));
      const complex xi = momentum_eigenfunction_product(x, y, ctx.params, ctx.tol).value;
      const complex xi_series = momentum_eigenfunction_series(x, y, ctx.params, 200);
      worst = std::max(worst, relative(xi, xi_series));
    }
  }
  return {worst, 1e-10, "phi and xi: product vs generating series"};
}

CheckOutcome multiplication_check(const VerifyContext& ctx) {
  ExtremalMeasure m(ctx.params, ctx.b, Kind::Position, ctx.tol);
  const SpectralWindow window = auto_window(m, 14, ctx.tol);
  double worst = 0.0;
  for (std::size_t n = 0; n <= 12; ++n) {
    const FockVector v = FockVector::basis(n, 14);
    const FockVector Qv = apply_annihilation(v, ctx.params) + apply_creation(v, ctx.params);
    const GridFunction lhs = isometry_omega(Qv, m, window, ctx.tol);
    const GridFunction rhs = multiply_by_point(isometry_omega(v, m, window, ctx.tol));
    double sq = 0.0;
    for (int r = window.r_min; r <= window.r_max; ++r)
      sq += weight(m, r).value * std::norm(lhs.at(r) - rhs.at(r));
    worst = std::max(worst, std::sqrt(sq));
  }
  return {worst, 1e-8, "||Omega(Q|n>) - x Omega|n>||, n <= 12"};
}

CheckOutcome isometry_check(const VerifyContext& ctx) {
  std::mt19937_64 rng(0x15e7ULL);
  std::normal_distribution<double> gauss;
  std::vector<complex> c(16);
  for (auto& z : c) z = {gauss(rng), gauss(rng)};
  const FockVector v(c);
  double worst = 0.0;
  for (Kind kind : {Kind::Position, Kind::Momentum}) {
    ExtremalMeasure m(ctx.params, ctx.b, kind, ctx.tol);
    const GridFunction f = isometry_omega(v, m, auto_window(m, 15, ctx.tol), ctx.tol);
    worst = std::max(worst, std::abs(f.weighted_norm() - v.norm()) / v.norm());
  }
  return {worst, 1e-8, "relative norm change under Omega and Omega'"};
}

CheckOutcome moments_check(const VerifyContext& ctx) {
  ExtremalMeasure m(ctx.params, ctx.b, Kind::Position, ctx.tol);
  ExtremalMeasure other(ctx.params, transform_b_prime(ctx), Kind::Position, ctx.tol);
  const JacobiOperator J = position_jacobi(ctx.params);
  // (J^n)_{00} via repeated application to e_0.
  std::vector<double> e(8, 0.0);
  e[0] = 1.0;
  double worst = 0.0;
  for (std::size_t n = 0; n <= 6; ++n) {
    const double exact = e[0];
    const double c = compute_moment(m, n, ctx.tol);
    const double c_other = compute_moment(other, n, ctx.tol);
    const double scale = std::max(1.0, std::abs(exact));
    worst = std::max({worst, std::abs(c - exact) / scale, std::abs(c_other - exact) / scale});
    std::vector<double> next(e.size(), 0.0);
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      next[k + 1] += J.a(k) * e[k];
      next[k] += J.a(k) * e[k + 1];
      next[k] += J.b(k) * e[k];
    }
    e = next;
  }
  return {worst, 1e-8, "moments c_n, n <= 6, vs (J^n)_00 under both measures"};
}

CheckOutcome locate_check(const VerifyContext& ctx) {
  double worst = 0.0;
  ExtremalMeasure m(ctx.params, ctx.b, Kind::Position, ctx.tol);
  for (int r = -6; r <= 6; ++r) {
    const double x0 = spectrum_point(m, r);
    const Extension e = locate_extension(x0, ctx.params);
    ExtremalMeasure located(ctx.params, e.b, Kind::Position, ctx.tol);
    worst = std::max(worst, std::abs(spectrum_point(located, e.r) - x0) /
                                std::max(1.0, std::abs(x0)));
  }
  return {worst, 1e-12, "x_b(r) -> (b, r) -> x round trip, r in [-6, 6]"};
}

CheckOutcome fourier_product_check(const VerifyContext& ctx) {
  std::mt19937_64 rng(0xf00dULL);
  std::uniform_int_distribution<int> pick(-6, 6);
  const double bp = transform_b_prime(ctx);
  double worst = 0.0;
  for (int k = 0; k < 25; ++k) {
    const int rp = pick(rng);
    const int r = pick(rng);
    const complex product = transform_entry_product(rp, r, bp, ctx.b, ctx.params, ctx.tol).value();
    const complex series = transform_entry_series(rp, r, bp, ctx.b, ctx.params, ctx.tol).value;
    worst = std::max(worst, std::abs(product - series) / std::abs(series));
  }
  return {worst, 1e-7, "F_{r'r} product vs series, 25 entries in [-6, 6]^2"};
}

struct FockImages {
  TransformMatrix matrix;
  std::vector<GridFunction> momentum;
  std::vector<GridFunction> coordinate;
};

FockImages fock_images(const VerifyContext& ctx, int R, std::size_t count) {
  const SpectralWindow window = SpectralWindow::symmetric(R);
  TransformMatrix M = build_transform(transform_b_prime(ctx), ctx.b, ctx.params, window, ctx.tol);
  ExtremalMeasure mom(ctx.params, transform_b_prime(ctx), Kind::Momentum, ctx.tol);
  ExtremalMeasure pos(ctx.params, ctx.b, Kind::Position, ctx.tol);
  FockImages out{std::move(M), {}, {}};
  Tolerance loose = ctx.tol;
  loose.tail_eps = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    const FockVector v = FockVector::basis(n, count);
    out.momentum.push_back(isometry_omega(v, mom, window, loose));
    out.coordinate.push_back(isometry_omega(v, pos, window, loose));
  }
  return out;
}

CheckOutcome transform_consistency(const VerifyContext& ctx) {
  const FockImages im = fock_images(ctx, 15, 6);
  double worst = 0.0;
  for (std::size_t n = 0; n < im.momentum.size(); ++n)
    worst = std::max(worst, weighted_distance(apply_transform(im.matrix, im.momentum[n]),
                                         im.coordinate[n]));
  return {worst, 1e-6, "F applied to Omega'|n> vs Omega|n>, n <= 5, window [-15, 15]"};
}

CheckOutcome plancherel_check(const VerifyContext& ctx) {
  const FockImages im = fock_images(ctx, 15, 6);
  double worst = 0.0;
  for (const GridFunction& f : im.momentum) {
    const GridFunction g = apply_transform(im.matrix, f);
    worst = std::max(worst, std::abs(g.weighted_norm() - f.weighted_norm()) / f.weighted_norm());
  }
  return {worst, 1e-7, "weighted norm change of Fock images, window [-15, 15]"};
}

CheckOutcome round_trip_check(const VerifyContext& ctx) {
  const FockImages im = fock_images(ctx, 15, 6);
  double worst = 0.0;
  for (const GridFunction& f : im.momentum)
    worst = std::max(worst, weighted_distance(apply_inverse(im.matrix, apply_transform(im.matrix, f)), f));
  return {worst, 1e-6, "inverse(transform(f)) vs f on Fock images, window [-15, 15]"};
}

CheckOutcome interior_unitarity(const VerifyContext& ctx) {
  const int R = std::min(150, 6 + static_cast<int>(std::ceil(std::log(1e8) / ctx.params.tau())));
  const TransformMatrix M = build_transform(transform_b_prime(ctx), ctx.b, ctx.params,
                                            SpectralWindow::symmetric(R), ctx.tol);
  const double worst = std::max(M.max_column_deviation(-5, 5), M.max_row_deviation(-5, 5));
  return {worst, 1e-6, "|norm^2 - 1| of T columns/rows |r| <= 5 inside [-" + std::to_string(R) +
                           ", " + std::to_string(R) + "]"};
}

}  // namespace

const std::vector<Check>& verification_checks() {
  static const std::vector<Check> checks = {
      {"evaluator_gate", evaluator_gate},
      {"orthogonality", orthogonality},
      {"mass_identity", mass_check},
      {"eigenfunction_product_vs_series", eigenfunction_check},
      {"multiplication_operator", multiplication_check},
      {"isometry", isometry_check},
      {"moments", moments_check},
      {"locate_round_trip", locate_check},
      {"fourier_product_vs_series", fourier_product_check},
      {"transform_consistency", transform_consistency},
      {"plancherel", plancherel_check},
      {"round_trip", round_trip_check},
      {"interior_unitarity", interior_unitarity},
  };
  return checks;
}

std::vector<CheckResult> run_verification(const VerifyContext& ctx) {
  std::vector<CheckResult> results;
  for (const Check& check : verification_checks()) {
    CheckResult result{check.name, {}, false};
    try {
      result.outcome = check.run(ctx);
      if (!std::isfinite(result.outcome.measured))
        result.outcome.measured = std::numeric_limits<double>::infinity();
    } catch (const std::exception& e) {
      result.errored = true;
      result.outcome.measured = std::numeric_limits<double>::infinity();
      result.outcome.detail = e.what();
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace qosc
