#include <doctest.h>

#include <cmath>

#include "qosc/spectra.hpp"

using namespace qosc;

namespace {
const QParameters q2 = QParameters::oscillator(2.0);
const QParameters q15 = QParameters::oscillator(1.5);
}

TEST_CASE("extremal measures accept b in [1/q, 1)") {
  CHECK_NOTHROW(ExtremalMeasure(q2, 0.5));
  CHECK_NOTHROW(ExtremalMeasure(q2, 0.999));
  CHECK_THROWS_AS(ExtremalMeasure(q2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ExtremalMeasure(q2, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(ExtremalMeasure(QParameters::relaxed(0.5), 0.7), std::invalid_argument);
  CHECK_THROWS_AS(SpectralWindow(3, -3), std::invalid_argument);
}

TEST_CASE("spectral points") {
  const ExtremalMeasure m(q2, 0.5);
  CHECK(spectrum_point(m, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(spectrum_point(m, 1) == doctest::Approx(3.75).epsilon(1e-15));
  CHECK(std::abs(spectrum_point(m, -1)) < 1e-15);
  CHECK(spectrum_point(ExtremalMeasure(q2, 0.7), 2) ==
        doctest::Approx(5.5392857142857143).epsilon(1e-14));
}

TEST_CASE("weights against 50-digit references") {
  const ExtremalMeasure a(q2, 0.5), b(q2, 0.7);
  CHECK(weight(a, -3).value == doctest::Approx(0.005056418500061468).epsilon(1e-13));
  CHECK(weight(a, 0).value == doctest::Approx(0.19035928470819644).epsilon(1e-13));
  CHECK(weight(a, 2).value == doctest::Approx(9.440119557214942e-6).epsilon(1e-13));
  CHECK(weight(b, -3).value == doctest::Approx(0.00033603254768829633).epsilon(1e-13));
  CHECK(weight(b, 0).value == doctest::Approx(0.44912319956794451).epsilon(1e-13));
  CHECK(weight(b, 2).value == doctest::Approx(0.00027982353578659878).epsilon(1e-13));
  const WeightResult far = weight(a, 60);
  CHECK(far.underflow);
  CHECK(far.value == 0.0);
  CHECK(std::isfinite(far.log_value));
}

TEST_CASE("weights sum to one") {
  for (double bv : {0.5, 0.7, 0.9}) {
    const ExtremalMeasure m(q2, bv);
    double total = 0.0;
    for (int r = -40; r <= 40; ++r) total += weight(m, r).value;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("locating the extension through a point") {
  const Extension zero = locate_extension(0.0, q2);
  CHECK(zero.b == 0.5);
  CHECK(zero.r == -1);
  for (double bv : {0.5, 0.61, 0.93}) {
    const ExtremalMeasure m(q2, bv);
    for (int r = -7; r <= 7; ++r) {
      const Extension e = locate_extension(spectrum_point(m, r), q2);
      CHECK(e.b == doctest::Approx(bv).epsilon(1e-12));
      CHECK(e.r == r);
    }
  }
  CHECK_THROWS_AS(locate_extension(NAN, q2), std::invalid_argument);
}

TEST_CASE("spectra of different extensions interlace") {
  const ExtremalMeasure a(q2, 0.5), b(q2, 0.7);
  for (int r = -8; r < 8; ++r) {
    CHECK(spectrum_point(b, r) < spectrum_point(a, r));
    CHECK(spectrum_point(a, r) < spectrum_point(b, r + 1));
  }
}

TEST_CASE("orthonormality on the automatic window") {
  for (double bv : {0.5, 0.7, 0.9}) {
    const OrthogonalityReport rep = verify_orthogonality(ExtremalMeasure(q2, bv), 15);
    CHECK(rep.max_deviation < 1e-8);
  }
  const OrthogonalityReport rep = verify_orthogonality(ExtremalMeasure(q15, 0.8), 10);
  CHECK(rep.max_deviation < 1e-8);
}

TEST_CASE("too small a window is rejected") {
  const ExtremalMeasure m(q2, 0.5);
  CHECK_THROWS_AS(verify_orthogonality(m, 15, SpectralWindow::symmetric(3)), WindowTooSmall);
  CHECK(orthogonality_boundary_term(m, 15, SpectralWindow::symmetric(3)) > 1e-16);
  CHECK_THROWS_AS(compute_moment(m, 4, SpectralWindow::symmetric(2)), WindowTooSmall);
}

TEST_CASE("mass identity") {
  const ExtremalMeasure m(q2, 0.5);
  for (int r = -5; r <= 5; ++r) {
    const MassIdentityResult res = mass_identity(m, r, 80);
    CHECK(std::abs(res.value - 1.0) < 1e-6);
    CHECK_FALSE(res.slow_convergence);
  }
}

TEST_CASE("dual orthogonality") {
  const ExtremalMeasure m(q2, 0.5);
  CHECK(std::abs(dual_orthogonality(m, 0, 1, 120)) < 1e-6);
  CHECK(std::abs(dual_orthogonality(m, 2, 2, 120) - 1.0) < 1e-6);
}

TEST_CASE("coefficient families decay in norm") {
  const ExtremalMeasure m(q2, 0.5);
  const CoefficientFamily f = eigenvector_coefficients(m, 1, 60);
  CHECK(f.kind == Kind::Position);
  CHECK(f.eval_point == doctest::Approx(3.75));
  CHECK(f.tail_decreasing());
  const CoefficientFamily g = normalized_eigenvector_coefficients(ExtremalMeasure(q2, 0.5, Kind::Momentum), 1, 60);
  double sq = 0.0;
  for (complex c : g.values) sq += std::norm(c);
  CHECK(sq == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("isometry and multiplication operator") {
  const ExtremalMeasure m(q2, 0.5);
  const SpectralWindow w = auto_window(m, 14);
  FockVector v(14);
  v[0] = 0.5;
  v[3] = complex(0.0, 0.5);
  v[7] = complex(-0.5, 0.5);
  const GridFunction f = isometry_omega(v, m, w);
  CHECK(f.weighted_norm() == doctest::Approx(v.norm()).epsilon(1e-12));
  const GridFunction xf = multiply_by_point(f);
  CHECK(xf.at(0) == f.at(0) * 1.5);
  CHECK_THROWS_AS(isometry_omega(v, m, SpectralWindow::symmetric(2)), WindowTooSmall);
}

TEST_CASE("eigenfunctions against 50-digit references") {
  CHECK(eigenfunction_product(1.5, 0.3, q2).value.real() ==
        doctest::Approx(1.4838043127438336).epsilon(1e-14));
  CHECK(eigenfunction_series(-0.5, -0.3, q2, 80) ==
        doctest::Approx(1.1252075680621568).epsilon(1e-14));
  const complex xi = momentum_eigenfunction_product(1.5, 0.3, q2).value;
  CHECK(xi.real() == doctest::Approx(0.96217324758739214).epsilon(1e-14));
  CHECK(xi.imag() == doctest::Approx(-0.45338006430819525).epsilon(1e-14));
  const complex xs = momentum_eigenfunction_series(-0.5, -0.3, q2, 80);
  CHECK(xs.real() == doctest::Approx(1.0226110333803643).epsilon(1e-14));
  CHECK(xs.imag() == doctest::Approx(-0.15241825521894839).epsilon(1e-14));
}

TEST_CASE("moments agree with the Jacobi matrix for both extensions") {
  const double exact[] = {1.0, 0.0, 1.0, 0.0, 4.0, 0.0, 37.0};
  for (double bv : {0.5, 0.7}) {
    const ExtremalMeasure m(q2, bv);
    for (std::size_t n = 0; n <= 6; ++n)
      CHECK(std::abs(compute_moment(m, n) - exact[n]) < 1e-10 * std::max(1.0, exact[n]));
  }
}

TEST_CASE("grid table matches pointwise evaluation") {
  const ExtremalMeasure m(q2, 0.7, Kind::Momentum);
  const GridTable t = build_grid_table(m, SpectralWindow(-4, 6), 12);
  REQUIRE(t.points.size() == 11);
  for (int r = -4; r <= 6; ++r) {
    const std::size_t i = t.window.index(r);
    CHECK(t.points[i] == spectrum_point(m, r));
    CHECK(t.log_weights[i] == log_weight(m, r));
    const CoefficientFamily f = eigenvector_coefficients(m, r, 12);
    for (std::size_t n = 0; n <= 12; ++n) CHECK(t.families[i][n] == f.values[n]);
  }
}
