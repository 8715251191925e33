#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qosc/fock.hpp"
#include "qosc/jacobi.hpp"
#include "qosc/qfourier.hpp"
#include "qosc/qhermite.hpp"
#include "qosc/spectra.hpp"

using namespace qosc;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const QParameters q2 = QParameters::oscillator(2.0);
const QParameters q15 = QParameters::oscillator(1.5);

Outcome evaluator_gate() {
  double worst = 0.0;
  for (double q : {1.5, 2.0, 3.0}) {
    const QParameters p = QParameters::oscillator(q);
    for (double x : {-2.0, -1.5, -1.0, -0.5, -0.3, 0.0, 0.3, 0.4, 0.5, 1.0, 1.5, 2.5}) {
      for (std::size_t n = 0; n <= 12; ++n) {
        const double sum = h_poly_sum(n, x, p);
        worst = std::max(worst, std::abs(h_poly_rec(n, x, p) - sum) / std::max(1.0, std::abs(sum)));
      }
    }
  }
  return {worst < 1e-9, fmt("max relative difference %.3g (limit 1e-9)", worst)};
}

Outcome orthonormality() {
  double worst = 0.0;
  int widest = 0;
  for (double b : {0.5, 0.7, 0.9}) {
    const OrthogonalityReport rep = verify_orthogonality(ExtremalMeasure(q2, b), 15);
    worst = std::max(worst, rep.max_deviation);
    widest = std::max(widest, rep.window.r_max);
  }
  return {worst < 1e-8, fmt("max |<P_n,P_n'> - delta| %.3g (limit 1e-8), widest window R=%g", worst, widest)};
}

Outcome mass_identity_check() {
  const ExtremalMeasure m(q2, 0.5);
  double worst = 0.0;
  for (int r = -5; r <= 5; ++r) worst = std::max(worst, std::abs(mass_identity(m, r, 80).value - 1.0));
  return {worst < 1e-6, fmt("max |m_r sum P_n^2 - 1| %.3g (limit 1e-6)", worst)};
}

Outcome eigenfunctions() {
  double worst_phi = 0.0, worst_xi = 0.0;
  for (const QParameters& p : {q15, q2}) {
    for (double x : {0.0, 0.5, -0.5, 1.5, -1.5}) {
      for (double y : {0.0, 0.3, -0.3}) {
        const EigenfunctionValue phi = eigenfunction_product(x, y, p);
        const double phi_s = eigenfunction_series(x, y, p, 120);
        worst_phi = std::max(worst_phi, std::abs(phi.value - phi_s) / std::abs(phi_s));
        const EigenfunctionValue xi = momentum_eigenfunction_product(x, y, p);
        const complex xi_s = momentum_eigenfunction_series(x, y, p, 120);
        worst_xi = std::max(worst_xi, std::abs(xi.value - xi_s) / std::abs(xi_s));
      }
    }
  }
  return {worst_phi < 1e-10 && worst_xi < 1e-10,
          fmt("phi %.3g, xi %.3g relative (limit 1e-10)", worst_phi, worst_xi)};
}

Outcome multiplication() {
  const ExtremalMeasure m(q2, 0.5);
  const JacobiOperator J = position_jacobi(q2);
  const SpectralWindow w = auto_window(m, 13);
  double worst = 0.0;
  for (std::size_t n = 0; n <= 12; ++n) {
    const FockVector v = FockVector::basis(n, 13);
    FockVector Qv(13);
    Qv[n + 1] += J.a(n);
    if (n > 0) Qv[n - 1] += J.a(n - 1);
    const GridFunction lhs = isometry_omega(Qv, m, w);
    const GridFunction base = isometry_omega(v, m, w);
    double sq = 0.0;
    for (int r = w.r_min; r <= w.r_max; ++r)
      sq += weight(m, r).value * std::norm(lhs.at(r) - spectrum_point(m, r) * base.at(r));
    worst = std::max(worst, std::sqrt(sq));
  }
  return {worst < 1e-8, fmt("max ||Omega(Qv) - x Omega v|| %.3g (limit 1e-8)", worst)};
}

/// Labels outside [1/q, 1) name the same point set: x_b(r) = x_{bq}(r + 1).
struct Label {
  double b;
  int shift;
};

Label canonical(double b, const QParameters& p) {
  Label l{b, 0};
  while (l.b < p.qbreve()) {
    l.b *= p.q();
    ++l.shift;
  }
  return l;
}

Outcome fourier_entries() {
  std::mt19937_64 rng(0xacce55ULL);
  std::uniform_int_distribution<int> pick(-6, 6);
  double worst = 0.0;
  for (const QParameters& p : {q15, q2}) {
    for (double b : {0.5, 0.7}) {
      for (double bp : {0.5, 0.7}) {
        for (int k = 0; k < 25; ++k) {
          const int rp = pick(rng), r = pick(rng);
          const Label lb = canonical(b, p), lbp = canonical(bp, p);
          const int cr = r + lb.shift, crp = rp + lbp.shift;
          const complex prod = transform_entry_product(crp, cr, lbp.b, lb.b, p).value();
          const complex ser = transform_entry_series(crp, cr, lbp.b, lb.b, p, 250).value;
          worst = std::max(worst, std::abs(prod - ser) / std::abs(ser));
        }
      }
    }
  }
  return {worst < 1e-7, fmt("max relative product-series gap %.3g over 200 entries (limit 1e-7)", worst)};
}

GridFunction random_grid(const ExtremalMeasure& m, const SpectralWindow& w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridFunction f{m, w, std::vector<complex>(w.size())};
  for (complex& z : f.values) z = {g(rng), g(rng)};
  // Unit norm in the weighted space.
  const double n = f.weighted_norm();
  for (complex& z : f.values) z /= n;
  return f;
}

double weighted_gap(const GridFunction& a, const GridFunction& b) {
  double sq = 0.0;
  for (int r = a.window.r_min; r <= a.window.r_max; ++r)
    sq += weight(a.measure, r).value * std::norm(a.at(r) - b.at(r));
  return std::sqrt(sq);
}

Outcome unitarity() {
  const SpectralWindow w = SpectralWindow::symmetric(15);
  const double b = 0.5, bp = 0.7;
  const TransformMatrix M = build_transform(bp, b, q2, w);
  const double col = M.max_column_deviation(), row = M.max_row_deviation();

  const ExtremalMeasure mom(q2, bp, Kind::Momentum);
  double plancherel = 0.0, round_trip = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridFunction f = random_grid(mom, w, seed);
    const GridFunction g = apply_transform(M, f);
    plancherel = std::max(plancherel, std::abs(g.weighted_norm() - 1.0));
    round_trip = std::max(round_trip, weighted_gap(apply_inverse(M, g), f));
  }

  Tolerance loose;
  loose.tail_eps = 1.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  FockVector v(10);
  for (std::size_t n = 0; n <= 10; ++n) v[n] = {gauss(rng), gauss(rng)};
  v *= complex(1.0 / v.norm());
  const GridFunction fock = isometry_omega(v, mom, w, loose);
  const GridFunction fock_image = apply_transform(M, fock);
  const double fock_plancherel = std::abs(fock_image.weighted_norm() - fock.weighted_norm());
  const double fock_round_trip = weighted_gap(apply_inverse(M, fock_image), fock);

  const bool pass = col < 1e-6 && row < 1e-6 && plancherel < 1e-7 && round_trip < 1e-6;
  std::string s = fmt("column %.3g, row %.3g (limit 1e-6); ", col, row);
  s += fmt("random grid vector: Plancherel %.3g (1e-7), round trip %.3g (1e-6); ", plancherel, round_trip);
  s += fmt("Fock-image vector: Plancherel %.3g, round trip %.3g", fock_plancherel, fock_round_trip);
  return {pass, s};
}

Outcome extension_structure() {
  double locate = 0.0;
  for (double b : {0.5, 0.55, 0.7, 0.9, 0.99}) {
    const ExtremalMeasure m(q2, b);
    for (int r = -10; r <= 10; ++r) {
      const double x = spectrum_point(m, r);
      const Extension e = locate_extension(x, q2);
      const double back = spectrum_point(ExtremalMeasure(q2, e.b), e.r);
      locate = std::max({locate, std::abs(back - x) / std::max(1.0, std::abs(x)), std::abs(e.b - b),
                         e.r == r ? 0.0 : 1.0});
    }
  }
  const ExtremalMeasure a(q2, 0.5), c(q2, 0.7);
  double gap = INFINITY;
  bool interlaced = true;
  for (int r = -10; r <= 10; ++r) {
    const double xc = spectrum_point(c, r), xa = spectrum_point(a, r), next = spectrum_point(c, r + 1);
    interlaced = interlaced && xc < xa && xa < next;
    gap = std::min({gap, xa - xc, next - xa});
  }
  int mismatches = 0;
  for (std::size_t n = 0; n <= 30; ++n) {
    const double q = q2.q();
    const double expected = 0.5 * (std::pow(q, static_cast<double>(n)) * (q + 1.0) - 2.0) / (q - 1.0);
    if (hamiltonian_eigenvalue(n, q2) != expected) ++mismatches;
  }
  const bool pass = locate < 1e-12 && interlaced && gap > 1e-9 && mismatches == 0;
  return {pass, fmt("locate round trip %.3g (1e-12); interlacing min gap %.3g (> 1e-9); "
                    "Hamiltonian mismatches %g",
                    locate, gap, mismatches)};
}

Outcome moments() {
  const ExtremalMeasure a(q2, 0.5), c(q2, 0.7);
  double worst = 0.0;
  for (std::size_t n = 0; n <= 6; ++n) {
    const double ca = compute_moment(a, n), cc = compute_moment(c, n);
    worst = std::max(worst, std::abs(ca - cc) / std::max(1.0, std::abs(ca)));
  }
  return {worst < 1e-8, fmt("max |c_n(0.5) - c_n(0.7)| %.3g (limit 1e-8)", worst)};
}

Outcome verdicts() {
  const Verdict pos = self_adjointness_verdict(position_jacobi(q2), 64).verdict;
  const Verdict bounded = self_adjointness_verdict(position_jacobi(QParameters::relaxed(0.5)), 64).verdict;
  const Verdict plain = self_adjointness_verdict(undeformed_jacobi(), 64).verdict;
  const bool pass = pos == Verdict::NotSelfAdjoint && bounded == Verdict::SelfAdjointBounded &&
                    plain == Verdict::SelfAdjointCarleman;
  return {pass, std::string("q=2 ") + to_string(pos) + ", q=0.5 " + to_string(bounded) +
                    ", undeformed " + to_string(plain)};
}

const std::vector<Criterion> kCriteria = {
    {10, "evaluator cross-check gate", 0.0, evaluator_gate},
    {1, "orthonormality", 5.0, orthonormality},
    {2, "weight vs mass identity", 2.0, mass_identity_check},
    {3, "eigenfunction product vs series", 0.0, eigenfunctions},
    {4, "multiplication operator", 0.0, multiplication},
    {5, "Fourier product vs series", 10.0, fourier_entries},
    {6, "unitarity and Plancherel", 0.0, unitarity},
    {7, "extension structure", 0.0, extension_structure},
    {8, "moment indeterminacy", 0.0, moments},
    {9, "self-adjointness verdicts", 0.0, verdicts},
};

bool run_one(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.time_limit > 0.0 && secs > c.time_limit) {
    o.pass = false;
    o.summary += fmt("; runtime %.2f s exceeds %.0f s", secs, c.time_limit);
  }
  std::printf("criterion %2d %s  %s: %s [%.2f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
              o.summary.c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only K]\n");
      return 2;
    }
  }
  if (only < 0 || only > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }

  bool all = true;
  bool gate = true;
  for (const Criterion& c : kCriteria) {
    const bool gated = c.id >= 1 && c.id <= 8;
    const bool wanted = only == 0 || only == c.id;
    if (c.id == 10) {
      if (!wanted && !(only >= 1 && only <= 8)) continue;
      gate = run_one(c);
      if (wanted) all = all && gate;
      continue;
    }
    if (!wanted) continue;
    if (gated && !gate) {
      std::printf("criterion %2d FAIL  %s: not run, evaluator gate failed\n", c.id, c.title);
      all = false;
      continue;
    }
    all = run_one(c) && all;
  }
  return all ? 0 : 1;
}
