#include <doctest.h>

#include <cmath>

#include "qosc/fock.hpp"

using namespace qosc;

namespace {
const QParameters q2 = QParameters::oscillator(2.0);
}

TEST_CASE("ladder operators on basis vectors") {
  const FockVector v = FockVector::basis(2, 5);
  const FockVector down = apply_annihilation(v, q2);
  CHECK(down[1] == complex(std::sqrt(3.0)));
  CHECK(down.norm() == doctest::Approx(std::sqrt(3.0)));
  const FockVector up = apply_creation(v, q2);
  CHECK(up[3] == complex(std::sqrt(7.0)));
  CHECK_FALSE(up.truncation_loss());
  CHECK(apply_annihilation(FockVector::basis(0, 3), q2).norm() == 0.0);
}

TEST_CASE("q-commutation a a+ - q a+ a = 1 below the truncation edge") {
  for (std::size_t n = 0; n < 6; ++n) {
    const FockVector v = FockVector::basis(n, 8);
    const FockVector lhs = apply_annihilation(apply_creation(v, q2), q2) -
                           complex(2.0) * apply_creation(apply_annihilation(v, q2), q2);
    CHECK(std::abs(lhs[n] - 1.0) < 1e-12);
    CHECK((lhs - v).norm() < 1e-12);
  }
}

TEST_CASE("creation past the truncation is flagged and sticky") {
  const FockVector top = FockVector::basis(4, 4);
  const FockVector up = apply_creation(top, q2);
  CHECK(up.truncation_loss());
  CHECK(up.norm() == 0.0);
  CHECK(apply_annihilation(up, q2).truncation_loss());
  CHECK((up + FockVector::basis(0, 4)).truncation_loss());
}

TEST_CASE("Hamiltonian spectrum") {
  CHECK(hamiltonian_eigenvalue(0, q2) == 0.5);
  CHECK(hamiltonian_eigenvalue(1, q2) == 2.0);
  CHECK(hamiltonian_eigenvalue(3, q2) == 11.0);
  for (std::size_t n = 0; n < 6; ++n) {
    const FockVector v = FockVector::basis(n, 8);
    const FockVector Hv = apply_hamiltonian(v, q2);
    CHECK(std::abs(Hv[n] - hamiltonian_eigenvalue(n, q2)) < 1e-12);
    CHECK((Hv - complex(hamiltonian_eigenvalue(n, q2)) * v).norm() < 1e-12);
  }
  const FockVector v = FockVector::basis(3, 8);
  CHECK((apply_number(v) - complex(3.0) * v).norm() == 0.0);
}

TEST_CASE("vector bookkeeping") {
  CHECK_THROWS_AS(FockVector::basis(6, 5), std::out_of_range);
  CHECK_THROWS_AS(FockVector(std::vector<complex>{}), std::invalid_argument);
  FockVector a(3), b(4);
  CHECK_THROWS_AS(a += b, std::invalid_argument);
  FockVector c({complex(0.6), complex(0.0, 0.8)});
  CHECK(c.normalized());
  CHECK(c.truncation() == 1);
  CHECK_FALSE((complex(2.0) * c).normalized());
}
