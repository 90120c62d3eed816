#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hdrmimo/numerics.hpp"
#include "test_support.hpp"

using namespace hdrmimo;
using namespace hdrmimo::testing;

TEST_CASE("householder_matrix reflects the first axis") {
  const ComplexMatrix q = householder_matrix(ComplexVector::Unit(2, 0));
  ComplexMatrix expected(2, 2);
  expected << -1.0, 0.0, 0.0, 1.0;
  CHECK((q - expected).norm() < 1e-15);
}

TEST_CASE("householder_matrix for v = [8, 4]") {
  ComplexVector v(2);
  v << 8.0, 4.0;
  ComplexMatrix expected(2, 2);
  expected << -0.6, -0.8, -0.8, 0.6;
  CHECK((householder_matrix(v) - expected).norm() < 1e-14);
}

TEST_CASE("householder_matrix rejects the zero vector") {
  CHECK_THROWS_AS(householder_matrix(ComplexVector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(householder_apply(ComplexVector::Zero(3), ComplexVector::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("householder_matrix is a unitary involution") {
  Rng rng(11);
  for (int m : {2, 3, 8, 16}) {
    for (int t = 0; t < 50; ++t) {
      const ComplexMatrix q = householder_matrix(random_vector(rng, m));
      const ComplexMatrix id = ComplexMatrix::Identity(m, m);
      CHECK((q * q - id).norm() < 1e-12);
      CHECK((q.adjoint() - q).norm() < 1e-12);
    }
  }
}

TEST_CASE("householder_apply examples") {
  ComplexVector v(2), x(2), expected(2);
  v << 8.0, 4.0;
  x << 3.0, 4.0;
  expected << -5.0, 0.0;
  CHECK((householder_apply(v, x) - expected).norm() < 1e-14);

  SUBCASE("orthogonal complement is fixed") {
    ComplexVector w(3), z(3);
    w << cdouble(1, 1), 2.0, 0.0;
    z << cdouble(2, 2), -2.0, cdouble(0, 5);  // w^H z = (1-j)(2+2j) - 4 = 0
    CHECK(std::abs(w.dot(z)) < 1e-15);
    CHECK((householder_apply(w, z) - z).norm() < 1e-14);
  }
  SUBCASE("normal is negated") {
    Rng rng(3);
    const ComplexVector w = random_vector(rng, 5);
    CHECK((householder_apply(w, w) + w).norm() < 1e-13 * w.norm());
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(householder_apply(ComplexVector::Ones(3), ComplexVector::Ones(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("householder_apply preserves norms and matches the dense reflector") {
  Rng rng(2024);
  for (int m : {2, 4, 8, 16}) {
    for (int t = 0; t < 1000; ++t) {
      const ComplexVector v = random_vector(rng, m);
      const ComplexVector x = random_vector(rng, m);
      const ComplexVector y = householder_apply(v, x);
      REQUIRE(std::abs(y.norm() - x.norm()) <= 1e-12 * x.norm());
      const ComplexVector dense = dense_reflector(v) * x;
      REQUIRE((y - dense).norm() <= 1e-12 * dense.norm());
    }
  }
}

TEST_CASE("dominant_eigenpair on diagonal and identity matrices") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const EigenPair p = dominant_eigenpair(HermitianMatrix(d));
  CHECK(p.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(p.vector(0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(p.vector(1)) < 1e-8);

  const EigenPair id = dominant_eigenpair(HermitianMatrix(ComplexMatrix::Identity(5, 5)));
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.vector.norm() == doctest::Approx(1.0).epsilon(1e-10));

  const EigenPair zero = dominant_eigenpair(HermitianMatrix(ComplexMatrix::Zero(3, 3)));
  CHECK(zero.value == 0.0);
  CHECK(zero.vector.norm() == doctest::Approx(1.0));
}

TEST_CASE("dominant_eigenpair matches a full decomposition") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const int m = 8;
    const ComplexMatrix c = random_psd(rng, m, m);
    const EigenPair p = dominant_eigenpair(HermitianMatrix(c));
    const double oracle = full_decomposition_lambda_max(c);
    REQUIRE(std::abs(p.value - oracle) <= 1e-8 * oracle);
    REQUIRE(std::abs(p.vector.norm() - 1.0) <= 1e-10);
    const double residual = (c * p.vector - p.value * p.vector).norm();
    REQUIRE(residual <= 1e-10 * std::max(p.value, c.trace().real() / m));
  }
}

TEST_CASE("dominant_eigenpair bounds every Rayleigh quotient") {
  Rng rng(8);
  const ComplexMatrix c = random_psd(rng, 12, 4);
  const EigenPair p = dominant_eigenpair(HermitianMatrix(c));
  for (int t = 0; t < 1000; ++t) {
    const ComplexVector z = random_vector(rng, 12).normalized();
    REQUIRE(p.value >= z.dot(c * z).real() - 1e-12 * p.value);
  }
}

TEST_CASE("dominant_eigenpair handles nearly degenerate spectra") {
  // Top two eigenvalues 1 and 1 - 1e-9 with a random unitary basis.
  Rng rng(9);
  const int m = 6;
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, m, m));
  const ComplexMatrix u = qr.householderQ();
  Eigen::VectorXd lambdas(m);
  lambdas << 1.0, 1.0 - 1e-9, 0.5, 0.3, 0.2, 0.0;
  const ComplexMatrix c = u * lambdas.cast<cdouble>().asDiagonal() * u.adjoint();
  const EigenPair p = dominant_eigenpair(HermitianMatrix(c, 1e-10));
  CHECK(p.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("dominant_eigenpair error paths") {
  ComplexMatrix skew(2, 2);
  skew << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(dominant_eigenpair(HermitianMatrix(skew)), std::invalid_argument);

  // Ratio 0.999999 cannot reach 1e-15 in two iterations.
  ComplexMatrix c = ComplexMatrix::Zero(3, 3);
  c(0, 0) = 1.0;
  c(1, 1) = 0.999999;
  c(2, 2) = 0.5;
  c(0, 1) = c(1, 0) = 1e-3;
  try {
    dominant_eigenpair(HermitianMatrix(c), EigenOptions{1e-17, 2});
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.best().vector.norm() == doctest::Approx(1.0));
    CHECK(std::isfinite(e.residual()));
    CHECK(e.best().value > 0.9);
  }
}

TEST_CASE("posdef_inverse_apply examples") {
  Rng rng(5);
  const ComplexMatrix b0 = random_matrix(rng, 4, 3);
  CHECK((posdef_inverse_apply(HermitianMatrix(ComplexMatrix::Identity(4, 4)), b0) - b0).norm() <
        1e-14);

  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  const ComplexMatrix x = posdef_inverse_apply(HermitianMatrix(a), ComplexMatrix::Identity(2, 2));
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  expected(1, 1) = 0.25;
  CHECK((x - expected).norm() < 1e-15);
}

TEST_CASE("posdef_inverse_apply residual and double-solve consistency") {
  Rng rng(6);
  for (int m : {3, 16, 64}) {
    const ComplexMatrix g = random_matrix(rng, m, m);
    ComplexMatrix a = g * g.adjoint();
    a.diagonal().array() += 1.0;
    const HermitianMatrix ah(a);
    const ComplexMatrix b = random_matrix(rng, m, 5);
    const ComplexMatrix x = posdef_inverse_apply(ah, b);
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      CHECK((ah.matrix() * x.col(j) - b.col(j)).norm() <= 1e-9 * b.col(j).norm());
    }
    const ComplexMatrix again = posdef_inverse_apply(ah, ah.matrix() * x);
    CHECK((again - x).norm() <= 1e-8 * x.norm());
  }
}

TEST_CASE("posdef_inverse_apply rejects indefinite and singular matrices") {
  ComplexMatrix indef = ComplexMatrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(posdef_inverse_apply(HermitianMatrix(indef), ComplexMatrix::Identity(2, 2)),
                  std::domain_error);
  const ComplexMatrix singular = ComplexMatrix::Ones(2, 2);
  CHECK_THROWS_AS(posdef_inverse_apply(HermitianMatrix(singular), ComplexMatrix::Identity(2, 2)),
                  std::domain_error);
}

TEST_CASE("hadamard construction") {
  ComplexMatrix h2(2, 2);
  h2 << 1.0, 1.0, 1.0, -1.0;
  CHECK(hadamard(2) == h2);
  ComplexMatrix h4(4, 4);
  h4 << h2, h2, h2, -h2;
  CHECK(hadamard(4) == h4);
  for (std::size_t k : {1u, 2u, 8u, 32u, 256u}) {
    const ComplexMatrix s = hadamard(k);
    const auto n = static_cast<Eigen::Index>(k);
    CHECK(s * s.transpose() == static_cast<double>(k) * ComplexMatrix::Identity(n, n));
    CHECK((s.array().abs() == 1.0).all());
  }
  CHECK_THROWS_AS(hadamard(3), std::invalid_argument);
  CHECK_THROWS_AS(hadamard(0), std::invalid_argument);
}

TEST_CASE("complex_sign convention") {
  CHECK(complex_sign(0.0) == cdouble(1.0, 0.0));
  CHECK(std::abs(complex_sign(cdouble(0, -3)) - cdouble(0, -1)) < 1e-15);
}
