#include <doctest.h>

#include "schurfact/duality.hpp"
#include "schurfact/error.hpp"
#include "schurfact/factorizations.hpp"
#include "support.hpp"

using namespace schurfact;
using namespace testing_support;

TEST_CASE("trace pairing") {
  CHECK(pairing(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) == Complex(2.0, 0.0));
  const ComplexMatrix u = dft_matrix(4);
  CHECK(std::abs(pairing(u, u) - Complex(4.0, 0.0)) < 1e-12);
  CHECK(pairing(u, ComplexMatrix::Zero(4, 4)) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(pairing(u, ComplexMatrix::Zero(3, 4)), Error);

  std::mt19937_64 rng(61);
  const ComplexMatrix x = random_complex(2, 3, rng);
  const ComplexMatrix y = random_complex(2, 3, rng);
  CHECK(std::abs(pairing(x, y) - (y.adjoint() * x).trace()) < 1e-12);
  CHECK(std::abs(pairing(x, y) - std::conj(pairing(y, x))) < 1e-12);
}

TEST_CASE("polar membership") {
  const ComplexMatrix u = dft_matrix(3);
  CHECK(polar_membership(u, Ball::S) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(polar_membership(u / 3.0, Ball::CbB) == doctest::Approx(1.0).epsilon(1e-7));
  for (const Ball ball : {Ball::CbF, Ball::CbB, Ball::S, Ball::T}) {
    CHECK(polar_membership(ComplexMatrix::Zero(2, 2), ball) == 0.0);
  }
}

TEST_CASE("duality inequalities on random pairs") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 2 + trial % 2;
    const Index n = 2 + (trial / 2) % 2;
    const ComplexMatrix x = random_complex(m, n, rng);
    const ComplexMatrix y = trial % 4 == 0 ? ComplexMatrix(x + 0.01 * random_complex(m, n, rng))
                                           : random_complex(m, n, rng);
    const double p = std::abs(pairing(x, y));
    CHECK(p <= cbb_norm(x).value * schur_norm(y).value + 1e-6);
    CHECK(p <= cbf_norm(x).value * t_norm(y).value + 1e-6);
  }
}

TEST_CASE("witnesses on unitaries") {
  const ComplexMatrix u = dft_matrix(3);
  SUBCASE("cbB against S") {
    const WitnessCertificate c = find_witness(u, Duality::CbBvsS);
    CHECK(c.target_norm == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(c.certified_gap <= 1e-6);
    CHECK(max_abs(c.y / c.dual_norm_bound - u) < 1e-4);
  }
  SUBCASE("cbF against T") {
    const WitnessCertificate c = find_witness(u, Duality::CbFvsT);
    CHECK(c.lower_bound() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    CHECK(c.certified_gap <= 1e-6);
  }
  SUBCASE("T against cbF and S against cbB") {
    CHECK(find_witness(u, Duality::TvsCbF).certified_gap <= 1e-6);
    CHECK(find_witness(u, Duality::SvsCbB).certified_gap <= 1e-6);
  }
}

TEST_CASE("witnesses on positive diagonal matrices") {
  const ComplexMatrix d = diag({2, 0.5, 1});
  for (const Duality duality : {Duality::CbBvsS, Duality::CbFvsT, Duality::TvsCbF, Duality::SvsCbB}) {
    CAPTURE(to_string(duality));
    const WitnessCertificate c = find_witness(d, duality);
    CHECK(c.certified_gap <= 1e-6);
    CHECK(c.lower_bound() <= c.target_norm + 1e-9);
  }
}

TEST_CASE("certify bounds the target from below for any matrix") {
  std::mt19937_64 rng(63);
  const ComplexMatrix x = random_complex(3, 3, rng);
  const ComplexMatrix y = random_complex(3, 3, rng);
  for (const Duality duality : {Duality::CbBvsS, Duality::CbFvsT}) {
    const WitnessCertificate c = certify(x, y, duality);
    CHECK(c.lower_bound() <= c.target_norm + 1e-7);
    CHECK(c.dual_norm_bound == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("searched witnesses never exceed the target") {
  std::mt19937_64 rng(64);
  const ComplexMatrix x = random_complex(3, 3, rng);
  for (const Duality duality : {Duality::CbBvsS, Duality::CbFvsT, Duality::TvsCbF, Duality::SvsCbB}) {
    const WitnessCertificate c = find_witness(x, duality, WitnessOptions{.seed = 5, .max_iters = 20, .norm = {}});
    CHECK(c.lower_bound() <= c.target_norm * (1 + 1e-7));
    CHECK(c.certified_gap <= 1e-3 * c.target_norm);
  }
  CHECK_THROWS_AS(find_witness(ComplexMatrix::Zero(2, 2), Duality::CbBvsS), Error);
}

TEST_CASE("weights recovered from exact witnesses") {
  SUBCASE("unitary") {
    const ComplexMatrix u = dft_matrix(4);
    const RealVector right = right_weights_from_witness(u, u);
    const RealVector left = left_weights_from_witness(u, u);
    CHECK((right - RealVector::Constant(4, 0.25)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((left - RealVector::Constant(4, 0.25)).cwiseAbs().maxCoeff() < 1e-12);
    const ComplexMatrix t2 = t_squared_from_witness(u, u, 2.0);
    CHECK(max_abs(t2 - ComplexMatrix::Identity(4, 4)) < 1e-12);
  }
  SUBCASE("searched witness on a diagonal matrix matches the cb bilinear weights") {
    const ComplexMatrix d = diag({2, 0.5, 1});
    const WitnessCertificate c = find_witness(d, Duality::CbBvsS);
    const CbBilinearFactorization f = cb_bilinear_factorization(d);
    const RealVector xi2 = f.xi.entries().cwiseAbs2();
    const RealVector eta2 = f.eta.entries().cwiseAbs2();
    CHECK((right_weights_from_witness(d, c.y) - xi2).norm() <= 1e-6);
    CHECK((left_weights_from_witness(d, c.y) - eta2).norm() <= 1e-6);
  }
}

TEST_CASE("duality names round-trip") {
  for (const Duality d : {Duality::CbBvsS, Duality::CbFvsT, Duality::TvsCbF, Duality::SvsCbB}) {
    CHECK(parse_duality(to_string(d)) == d);
  }
  CHECK(target_kind(Duality::CbBvsS) == NormKind::CbB);
  CHECK(witness_ball(Duality::CbFvsT) == Ball::T);
  CHECK_FALSE(parse_duality("nope").has_value());
}
