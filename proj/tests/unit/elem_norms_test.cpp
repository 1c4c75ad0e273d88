#include <doctest.h>

#include "schurfact/elem_norms.hpp"
#include "schurfact/error.hpp"
#include "support.hpp"

using namespace schurfact;
using namespace testing_support;

TEST_CASE("operator, Hilbert-Schmidt and column norms") {
  SUBCASE("identity") {
    const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
    CHECK(op_norm(i3) == doctest::Approx(1.0));
    CHECK(hs_norm(i3) == doctest::Approx(std::sqrt(3.0)));
    CHECK(col_norm(i3) == doctest::Approx(1.0));
  }
  SUBCASE("all ones") {
    const ComplexMatrix ones = from_rows({{1, 1}, {1, 1}});
    CHECK(op_norm(ones) == doctest::Approx(2.0));
    CHECK(hs_norm(ones) == doctest::Approx(2.0));
    CHECK(col_norm(ones) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("diagonal") {
    const ComplexMatrix d = diag({3, Complex(0, -4)});
    CHECK(op_norm(d) == doctest::Approx(4.0));
    CHECK(hs_norm(d) == doctest::Approx(5.0));
    CHECK(col_norm(d) == doctest::Approx(4.0));
  }
}

TEST_CASE("f_norm golden values") {
  CHECK(f_norm(dft_matrix(2)).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  const FNormResult row = f_norm(from_rows({{1, 1}}));
  CHECK(row.value == doctest::Approx(2.0).epsilon(1e-12));
  const ComplexVector a = row.maximizer.unimodular();
  CHECK(std::abs(a(0) - a(1)) < 1e-6);

  const ComplexMatrix d = diag({1, Complex(0, 2), -3});
  CHECK(f_norm(d).value == doctest::Approx(std::sqrt(14.0)).epsilon(1e-12));
}

TEST_CASE("b_norm golden values") {
  CHECK(b_norm(from_rows({{1, 1}, {1, 1}})).value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(b_norm(ComplexMatrix::Identity(2, 2)).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b_norm(ComplexMatrix::Zero(2, 2)).value == 0.0);
}

TEST_CASE("f_norm and b_norm agree with brute-force phase grids") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 6; ++trial) {
    const ComplexMatrix x = random_complex(2 + trial % 2, 3, rng);
    const double f = f_norm(x).value;
    const double f_grid = brute_force_f_norm(x, 90);
    CHECK(f >= f_grid - 1e-9);
    CHECK(f <= f_grid * 1.01);

    const double b = b_norm(x).value;
    const double b_grid = brute_force_b_norm(x, 90);
    CHECK(b >= b_grid - 1e-9);
    CHECK(b <= b_grid * 1.01);
  }
}

TEST_CASE("f_norm bound chain") {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = 1 + trial % 4;
    const Index n = 1 + trial % 3;
    const ComplexMatrix x = random_complex(m, n, rng);
    const double f = f_norm(x).value;
    CHECK(f >= hs_norm(x) - 1e-9);  // average over phases
    CHECK(f <= std::sqrt(static_cast<double>(n)) * op_norm(x) + 1e-9);
    CHECK(hs_norm(x) <= std::sqrt(static_cast<double>(m * n)) * max_abs(x) + 1e-12);
  }
}

TEST_CASE("f_norm squared equals b_norm of the Gram matrix") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix x = random_complex(3, 3, rng);
    const double f = f_norm(x).value;
    const double b = b_norm(x.adjoint() * x).value;
    CHECK(f * f == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("b_norm is invariant under transposition") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix x = random_complex(2, 3, rng);
    CHECK(b_norm(x).value == doctest::Approx(b_norm(x.transpose()).value).epsilon(1e-8));
  }
}

TEST_CASE("certified and heuristic modes agree") {
  std::mt19937_64 rng(1001);
  TorusSearchOptions heuristic;
  heuristic.mode = SearchMode::Heuristic;
  heuristic.seed = 7;
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix x = random_complex(2, 3, rng);
    const FNormResult certified = f_norm(x);
    const FNormResult local = f_norm(x, heuristic);
    CHECK(certified.certified);
    CHECK(std::abs(certified.value - local.value) <= 2.0 * certified.grid_error_bound + 1e-9);
  }
}

TEST_CASE("real sign matrices are exact") {
  const ComplexMatrix h = from_rows({{1, 1}, {1, -1}});
  CHECK(b_norm(h).value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(f_norm(h).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("grid size guard") {
  std::mt19937_64 rng(1102);
  const ComplexMatrix x = random_complex(8, 8, rng);
  CHECK_THROWS_AS(f_norm(x), Error);
  TorusSearchOptions heuristic;
  heuristic.mode = SearchMode::Heuristic;
  CHECK(f_norm(x, heuristic).value > 0.0);
}
