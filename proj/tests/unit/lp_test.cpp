#include <doctest.h>

#include "schurfact/cutting_plane.hpp"
#include "schurfact/error.hpp"
#include "schurfact/simplex.hpp"
#include "schurfact/splitting.hpp"
#include "support.hpp"

using namespace schurfact;
using namespace testing_support;

namespace {

// Vertex enumeration for min cᵀλ, Aλ ≥ b, λ ≥ 0 with few variables.
double brute_force_lp(const RealVector& c, const Eigen::MatrixXd& a, const RealVector& b) {
  const Index n = c.size();
  const Index rows = a.rows() + n;
  Eigen::MatrixXd all(rows, n);
  RealVector rhs(rows);
  all.topRows(a.rows()) = a;
  all.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  rhs.head(a.rows()) = b;
  rhs.tail(n).setZero();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> pick(static_cast<std::size_t>(rows), false);
  std::fill(pick.end() - n, pick.end(), true);
  do {
    Eigen::MatrixXd sys(n, n);
    RealVector sr(n);
    Index k = 0;
    for (Index r = 0; r < rows; ++r) {
      if (!pick[static_cast<std::size_t>(r)]) continue;
      sys.row(k) = all.row(r);
      sr(k++) = rhs(r);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (lu.rank() < n) continue;
    const RealVector v = lu.solve(sr);
    if (((all * v - rhs).array() >= -1e-9).all()) best = std::min(best, c.dot(v));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

// min γ₁ + γ₂ subject to Δ(γ) ⪰ P for a 2×2 PSD P.
double two_by_two_diag_dominance(const ComplexMatrix& p) {
  return p(0, 0).real() + p(1, 1).real() + 2.0 * std::abs(p(0, 1));
}

}  // namespace

TEST_CASE("simplex_lp over cuts") {
  SUBCASE("no cuts") {
    const LpSolution s = simplex_lp(std::vector<LpCut>{}, 3);
    CHECK(s.value == 0.0);
    CHECK(s.x.entries().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single coordinate cut") {
    const ComplexMatrix p = diag({3, 1, 1});
    const LpSolution s = simplex_lp({LpCut::from_direction(ComplexVector::Unit(3, 0), p)}, 3);
    CHECK(s.value == doctest::Approx(3.0));
    CHECK(s.x[0] == doctest::Approx(3.0));
    CHECK(s.x[1] == doctest::Approx(0.0));
  }
  SUBCASE("two coordinate cuts") {
    const ComplexMatrix p = diag({1, 2});
    const LpSolution s = simplex_lp(
        {LpCut::from_direction(ComplexVector::Unit(2, 0), p), LpCut::from_direction(ComplexVector::Unit(2, 1), p)}, 2);
    CHECK(s.value == doctest::Approx(3.0));
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.x[1] == doctest::Approx(2.0));
  }
}

TEST_CASE("LpCut directions are normalized") {
  std::mt19937_64 rng(21);
  const ComplexMatrix p = random_positive(3, rng);
  const ComplexVector xi = random_complex(3, 1, rng).col(0) * 5.0;
  const LpCut cut = LpCut::from_direction(xi, p);
  CHECK(cut.direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cut.row().sum() == doctest::Approx(1.0).epsilon(1e-12));
  const ComplexVector u = xi.normalized();
  CHECK(cut.bound == doctest::Approx((u.adjoint() * p * u)(0, 0).real()).epsilon(1e-12));
}

TEST_CASE("simplex_lp matches vertex enumeration") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unit(0.1, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + trial % 2;
    const Index rows = 2 + trial % 3;
    RealVector c(n);
    Eigen::MatrixXd a(rows, n);
    RealVector b(rows);
    for (Index j = 0; j < n; ++j) c(j) = unit(rng);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < n; ++j) a(i, j) = unit(rng);
      b(i) = unit(rng);
    }
    const LpSolution s = simplex_lp(c, a, b);
    CHECK(s.value == doctest::Approx(brute_force_lp(c, a, b)).epsilon(1e-10));
    CHECK(((a * s.x.entries() - b).array() >= -1e-10).all());
    // Strong duality.
    CHECK(b.dot(s.multipliers) == doctest::Approx(s.value).epsilon(1e-10));
  }
}

TEST_CASE("simplex_lp reports infeasible and unbounded programs") {
  Eigen::MatrixXd a(1, 1);
  a << -1.0;
  CHECK_THROWS_AS(simplex_lp(RealVector::Ones(1), a, RealVector::Ones(1)), Error);
  a << 1.0;
  CHECK_THROWS_AS(simplex_lp(-RealVector::Ones(1), a, RealVector::Ones(1)), Error);
}

TEST_CASE("cutting_plane_diag_dominance golden values") {
  SUBCASE("identity") {
    const CuttingPlaneResult r = cutting_plane_diag_dominance(ComplexMatrix::Identity(4, 4));
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-7));
    for (Index j = 0; j < 4; ++j) CHECK(r.gamma[j] == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("all ones") {
    const CuttingPlaneResult r = cutting_plane_diag_dominance(from_rows({{1, 1}, {1, 1}}));
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(r.gamma[0] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(r.gamma[1] == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("diagonal") {
    const CuttingPlaneResult r = cutting_plane_diag_dominance(diag({0.5, 2, 3}));
    CHECK(r.value == doctest::Approx(5.5).epsilon(1e-7));
    CHECK(r.gamma[1] == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("indefinite input is rejected") {
    CHECK_THROWS_AS(cutting_plane_diag_dominance(diag({1, -1})), Error);
  }
}

TEST_CASE("cutting plane against the closed form on 2x2 and the trivial bound") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix p = random_positive(2, rng);
    const CuttingPlaneResult r = cutting_plane_diag_dominance(p);
    CHECK(r.value == doctest::Approx(two_by_two_diag_dominance(p)).epsilon(1e-7));
  }
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix p = random_positive(5, rng);
    const CuttingPlaneResult r = cutting_plane_diag_dominance(p);
    const ComplexMatrix slack = r.gamma.diagonal() - p;
    CHECK(eigen_min_eigenvalue(slack) >= -1e-7 * max_abs(p));
    CHECK(r.value <= 5.0 * eigen_op_norm(p) + 1e-9);
    CHECK(r.lower_bound <= r.value + 1e-9);
    CHECK(r.cuts.size() <= 200);
    const ComplexMatrix omega = cut_correlation(r);
    CHECK(eigen_min_eigenvalue(omega) >= -1e-9);
    CHECK(real_diagonal(omega).maxCoeff() <= 1.0 + 1e-6);
  }
}

TEST_CASE("cutting_plane_hermitian handles indefinite input") {
  const ComplexMatrix h = from_rows({{0, 1}, {1, 0}});
  const CuttingPlaneResult r = cutting_plane_hermitian(h);
  // min γ₁+γ₂ with γ₁γ₂ ≥ 1, γ ≥ 0.
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("project_simplex") {
  const RealVector p = project_simplex(RealVector{{0.5, 0.5, 0.5}});
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p(0) == doctest::Approx(1.0 / 3.0));
  const RealVector q = project_simplex(RealVector{{3.0, 0.0}});
  CHECK(q(0) == doctest::Approx(1.0));
  CHECK(q(1) == doctest::Approx(0.0));
}

TEST_CASE("minimize_over_slab reaches the max-diagonal optimum for a positive matrix") {
  const ComplexMatrix p = from_rows({{2, 1}, {1, 2}}) / 3.0;
  const AffineSlab slab{p, {}, {}};
  const SplittingResult r =
      minimize_over_slab(slab, {BlockObjective::MaxDiagonal, 0.5}, {BlockObjective::MaxDiagonal, 0.5});
  CHECK(r.converged);
  CHECK(r.objective == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(block_objective_value(r.slab_point, slab, {BlockObjective::MaxDiagonal, 0.5},
                              {BlockObjective::MaxDiagonal, 0.5}) == doctest::Approx(r.objective));
}
