#include "schurfact/simplex.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

#include "schurfact/error.hpp"

namespace schurfact {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kMaxPivots = 100000;

// Dense tableau for: maximize objᵀz subject to E z = rhs, z ≥ 0, rhs ≥ 0.
// The last row holds reduced costs (c_B B⁻¹ E − obj) and the current value.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd table, std::vector<Index> basis)
      : t_(std::move(table)), basis_(std::move(basis)) {}

  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  const std::vector<Index>& basis() const { return basis_; }
  double value() const { return t_(rows(), cols()); }
  double& at(Index i, Index j) { return t_(i, j); }
  int pivots() const { return pivots_; }

  void set_objective(const RealVector& obj) {
    for (Index j = 0; j <= cols(); ++j) {
      double r = j < cols() ? -obj[j] : 0.0;
      for (Index i = 0; i < rows(); ++i) r += obj[basis_[static_cast<std::size_t>(i)]] * t_(i, j);
      t_(rows(), j) = r;
    }
  }

  // Bland's rule over the first `eligible` columns. Returns false if unbounded.
  bool optimize(Index eligible, double cost_tol) {
    while (true) {
      Index entering = -1;
      for (Index j = 0; j < eligible; ++j) {
        if (t_(rows(), j) < -cost_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      Index leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows(); ++i) {
        const double a = t_(i, entering);
        if (a <= kPivotTol) continue;
        const double ratio = t_(i, cols()) / a;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && leaving >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)])) {
          best_ratio = std::min(best_ratio, ratio);
          leaving = i;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
      if (++pivots_ > kMaxPivots) throw Error(ErrorCode::IterationCap, "simplex pivot limit reached");
    }
  }

  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i <= rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Index> basis_;
  int pivots_ = 0;
};

}  // namespace

LpCut LpCut::from_direction(const ComplexVector& xi, const ComplexMatrix& p) {
  const double len = xi.norm();
  if (!(len > 0.0)) throw Error(ErrorCode::InvalidMatrix, "cut direction must be nonzero");
  LpCut cut;
  cut.direction = xi / len;
  cut.bound = cut.direction.dot(p * cut.direction).real();
  return cut;
}

LpSolution simplex_lp(const RealVector& costs, const Eigen::MatrixXd& rows, const RealVector& bounds) {
  const Index n = costs.size();
  const Index k = rows.rows();
  if (rows.cols() != n || bounds.size() != k) throw Error(ErrorCode::ShapeMismatch, "LP data shapes disagree");
  if (!costs.allFinite() || !rows.allFinite() || !bounds.allFinite()) {
    throw Error(ErrorCode::InvalidMatrix, "LP data must be finite");
  }

  // Dual: maximize bᵀy subject to Aᵀy + s = c, y, s ≥ 0 (n equality rows).
  std::vector<Index> flipped;
  for (Index j = 0; j < n; ++j) {
    if (costs[j] < 0.0) flipped.push_back(j);
  }
  const Index artificials = static_cast<Index>(flipped.size());
  const Index width = k + n + artificials;
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n + 1, width + 1);
  std::vector<Index> basis(static_cast<std::size_t>(n));
  table.topLeftCorner(n, k) = rows.transpose();
  table.block(0, k, n, n).setIdentity();
  table.block(0, width, n, 1) = costs;
  for (Index j = 0; j < n; ++j) basis[static_cast<std::size_t>(j)] = k + j;
  for (Index a = 0; a < artificials; ++a) {
    const Index j = flipped[static_cast<std::size_t>(a)];
    table.row(j).head(width + 1) *= -1.0;
    table(j, k + n + a) = 1.0;
    basis[static_cast<std::size_t>(j)] = k + n + a;
  }
  Tableau tab(std::move(table), std::move(basis));

  const double scale = std::max({1.0, k > 0 ? bounds.cwiseAbs().maxCoeff() : 0.0,
                                 n > 0 ? costs.cwiseAbs().maxCoeff() : 0.0});
  const double cost_tol = 1e-13 * scale;

  if (artificials > 0) {
    RealVector phase_one = RealVector::Zero(width);
    phase_one.tail(artificials).setConstant(-1.0);
    tab.set_objective(phase_one);
    tab.optimize(width, cost_tol);
    if (tab.value() < -1e-10 * scale) throw Error(ErrorCode::LpUnbounded, "LP objective is unbounded below");
    // drive remaining artificials out of the basis where possible
    for (Index i = 0; i < n; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < k + n) continue;
      for (Index j = 0; j < k + n; ++j) {
        if (std::abs(tab.at(i, j)) > kPivotTol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  RealVector objective = RealVector::Zero(width);
  objective.head(k) = bounds;
  tab.set_objective(objective);
  if (!tab.optimize(k + n, cost_tol)) throw Error(ErrorCode::LpInfeasible, "LP constraints are infeasible");

  // Recompute primal and dual values from the final basis for accuracy.
  Eigen::MatrixXd full(n, width);
  full.leftCols(k) = rows.transpose();
  full.middleCols(k, n).setIdentity();
  if (artificials > 0) full.rightCols(artificials).setZero();
  for (Index a = 0; a < artificials; ++a) full(flipped[static_cast<std::size_t>(a)], k + n + a) = 1.0;
  Eigen::MatrixXd basis_matrix(n, n);
  RealVector basis_cost(n);
  for (Index i = 0; i < n; ++i) {
    const Index col = tab.basis()[static_cast<std::size_t>(i)];
    basis_matrix.col(i) = full.col(col);
    basis_cost[i] = col < k ? bounds[col] : 0.0;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
  const RealVector y_basic = lu.solve(costs);
  const RealVector prices = lu.transpose().solve(basis_cost);

  LpSolution out;
  out.multipliers = RealVector::Zero(k);
  for (Index i = 0; i < n; ++i) {
    const Index col = tab.basis()[static_cast<std::size_t>(i)];
    if (col < k) out.multipliers[col] = std::max(0.0, y_basic[i]);
  }
  out.x = WeightVector(prices.cwiseMax(0.0));
  out.value = costs.dot(out.x.entries());
  out.pivots = tab.pivots();
  return out;
}

LpSolution simplex_lp(const std::vector<LpCut>& cuts, Index n) {
  Eigen::MatrixXd rows(static_cast<Index>(cuts.size()), n);
  RealVector bounds(static_cast<Index>(cuts.size()));
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i].direction.size() != n) throw Error(ErrorCode::ShapeMismatch, "cut dimension mismatch");
    rows.row(static_cast<Index>(i)) = cuts[i].row().transpose();
    bounds[static_cast<Index>(i)] = cuts[i].bound;
  }
  return simplex_lp(RealVector::Ones(n), rows, bounds);
}

}  // namespace schurfact
