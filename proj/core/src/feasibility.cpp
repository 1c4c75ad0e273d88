#include "schurfact/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {
namespace {

void project_block(ComplexMatrix& block, const BlockConstraint& rule) {
  const Index k = block.rows();
  if (rule.force_diagonal) {
    for (Index j = 0; j < k; ++j) {
      for (Index i = 0; i < k; ++i) {
        if (i != j) block(i, j) = 0.0;
      }
    }
  }
  RealVector d = block.diagonal().real();
  switch (rule.rule) {
    case DiagonalRule::Free:
      break;
    case DiagonalRule::EntrywiseCap:
      d = d.cwiseMin(rule.bound);
      break;
    case DiagonalRule::TraceEqual:
      d.array() += (rule.bound - d.sum()) / static_cast<double>(k);
      break;
    case DiagonalRule::TraceCap:
      if (d.sum() > rule.bound) d.array() += (rule.bound - d.sum()) / static_cast<double>(k);
      break;
  }
  for (Index i = 0; i < k; ++i) block(i, i) = d[i];
}

}  // namespace

ComplexMatrix assemble_blocks(const ComplexMatrix& upper, const ComplexMatrix& x, const ComplexMatrix& lower) {
  const Index m = x.rows();
  const Index n = x.cols();
  ComplexMatrix out(m + n, m + n);
  out.topLeftCorner(m, m) = upper;
  out.topRightCorner(m, n) = x;
  out.bottomLeftCorner(n, m) = x.adjoint();
  out.bottomRightCorner(n, n) = lower;
  return out;
}

ComplexMatrix project_psd(const ComplexMatrix& m) {
  return hermitian_function(m, [](double lambda) { return std::max(lambda, 0.0); });
}

ComplexMatrix project_slab(const ComplexMatrix& m, const AffineSlab& slab) {
  const Index r = slab.rows();
  const Index c = slab.cols();
  if (m.rows() != r + c || m.cols() != r + c) {
    throw Error(ErrorCode::ShapeMismatch, "matrix does not match the slab dimension");
  }
  const ComplexMatrix h = hermitian_part(m);
  ComplexMatrix upper = h.topLeftCorner(r, r);
  ComplexMatrix lower = h.bottomRightCorner(c, c);
  project_block(upper, slab.upper);
  project_block(lower, slab.lower);
  return assemble_blocks(upper, slab.offdiag, lower);
}

double psd_residual(const ComplexMatrix& m) { return (m - project_psd(m)).norm(); }

double slab_residual(const ComplexMatrix& m, const AffineSlab& slab) { return (m - project_slab(m, slab)).norm(); }

FeasibilityResult dykstra(const AffineSlab& slab, const DykstraOptions& options) {
  validate_matrix(slab.offdiag, "slab off-diagonal block");
  const double scale = std::max(1.0, operator_norm(slab.offdiag));
  const double threshold = options.tol_feas * scale;
  const Index m = slab.rows();
  const Index n = slab.cols();

  const double c = operator_norm(slab.offdiag);
  ComplexMatrix x = project_slab(
      assemble_blocks(c * ComplexMatrix::Identity(m, m), slab.offdiag, c * ComplexMatrix::Identity(n, n)), slab);
  ComplexMatrix p = ComplexMatrix::Zero(m + n, m + n);
  ComplexMatrix q = ComplexMatrix::Zero(m + n, m + n);

  FeasibilityResult result;
  double best_gap = std::numeric_limits<double>::infinity();
  int since_progress = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const ComplexMatrix y = project_psd(x + p);
    p = x + p - y;
    const ComplexMatrix next = project_slab(y + q, slab);
    q = y + q - next;
    x = next;

    const double gap = (x - y).norm();
    result.iterations = it;
    if (gap <= threshold) {
      const double psd_res = psd_residual(x);
      if (psd_res <= threshold) {
        result.status = FeasibilityStatus::Feasible;
        result.point = x;
        result.psd_residual = psd_res;
        result.slab_residual = 0.0;
        return result;
      }
    }
    if (gap < 0.99 * best_gap) {
      best_gap = gap;
      since_progress = 0;
    } else if (++since_progress >= options.patience && gap > 10.0 * threshold) {
      result.status = FeasibilityStatus::Infeasible;
      result.point = x;
      result.psd_residual = psd_residual(x);
      return result;
    }
  }
  result.status = FeasibilityStatus::IterationCap;
  result.point = x;
  result.psd_residual = psd_residual(x);
  return result;
}

double bisect_norm(const std::function<bool(double)>& is_feasible, double t_lo, double t_hi, double tol_bisect) {
  if (!(t_hi >= t_lo) || !is_feasible(t_hi)) {
    throw Error(ErrorCode::BracketInvalid, "upper end of the bisection bracket is infeasible");
  }
  const double width = tol_bisect * std::max(t_hi, 1e-300);
  double lo = t_lo;
  double hi = t_hi;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (is_feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace schurfact
