#include "schurfact/cutting_plane.hpp"

#include <algorithm>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {

CuttingPlaneResult cutting_plane_hermitian(const ComplexMatrix& p, const CuttingPlaneOptions& options) {
  validate_matrix(p, "cutting-plane input");
  const HermitianEigen spectrum = hermitian_eigen(p);
  const Index n = p.rows();
  const ComplexMatrix h = hermitian_part(p);
  const double scale = spectrum.eigenvalues.cwiseAbs().maxCoeff();

  CuttingPlaneResult result;
  for (Index j = 0; j < n; ++j) result.cuts.push_back(LpCut::from_direction(ComplexVector::Unit(n, j), h));
  for (const ComplexVector& d : options.initial_directions) {
    if (d.size() != n) throw Error(ErrorCode::ShapeMismatch, "seed cut has the wrong dimension");
    result.cuts.push_back(LpCut::from_direction(d, h));
  }
  if (scale == 0.0) {
    result.gamma = WeightVector(RealVector::Zero(n));
    result.multipliers = RealVector::Zero(static_cast<Index>(result.cuts.size()));
    return result;
  }

  const double threshold = options.tol * scale;
  ComplexMatrix basis = ComplexMatrix::Identity(n, n);
  for (int round = 1; round <= options.max_rounds; ++round) {
    result.rounds = round;
    const LpSolution lp = simplex_lp(result.cuts, n);
    result.lower_bound = lp.value;
    result.multipliers = lp.multipliers;
    const ComplexMatrix slack = diag_matrix(lp.x.entries()) - h;
    const HermitianEigen e = hermitian_eigen(slack, basis);
    basis = e.eigenvectors;
    const Index last = n - 1;
    result.min_eigenvalue = e.eigenvalues[last];
    if (result.min_eigenvalue >= -threshold) {
      const double shift = std::max(0.0, -result.min_eigenvalue);
      result.gamma = WeightVector((lp.x.entries().array() + shift).matrix());
      result.value = result.gamma.entries().sum();
      return result;
    }
    int added = 0;
    for (Index k = last; k >= 0; --k) {
      if (e.eigenvalues[k] >= -threshold) break;
      if (options.max_cuts_per_round > 0 && added >= options.max_cuts_per_round) break;
      result.cuts.push_back(LpCut::from_direction(e.eigenvectors.col(k), h));
      ++added;
    }
  }
  throw Error(ErrorCode::IterationCap, "cutting-plane loop hit the round limit");
}

CuttingPlaneResult cutting_plane_diag_dominance(const ComplexMatrix& p, const CuttingPlaneOptions& options) {
  validate_matrix(p, "cutting-plane input");
  const HermitianEigen e = hermitian_eigen(p);
  const double scale = e.eigenvalues.cwiseAbs().maxCoeff();
  if (e.eigenvalues.minCoeff() < -kTolPsd * scale) {
    throw Error(ErrorCode::NotPsd, "diagonal-dominance program needs a positive semidefinite matrix");
  }
  return cutting_plane_hermitian(p, options);
}

ComplexMatrix cut_correlation(const CuttingPlaneResult& result) {
  if (result.cuts.empty()) return {};
  const Index n = result.cuts.front().direction.size();
  ComplexMatrix omega = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < result.cuts.size(); ++k) {
    const double y = result.multipliers[static_cast<Index>(k)];
    if (y == 0.0) continue;
    const ComplexVector& xi = result.cuts[k].direction;
    omega += y * xi * xi.adjoint();
  }
  return hermitian_part(omega);
}

}  // namespace schurfact
