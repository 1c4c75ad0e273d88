#pragma once

#include <vector>

#include "schurfact/simplex.hpp"

namespace schurfact {

struct CuttingPlaneOptions {
  double tol = 1e-7;       // relative to ‖P‖_∞
  int max_rounds = 2000;
  int max_cuts_per_round = 0;  // 0: one per violated eigenvector
  /// Extra seed directions added to the coordinate cuts.
  std::vector<ComplexVector> initial_directions;
};

struct CuttingPlaneResult {
  WeightVector gamma;   // Δ(γ) ⪰ P up to rounding; shifted from the LP point
  double value = 0.0;   // Σγ, an upper bound on the optimum
  double lower_bound = 0.0;  // LP value over the accumulated cuts
  std::vector<LpCut> cuts;
  RealVector multipliers;  // LP duals, one per cut
  double min_eigenvalue = 0.0;  // of Δ(λ) − P at the last LP point
  int rounds = 0;
};

/// min Σγ_j subject to Δ(γ) ⪰ P with Kelley's method: LP over accumulated
/// cuts, eigenvalue oracle on Δ(λ) − P, one cut per negative eigenvector.
/// P must be PSD; throws NotPsd otherwise.
CuttingPlaneResult cutting_plane_diag_dominance(const ComplexMatrix& p, const CuttingPlaneOptions& options = {});

/// Same loop for an arbitrary Hermitian P.
CuttingPlaneResult cutting_plane_hermitian(const ComplexMatrix& p, const CuttingPlaneOptions& options = {});

/// Σ y_k ξ_k ξ_k* over the cuts: a PSD matrix with diagonal ≤ 1 and Tr(PΩ)
/// equal to the LP value.
ComplexMatrix cut_correlation(const CuttingPlaneResult& result);

}  // namespace schurfact
