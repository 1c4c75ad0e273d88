#pragma once

#include <vector>

#include "schurfact/matrix.hpp"

namespace schurfact {

/// Linear constraint Σ_j |ξ_j|² λ_j ≥ ⟨Pξ, ξ⟩ generated by a unit direction ξ.
struct LpCut {
  ComplexVector direction;
  double bound = 0.0;

  /// Cut for direction ξ (normalized here) against the Hermitian matrix P.
  static LpCut from_direction(const ComplexVector& xi, const ComplexMatrix& p);

  /// The realified row (|ξ_1|², ..., |ξ_n|²).
  RealVector row() const { return direction.cwiseAbs2(); }
};

struct LpSolution {
  WeightVector x;         // optimal λ ≥ 0
  double value = 0.0;     // cᵀλ
  RealVector multipliers;  // one nonnegative dual value per constraint row
  int pivots = 0;
};

/// min cᵀλ subject to Aλ ≥ b, λ ≥ 0, solved through its dual with a dense
/// tableau and Bland's rule. Throws LpInfeasible or LpUnbounded.
LpSolution simplex_lp(const RealVector& costs, const Eigen::MatrixXd& rows, const RealVector& bounds);

/// Convenience overload: min Σλ_j over the accumulated cuts.
LpSolution simplex_lp(const std::vector<LpCut>& cuts, Index n);

}  // namespace schurfact
