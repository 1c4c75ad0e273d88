#pragma once

// Block-PSD feasibility: the set {M ⪰ 0} ∩ {M = [[A, X], [X*, B]] with
// diagonal rules on A and B}, projections onto both pieces, Dykstra's
// alternating projections and scalar bisection.

#include <functional>

#include "schurfact/matrix.hpp"

namespace schurfact {

enum class DiagonalRule {
  Free,          // no constraint on the diagonal
  EntrywiseCap,  // every diagonal entry ≤ bound
  TraceEqual,    // trace = bound
  TraceCap,      // trace ≤ bound
};

struct BlockConstraint {
  DiagonalRule rule = DiagonalRule::Free;
  double bound = 0.0;
  bool force_diagonal = false;  // off-diagonal entries of the block must vanish
};

/// Hermitian (m+n)×(m+n) matrices whose off-diagonal block is pinned to X
/// and whose diagonal blocks obey the given rules.
struct AffineSlab {
  ComplexMatrix offdiag;  // X, m × n
  BlockConstraint upper;  // m × m block
  BlockConstraint lower;  // n × n block

  Index rows() const { return offdiag.rows(); }
  Index cols() const { return offdiag.cols(); }
  Index dimension() const { return offdiag.rows() + offdiag.cols(); }
};

/// Nearest PSD matrix in Frobenius distance (negative eigenvalues clipped).
ComplexMatrix project_psd(const ComplexMatrix& m);

/// Frobenius-nearest point of the slab.
ComplexMatrix project_slab(const ComplexMatrix& m, const AffineSlab& slab);

/// Assembles [[upper, X], [X*, lower]].
ComplexMatrix assemble_blocks(const ComplexMatrix& upper, const ComplexMatrix& x, const ComplexMatrix& lower);

/// ‖M − project_psd(M)‖_F
double psd_residual(const ComplexMatrix& m);
/// ‖M − project_slab(M)‖_F
double slab_residual(const ComplexMatrix& m, const AffineSlab& slab);

enum class FeasibilityStatus { Feasible, Infeasible, IterationCap };

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::IterationCap;
  ComplexMatrix point;
  double psd_residual = 0.0;
  double slab_residual = 0.0;
  int iterations = 0;
};

struct DykstraOptions {
  double tol_feas = 1e-8;
  int max_iter = 20000;
  /// Iterations without 1% progress of the projection gap that count as a stall.
  int patience = 500;
};

/// Dykstra's alternating projections onto the PSD cone and the slab. Returns
/// IterationCap as a status; callers that need a verdict throw on it.
FeasibilityResult dykstra(const AffineSlab& slab, const DykstraOptions& options = {});

/// Smallest t in [t_lo, t_hi] (within tol_bisect·t_hi) with is_feasible(t).
/// Throws BracketInvalid when t_hi is infeasible.
double bisect_norm(const std::function<bool(double)>& is_feasible, double t_lo, double t_hi,
                   double tol_bisect = 1e-7);

}  // namespace schurfact
