#pragma once

#include <cstdint>
#include <optional>

#include "schurfact/feasibility.hpp"

namespace schurfact {

enum class BlockObjective {
  None,
  Trace,        // weight · Tr(block)
  MaxDiagonal,  // weight · max_i block_ii (block rule must be Free)
};

struct BlockCost {
  BlockObjective kind = BlockObjective::None;
  double weight = 0.0;
};

struct SplittingOptions {
  double tol = 1e-11;  // on primal and dual residuals, Frobenius
  int max_iter = 200000;
  double rho = 1.0;
  bool adaptive_rho = true;
  /// Randomized starting point (used by uniqueness restarts).
  std::optional<std::uint64_t> restart_seed;
};

struct SplittingResult {
  ComplexMatrix slab_point;  // lies in the slab exactly
  ComplexMatrix psd_point;   // PSD exactly; differs from slab_point by primal_residual
  ComplexMatrix multiplier;  // ρU, the scaled dual of the coupling constraint
  double objective = 0.0;    // evaluated at slab_point
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the block objective over (PSD cone) ∩ slab by Douglas-Rachford
/// splitting (ADMM) between project_psd and the slab proximal map.
SplittingResult minimize_over_slab(const AffineSlab& slab, const BlockCost& upper, const BlockCost& lower,
                                   const SplittingOptions& options = {});

double block_objective_value(const ComplexMatrix& point, const AffineSlab& slab, const BlockCost& upper,
                             const BlockCost& lower);

/// Euclidean projection onto the probability simplex.
RealVector project_simplex(const RealVector& v);

}  // namespace schurfact
