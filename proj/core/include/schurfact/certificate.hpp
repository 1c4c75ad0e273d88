#pragma once

#include "schurfact/matrix.hpp"

namespace schurfact {

/// Dual matrix Y certifying a lower bound for a norm of X: the pairing
/// Re Tr(Y*X) divided by the dual norm of Y never exceeds the primal norm.
struct WitnessCertificate {
  ComplexMatrix y;
  double pairing = 0.0;          // Re Tr(Y*X)
  double dual_norm_bound = 0.0;  // computed dual norm of Y
  double target_norm = 0.0;      // primal norm of X
  double certified_gap = 0.0;    // |target_norm − pairing / dual_norm_bound|

  double lower_bound() const { return dual_norm_bound > 0.0 ? pairing / dual_norm_bound : 0.0; }
};

}  // namespace schurfact
