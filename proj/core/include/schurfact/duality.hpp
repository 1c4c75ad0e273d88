#pragma once

// Trace pairing ⟨X, Y⟩ = Tr(Y*X), dual-ball membership and dual witnesses for
// the polar pairs (cbB, S) and (cbF, T).

#include <cstdint>
#include <optional>
#include <string>

#include "schurfact/cb_norms.hpp"

namespace schurfact {

/// Tr(Y*X). Throws ShapeMismatch.
Complex pairing(const ComplexMatrix& x, const ComplexMatrix& y);

enum class Ball { CbF, CbB, S, T };

const char* to_string(Ball ball);

/// The ball's norm of Y; Y is in the ball iff the result is ≤ 1 + tol.
double polar_membership(const ComplexMatrix& y, Ball ball, const NormOptions& options = {});

/// Which norm of X is certified and in which dual ball the witness lives.
enum class Duality {
  CbBvsS,   // target ‖X‖_cbB, witness in the S ball
  CbFvsT,   // target ‖X‖_cbF, witness in the T ball
  TvsCbF,   // target ‖X‖_T,   witness in the cbF ball
  SvsCbB,   // target ‖X‖_S,   witness in the cbB ball
};

const char* to_string(Duality duality);
std::optional<Duality> parse_duality(const std::string& text);

NormKind target_kind(Duality duality);
Ball witness_ball(Duality duality);

struct WitnessOptions {
  std::uint64_t seed = 0;
  int max_iters = 20;
  NormOptions norm;
};

/// Seeds Y from the dual solution of the primal program, then runs projected
/// ascent (step along X, rescale by the dual norm) and keeps the best Y.
/// Throws ZeroMatrix for X = 0.
WitnessCertificate find_witness(const ComplexMatrix& x, Duality duality, const WitnessOptions& options = {});

/// Certificate for a given Y (normalized to dual norm 1).
WitnessCertificate certify(const ComplexMatrix& x, const ComplexMatrix& y, Duality duality,
                           const NormOptions& options = {});

/// diag(Y*X) / Re Tr(Y*X): equals Δ(ξ)² at an exact witness.
RealVector right_weights_from_witness(const ComplexMatrix& x, const ComplexMatrix& y);
/// diag(Y X*) / Re Tr(Y*X): equals Δ(η)² at an exact witness.
RealVector left_weights_from_witness(const ComplexMatrix& x, const ComplexMatrix& y);
/// ‖X‖_T² · Y X* / Re Tr(Y*X): equals T² for the bilinear Schur factor.
ComplexMatrix t_squared_from_witness(const ComplexMatrix& x, const ComplexMatrix& y, double t_norm_value);

}  // namespace schurfact
