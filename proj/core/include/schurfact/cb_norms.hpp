#pragma once

// Completely bounded and Schur-type norms through block-PSD programs:
//   S    min ½(max diag A + max diag B)  over [[A, X], [X*, B]] ⪰ 0
//   cbB  min ½(Tr D₁ + Tr D₂)            with D₁, D₂ diagonal
//   T    min Tr A subject to diag B ≤ 1  (value is the square root)
//   cbF  ‖X*X‖_cbB^{1/2}, with cbB of a positive matrix from an LP.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schurfact/certificate.hpp"
#include "schurfact/cutting_plane.hpp"
#include "schurfact/elem_norms.hpp"
#include "schurfact/splitting.hpp"

namespace schurfact {

enum class NormKind { F, CbF, B, CbB, S, T };

const char* to_string(NormKind kind);
/// Accepts "F", "cbF", "B", "cbB", "S", "T" (case-insensitive).
std::optional<NormKind> parse_norm_kind(const std::string& text);

enum class SolverMethod {
  Automatic,     // splitting for S/cbB/T, cutting plane for cbF
  Splitting,     // ADMM on the block program
  CuttingPlane,  // Kelley LP (cbF; cbB through the Hermitian dilation)
  Bisection,     // bisection over Dykstra feasibility
};

const char* to_string(SolverMethod method);

struct NormOptions {
  SolverMethod method = SolverMethod::Automatic;
  double splitting_tol = 1e-11;  // on data scaled to ‖X‖_∞ = 1
  double lp_tol = 1e-12;
  double tol_feas = 1e-8;
  double tol_bisect = 1e-7;
  int max_iter = 200000;
  std::optional<std::uint64_t> restart_seed;
  TorusSearchOptions torus;
};

using Diagnostics = std::vector<std::pair<std::string, double>>;

struct NormReport {
  NormKind kind = NormKind::S;
  double value = 0.0;
  std::string method;
  Diagnostics residuals;
  std::optional<WitnessCertificate> certificate;
};

/// Optimal point of a block program at the scale of the input X.
struct BlockSolution {
  double value = 0.0;          // the norm
  ComplexMatrix point;         // (m+n)×(m+n), off-diagonal block X
  ComplexMatrix multiplier;    // dual of the PSD constraint, same scale as the data
  Diagnostics residuals;
};

/// Solution of min Σγ subject to Δ(γ) ⪰ P.
struct DiagonalDominanceSolution {
  double value = 0.0;
  WeightVector gamma;
  WeightVector xi;        // (γ / Σγ)^{1/2}, unit
  ComplexMatrix correlation;  // PSD, diag ≤ 1, Tr(PΩ) = value
  Diagnostics residuals;
};

NormReport schur_norm(const ComplexMatrix& x, const NormOptions& options = {});
NormReport cbb_norm(const ComplexMatrix& x, const NormOptions& options = {});
NormReport cbb_norm_positive_lp(const ComplexMatrix& p, const NormOptions& options = {});
NormReport cbf_norm(const ComplexMatrix& x, const NormOptions& options = {});
NormReport t_norm(const ComplexMatrix& x, const NormOptions& options = {});
/// F and B through the torus search of elem-norms.
NormReport f_norm_report(const ComplexMatrix& x, const NormOptions& options = {});
NormReport b_norm_report(const ComplexMatrix& x, const NormOptions& options = {});

NormReport compute_norm(NormKind kind, const ComplexMatrix& x, const NormOptions& options = {});

/// Block-program optima used by the factorization constructors.
BlockSolution solve_schur_program(const ComplexMatrix& x, const NormOptions& options = {});
BlockSolution solve_cbb_program(const ComplexMatrix& x, const NormOptions& options = {});
BlockSolution solve_t_program(const ComplexMatrix& x, const NormOptions& options = {});
DiagonalDominanceSolution solve_diag_dominance(const ComplexMatrix& p, const NormOptions& options = {});

struct GrothendieckRatios {
  double ratio_f = 1.0;  // ‖X‖_cbF / ‖X‖_F
  double ratio_b = 1.0;  // ‖X‖_cbB / ‖X‖_B
  bool certified = false;
};

/// Throws GridTooLarge at uncertifiable sizes unless options.torus.mode is Heuristic.
GrothendieckRatios grothendieck_ratios(const ComplexMatrix& x, const NormOptions& options = {});

/// Monotone feasibility predicates driving the bisection route.
bool schur_feasible(const ComplexMatrix& x, double t, const DykstraOptions& options = {});
bool cbb_feasible(const ComplexMatrix& x, double t, const DykstraOptions& options = {});
bool t_feasible(const ComplexMatrix& x, double t, const DykstraOptions& options = {});

}  // namespace schurfact
