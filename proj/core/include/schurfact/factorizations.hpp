#pragma once

// Norm-optimal factorizations extracted from the block-program and LP optima.

#include <optional>
#include <string>
#include <vector>

#include "schurfact/cb_norms.hpp"

namespace schurfact {

/// X = A Δ(ξ), ‖A‖_∞ = ‖X‖_cbF, ξ unit.
struct CbOperatorFactorization {
  ComplexMatrix a;
  WeightVector xi;
  double norm = 0.0;
};

/// X = Δ(η) B Δ(ξ), ‖B‖_∞ = ‖X‖_cbB, η and ξ unit.
struct CbBilinearFactorization {
  WeightVector eta;
  ComplexMatrix b;
  WeightVector xi;
  double norm = 0.0;
};

/// X = L* R with ‖L‖_c ‖R‖_c = ‖X‖_S and equal range projections.
struct ElementarySchurFactorization {
  ComplexMatrix l;  // k × m
  ComplexMatrix r;  // k × n
  double norm = 0.0;

  Index k() const { return l.rows(); }
};

/// X = s F W G with diag(F²), diag(G²) ≤ 1 and W a partial isometry from range(G) onto range(F).
struct SchurFactorization {
  double s = 0.0;
  ComplexMatrix f;  // m × m, positive
  ComplexMatrix w;  // m × n
  ComplexMatrix g;  // n × n, positive
};

/// X = T W G with ‖T‖₂ = ‖X‖_T and diag(G²) ≤ 1.
struct BilinearSchurFactorization {
  ComplexMatrix t;  // m × m, positive
  ComplexMatrix w;  // m × n
  ComplexMatrix g;  // n × n, positive
  double norm = 0.0;
};

/// X = s G S G with ‖G‖_c ≤ 1 and S a self-adjoint partial isometry.
struct SelfAdjointSchurFactorization {
  double s = 0.0;
  ComplexMatrix g;
  ComplexMatrix sign;  // the self-adjoint partial isometry S
};

/// X = F C G with diag(F²) = 1, diag(G²) = 1, ‖C‖_∞ ≤ 1 (for ‖X‖_S = 1).
struct NormalizedFcgFactorization {
  ComplexMatrix f;
  ComplexMatrix c;
  ComplexMatrix g;
};

struct AlignedPair {
  ComplexMatrix l;
  ComplexMatrix r;
};

/// R₁ = Q R with Q the range projection of L, then L₁ = Q₁ L with Q₁ the
/// range projection of R₁. Keeps L₁* R₁ = L* R and never increases norms.
AlignedPair align_ranges(const ComplexMatrix& l, const ComplexMatrix& r);

CbOperatorFactorization cb_operator_factorization(const ComplexMatrix& x, const NormOptions& options = {});
CbBilinearFactorization cb_bilinear_factorization(const ComplexMatrix& x, const NormOptions& options = {});
ElementarySchurFactorization elementary_schur(const ComplexMatrix& x, const NormOptions& options = {});
SchurFactorization schur_factorization(const ComplexMatrix& x, const NormOptions& options = {});
/// Throws NotSelfAdjoint unless ‖X − X*‖ ≤ tol_sym ‖X‖.
SelfAdjointSchurFactorization selfadjoint_schur(const ComplexMatrix& x, const NormOptions& options = {});
/// Throws InvalidMatrix unless ‖X‖_S = 1 within 1e-6.
NormalizedFcgFactorization normalized_fcg(const ComplexMatrix& x, const NormOptions& options = {});
BilinearSchurFactorization bilinear_schur_factorization(const ComplexMatrix& x, const NormOptions& options = {});

ComplexMatrix reconstruct(const CbOperatorFactorization& f);
ComplexMatrix reconstruct(const CbBilinearFactorization& f);
ComplexMatrix reconstruct(const ElementarySchurFactorization& f);
ComplexMatrix reconstruct(const SchurFactorization& f);
ComplexMatrix reconstruct(const BilinearSchurFactorization& f);
ComplexMatrix reconstruct(const SelfAdjointSchurFactorization& f);
ComplexMatrix reconstruct(const NormalizedFcgFactorization& f);

/// Norm value achieved by the factors (‖A‖_∞, ‖B‖_∞, ‖L‖_c‖R‖_c, ...).
double achieved_norm(const CbOperatorFactorization& f);
double achieved_norm(const CbBilinearFactorization& f);
double achieved_norm(const ElementarySchurFactorization& f);
double achieved_norm(const SchurFactorization& f);
double achieved_norm(const BilinearSchurFactorization& f);
double achieved_norm(const SelfAdjointSchurFactorization& f);

struct InvariantCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;

  bool passed() const { return residual <= tolerance; }
};

using InvariantReport = std::vector<InvariantCheck>;

bool all_passed(const InvariantReport& report);

/// Structural invariants of each factorization type; `norm` is the value the
/// factors should achieve (pass a negative number to skip that check).
InvariantReport check_invariants(const ComplexMatrix& x, const CbOperatorFactorization& f, double norm,
                                 double tol = 1e-5);
InvariantReport check_invariants(const ComplexMatrix& x, const CbBilinearFactorization& f, double norm,
                                 double tol = 1e-5);
InvariantReport check_invariants(const ComplexMatrix& x, const ElementarySchurFactorization& f, double norm,
                                 double tol = 1e-5);
InvariantReport check_invariants(const ComplexMatrix& x, const SchurFactorization& f, double norm,
                                 double tol = 1e-5);
InvariantReport check_invariants(const ComplexMatrix& x, const BilinearSchurFactorization& f, double norm,
                                 double tol = 1e-5);
InvariantReport check_invariants(const ComplexMatrix& x, const SelfAdjointSchurFactorization& f, double norm,
                                 double tol = 1e-5);
InvariantReport check_invariants(const ComplexMatrix& x, const NormalizedFcgFactorization& f, double tol = 1e-5);

enum class UniquenessKind { CbF, CbB, BilinearSchur, Schur };

const char* to_string(UniquenessKind kind);
std::optional<UniquenessKind> parse_uniqueness_kind(const std::string& text);

/// Column/row deletion test: every submatrix with one column (or one row)
/// removed has a strictly smaller Schur norm.
struct DeletionCondition {
  double schur_norm = 0.0;
  std::vector<double> column_deleted_norms;
  std::vector<double> row_deleted_norms;
  bool columns_hold = false;
  bool rows_hold = false;

  bool holds() const { return columns_hold || rows_hold; }
};

DeletionCondition schur_deletion_condition(const ComplexMatrix& x, const NormOptions& options = {},
                                           double margin = 1e-6);

struct UniquenessVerdict {
  UniquenessKind kind = UniquenessKind::CbF;
  bool consistent = false;
  double max_discrepancy = 0.0;  // relative, worst over restarts and factors
  int restarts = 0;
  std::optional<DeletionCondition> deletion;  // Schur kind only

  /// "consistent", "inconsistent", or for Schur with a failing deletion
  /// condition "precondition-fails, non-uniqueness allowed".
  std::string summary() const;
};

/// Re-solves with randomized starts and compares the canonical factors.
/// Throws InvalidMatrix when restarts < 2.
UniquenessVerdict verify_uniqueness(const ComplexMatrix& x, UniquenessKind kind, int restarts, std::uint64_t seed,
                                    const NormOptions& options = {}, double tol = 1e-5);

}  // namespace schurfact
