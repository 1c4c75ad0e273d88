#pragma once

// Dense complex linear algebra: Hermitian eigensolver, SVD, polar decomposition,
// PSD square roots and range projections. Everything here is a pure function.

#include <functional>

#include "schurfact/matrix.hpp"

namespace schurfact {

/// Relative singular-value cutoff used for ranks, supports and pseudo-inverses.
inline constexpr double kRankTol = 1e-10;
/// Relative negative-eigenvalue dust tolerated (and clipped) by psd_sqrt.
inline constexpr double kTolPsd = 1e-9;
/// Relative ‖M − M*‖ accepted as self-adjoint.
inline constexpr double kTolSym = 1e-10;

struct HermitianEigen {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // unitary, column k belongs to eigenvalues[k]
};

/// Cyclic complex Jacobi. Throws NotSquare / NotHermitian.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

/// Same, but rotates into `basis` first; converges in one or two sweeps when
/// `basis` nearly diagonalizes m (successive iterates of a splitting method).
HermitianEigen hermitian_eigen(const ComplexMatrix& m, const ComplexMatrix& basis);

struct SingularValueDecomposition {
  ComplexMatrix u;   // m × p, orthonormal columns, p = min(m, n)
  RealVector sigma;  // p, descending, nonnegative
  ComplexMatrix v;   // n × p, orthonormal columns
};

/// One-sided (Hestenes) Jacobi SVD.
SingularValueDecomposition svd(const ComplexMatrix& m);

double operator_norm(const ComplexMatrix& m);

Index numerical_rank(const ComplexMatrix& m, double rank_tol = kRankTol);

struct PolarDecomposition {
  ComplexMatrix isometric_part;  // partial isometry V, m × n
  ComplexMatrix positive_part;   // |M| = (M*M)^{1/2}, n × n
};

/// M = V|M| with V a partial isometry from the support of |M| onto the range of M.
PolarDecomposition polar(const ComplexMatrix& m, double rank_tol = kRankTol);

/// f applied to the eigenvalues of a Hermitian matrix.
ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f);

/// Square root of a positive semidefinite matrix; eigenvalues down to
/// −tol_psd·‖M‖_∞ are treated as zero, anything lower throws NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol_psd = kTolPsd);

/// Orthogonal projection onto the range of M (singular values above rank_tol·σ₁).
ComplexMatrix range_projection(const ComplexMatrix& m, double rank_tol = kRankTol);

/// Orthogonal projection onto the orthogonal complement of the kernel of M.
ComplexMatrix support_projection(const ComplexMatrix& m, double rank_tol = kRankTol);

/// Moore-Penrose pseudo-inverse with the same singular-value cutoff.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol = kRankTol);

/// Δ(ξ)⁺: 1/ξ_j where ξ_j > rank_tol·max(ξ), zero elsewhere.
ComplexMatrix diag_pseudo_inverse(const WeightVector& xi, double rank_tol = kRankTol);

/// Smallest eigenvalue of a Hermitian matrix, with its eigenvector.
std::pair<double, ComplexVector> min_eigenpair(const ComplexMatrix& m);

}  // namespace schurfact
