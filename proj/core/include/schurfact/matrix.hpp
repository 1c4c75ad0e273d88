#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace schurfact {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Throws InvalidMatrix unless X has at least one row and column and only finite entries.
void validate_matrix(const ComplexMatrix& x, const char* what = "matrix");

bool is_zero(const ComplexMatrix& x, double tol = 0.0);
double max_abs(const ComplexMatrix& x);

/// Δ(v): diagonal matrix carrying v.
ComplexMatrix diag_matrix(const RealVector& v);
/// Real part of the diagonal of a square matrix.
RealVector real_diagonal(const ComplexMatrix& m);

/// (M + M*) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Nonnegative weight vector ξ or η; Δ(ξ) is the diagonal factor of a factorization.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(RealVector entries);

  static WeightVector uniform(Index n);

  const RealVector& entries() const { return entries_; }
  Index size() const { return entries_.size(); }
  double operator[](Index i) const { return entries_[i]; }

  double norm() const { return entries_.norm(); }
  bool is_unit(double tol = 1e-10) const;
  WeightVector normalized() const;
  ComplexMatrix diagonal() const { return diag_matrix(entries_); }

 private:
  RealVector entries_;
};

/// A point on the torus (S¹)ⁿ stored as phases in [0, 2π).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(RealVector phases);

  /// All phases zero, i.e. the all-ones vector.
  static TorusPoint ones(Index n);
  /// Phases of the entries of v; zero entries map to phase 0.
  static TorusPoint phases_of(const ComplexVector& v);

  const RealVector& phases() const { return phases_; }
  Index size() const { return phases_.size(); }
  ComplexVector unimodular() const;

 private:
  RealVector phases_;
};

// Seeded generators for fixtures, restarts and the self-test.
ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng);
ComplexMatrix random_hermitian(Index n, std::mt19937_64& rng);
/// A A* for a random square A: positive definite almost surely.
ComplexMatrix random_positive(Index n, std::mt19937_64& rng);
/// Random matrix with orthonormal columns (rows >= cols).
ComplexMatrix random_isometry(Index rows, Index cols, std::mt19937_64& rng);
ComplexMatrix random_sign_matrix(Index rows, Index cols, std::mt19937_64& rng);
/// Unitary discrete Fourier transform matrix of order n.
ComplexMatrix dft_matrix(Index n);

}  // namespace schurfact
