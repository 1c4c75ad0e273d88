#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles use
// Eigen's own solvers or brute force, never the library under test.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "schurfact/matrix.hpp"

namespace testing_support {

using schurfact::Complex;
using schurfact::ComplexMatrix;
using schurfact::ComplexVector;
using schurfact::Index;
using schurfact::RealVector;

inline constexpr double kPi = 3.14159265358979323846;

inline ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = static_cast<Index>(rows.begin()->size());
  ComplexMatrix x(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const Complex& v : row) x(i, j++) = v;
    ++i;
  }
  return x;
}

inline ComplexMatrix diag(std::initializer_list<Complex> entries) {
  const Index n = static_cast<Index>(entries.size());
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  Index k = 0;
  for (const Complex& v : entries) {
    x(k, k) = v;
    ++k;
  }
  return x;
}

inline double eigen_op_norm(const ComplexMatrix& x) {
  return Eigen::JacobiSVD<ComplexMatrix>(x).singularValues()(0);
}

inline RealVector eigen_singular_values(const ComplexMatrix& x) {
  return Eigen::JacobiSVD<ComplexMatrix>(x).singularValues();
}

inline RealVector eigen_eigenvalues_desc(const ComplexMatrix& h) {
  RealVector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues();
  return ev.reverse().eval();
}

inline double eigen_min_eigenvalue(const ComplexMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

/// Brute-force sup ‖Xa‖₂ over a phase grid (first phase pinned to 0).
inline double brute_force_f_norm(const ComplexMatrix& x, int resolution) {
  const Index n = x.cols();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = 0.0;
  while (true) {
    ComplexVector a(n);
    for (Index j = 0; j < n; ++j) a(j) = std::polar(1.0, 2.0 * kPi * idx[static_cast<std::size_t>(j)] / resolution);
    best = std::max(best, (x * a).norm());
    Index k = 1;
    while (k < n && ++idx[static_cast<std::size_t>(k)] == resolution) idx[static_cast<std::size_t>(k++)] = 0;
    if (k >= n) break;
  }
  return best;
}

/// Brute-force sup |aᵀXb| = sup_b ‖Xb‖₁ over a phase grid on b.
inline double brute_force_b_norm(const ComplexMatrix& x, int resolution) {
  const Index n = x.cols();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = 0.0;
  while (true) {
    ComplexVector b(n);
    for (Index j = 0; j < n; ++j) b(j) = std::polar(1.0, 2.0 * kPi * idx[static_cast<std::size_t>(j)] / resolution);
    best = std::max(best, (x * b).cwiseAbs().sum());
    Index k = 1;
    while (k < n && ++idx[static_cast<std::size_t>(k)] == resolution) idx[static_cast<std::size_t>(k++)] = 0;
    if (k >= n) break;
  }
  return best;
}

/// Random diagonal unitary.
inline ComplexMatrix random_phase_diagonal(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) d(k, k) = std::polar(1.0, phase(rng));
  return d;
}

inline ComplexMatrix random_permutation(Index n, std::mt19937_64& rng) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] = k;
  std::shuffle(p.begin(), p.end(), rng);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) m(k, p[static_cast<std::size_t>(k)]) = 1.0;
  return m;
}

inline double relative_error(double value, double expected) {
  return std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
}

}  // namespace testing_support
