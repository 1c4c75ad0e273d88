#include "schurfact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "schurfact/error.hpp"

namespace schurfact {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-13;

// Unitary 2×2 rotation J acting on coordinates (p, q) that annihilates the
// (p, q) entry of the Hermitian matrix [[app, apq], [conj(apq), aqq]] under J*·J.
struct Rotation {
  double c = 1.0;
  double s = 0.0;
  Complex phase{1.0, 0.0};  // conj(apq)/|apq|
  double t = 0.0;
};

Rotation make_rotation(double app, double aqq, Complex apq) {
  Rotation r;
  const double mag = std::abs(apq);
  r.phase = std::conj(apq) / mag;
  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  r.t = t;
  r.c = 1.0 / std::sqrt(t * t + 1.0);
  r.s = t * r.c;
  return r;
}

// columns p, q of a ← a·J with J = [[c, s], [−s·e, c·e]], e = r.phase
void rotate_columns(ComplexMatrix& a, Index p, Index q, const Rotation& r) {
  for (Index k = 0; k < a.rows(); ++k) {
    const Complex ap = a(k, p);
    const Complex aq = a(k, q) * r.phase;
    a(k, p) = r.c * ap - r.s * aq;
    a(k, q) = r.s * ap + r.c * aq;
  }
}

// rows p, q of a ← J*·a
void rotate_rows(ComplexMatrix& a, Index p, Index q, const Rotation& r) {
  const Complex e = std::conj(r.phase);
  for (Index k = 0; k < a.cols(); ++k) {
    const Complex ap = a(p, k);
    const Complex aq = a(q, k) * e;
    a(p, k) = r.c * ap - r.s * aq;
    a(q, k) = r.s * ap + r.c * aq;
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < j; ++i) sum += std::norm(a(i, j));
  }
  return std::sqrt(2.0 * sum);
}

void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix& v) {
  const Index n = a.rows();
  const double total = a.norm();
  if (total == 0.0) return;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kOffDiagonalTol * total) return;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Rotation r = make_rotation(app, aqq, apq);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - r.t * std::abs(apq);
        a(q, q) = aqq + r.t * std::abs(apq);
        rotate_columns(v, p, q, r);
      }
    }
  }
  if (off_diagonal_norm(a) > kOffDiagonalTol * total) {
    throw Error(ErrorCode::IterationCap, "Jacobi eigensolver did not converge");
  }
}

void check_hermitian(const ComplexMatrix& m) {
  validate_matrix(m, "Hermitian input");
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "eigendecomposition needs a square matrix");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > kTolSym * scale) {
    throw Error(ErrorCode::NotHermitian, "matrix is not self-adjoint within tolerance");
  }
}

HermitianEigen sorted_eigen(const ComplexMatrix& a, const ComplexMatrix& v) {
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() > a(j, j).real(); });
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

// Hestenes one-sided Jacobi on a tall matrix (rows >= cols).
SingularValueDecomposition tall_svd(const ComplexMatrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::Identity(cols, cols);
  constexpr double eps = 1e-15;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (Index p = 0; p < cols - 1; ++p) {
      for (Index q = p + 1; q < cols; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const Complex gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300) continue;
        converged = false;
        const Rotation r = make_rotation(alpha, beta, gamma);
        rotate_columns(a, p, q, r);
        rotate_columns(v, p, q, r);
      }
    }
  }
  if (!converged) throw Error(ErrorCode::IterationCap, "Jacobi SVD did not converge");

  std::vector<Index> order(static_cast<std::size_t>(cols));
  RealVector norms(cols);
  for (Index j = 0; j < cols; ++j) norms[j] = a.col(j).norm();
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return norms[i] > norms[j]; });

  SingularValueDecomposition out{ComplexMatrix::Zero(rows, cols), RealVector(cols), ComplexMatrix(cols, cols)};
  std::vector<Index> missing;
  for (Index k = 0; k < cols; ++k) {
    const Index j = order[static_cast<std::size_t>(k)];
    out.sigma[k] = norms[j];
    out.v.col(k) = v.col(j);
    if (norms[j] > 0.0) {
      out.u.col(k) = a.col(j) / norms[j];
    } else {
      missing.push_back(k);
    }
  }
  // complete U with standard basis vectors orthogonalized against the rest
  Index candidate = 0;
  for (Index k : missing) {
    while (candidate < rows) {
      ComplexVector e = ComplexVector::Unit(rows, candidate++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < cols; ++j) {
          if (j == k || out.u.col(j).squaredNorm() == 0.0) continue;
          e -= out.u.col(j) * out.u.col(j).dot(e);
        }
      }
      const double len = e.norm();
      if (len > 0.5) {
        out.u.col(k) = e / len;
        break;
      }
    }
  }
  return out;
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  check_hermitian(m);
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::Identity(m.rows(), m.cols());
  jacobi_diagonalize(a, v);
  return sorted_eigen(a, v);
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m, const ComplexMatrix& basis) {
  check_hermitian(m);
  if (basis.rows() != m.rows() || basis.cols() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "warm-start basis must match the matrix");
  }
  ComplexMatrix a = basis.adjoint() * hermitian_part(m) * basis;
  a = hermitian_part(a);
  ComplexMatrix v = basis;
  jacobi_diagonalize(a, v);
  return sorted_eigen(a, v);
}

SingularValueDecomposition svd(const ComplexMatrix& m) {
  validate_matrix(m, "SVD input");
  if (m.rows() >= m.cols()) return tall_svd(m);
  SingularValueDecomposition t = tall_svd(m.adjoint());
  return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

double operator_norm(const ComplexMatrix& m) { return svd(m).sigma[0]; }

namespace {
Index rank_of(const RealVector& sigma, double rank_tol) {
  if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
  Index r = 0;
  while (r < sigma.size() && sigma[r] > rank_tol * sigma[0]) ++r;
  return r;
}
}  // namespace

Index numerical_rank(const ComplexMatrix& m, double rank_tol) { return rank_of(svd(m).sigma, rank_tol); }

PolarDecomposition polar(const ComplexMatrix& m, double rank_tol) {
  const SingularValueDecomposition d = svd(m);
  const Index r = rank_of(d.sigma, rank_tol);
  PolarDecomposition out;
  out.isometric_part = d.u.leftCols(r) * d.v.leftCols(r).adjoint();
  out.positive_part = hermitian_part(d.v * d.sigma.asDiagonal() * d.v.adjoint());
  return out;
}

ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f) {
  const HermitianEigen e = hermitian_eigen(m);
  RealVector mapped(e.eigenvalues.size());
  for (Index i = 0; i < mapped.size(); ++i) mapped[i] = f(e.eigenvalues[i]);
  return hermitian_part(e.eigenvectors * mapped.asDiagonal() * e.eigenvectors.adjoint());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol_psd) {
  const HermitianEigen e = hermitian_eigen(m);
  const double scale = e.eigenvalues.cwiseAbs().maxCoeff();
  if (e.eigenvalues.minCoeff() < -tol_psd * scale) {
    throw Error(ErrorCode::NotPsd, "matrix has a negative eigenvalue beyond tolerance");
  }
  RealVector root = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return hermitian_part(e.eigenvectors * root.asDiagonal() * e.eigenvectors.adjoint());
}

ComplexMatrix range_projection(const ComplexMatrix& m, double rank_tol) {
  const SingularValueDecomposition d = svd(m);
  const Index r = rank_of(d.sigma, rank_tol);
  return hermitian_part(d.u.leftCols(r) * d.u.leftCols(r).adjoint());
}

ComplexMatrix support_projection(const ComplexMatrix& m, double rank_tol) {
  return range_projection(m.adjoint(), rank_tol);
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol) {
  const SingularValueDecomposition d = svd(m);
  const Index r = rank_of(d.sigma, rank_tol);
  RealVector inv = d.sigma.head(r).cwiseInverse();
  return d.v.leftCols(r) * inv.asDiagonal() * d.u.leftCols(r).adjoint();
}

ComplexMatrix diag_pseudo_inverse(const WeightVector& xi, double rank_tol) {
  const Index n = xi.size();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  if (n == 0) return out;
  const double top = xi.entries().maxCoeff();
  for (Index i = 0; i < n; ++i) {
    if (top > 0.0 && xi[i] > rank_tol * top) out(i, i) = 1.0 / xi[i];
  }
  return out;
}

std::pair<double, ComplexVector> min_eigenpair(const ComplexMatrix& m) {
  const HermitianEigen e = hermitian_eigen(m);
  const Index last = e.eigenvalues.size() - 1;
  return {e.eigenvalues[last], e.eigenvectors.col(last)};
}

}  // namespace schurfact
