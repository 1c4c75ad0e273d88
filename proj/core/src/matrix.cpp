#include "schurfact/matrix.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "schurfact/error.hpp"

namespace schurfact {

void validate_matrix(const ComplexMatrix& x, const char* what) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw Error(ErrorCode::InvalidMatrix, std::string(what) + " must have at least one row and one column");
  }
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (!std::isfinite(x(i, j).real()) || !std::isfinite(x(i, j).imag())) {
        throw Error(ErrorCode::InvalidMatrix, std::string(what) + " has a non-finite entry");
      }
    }
  }
}

bool is_zero(const ComplexMatrix& x, double tol) { return max_abs(x) <= tol; }

double max_abs(const ComplexMatrix& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

ComplexMatrix diag_matrix(const RealVector& v) {
  ComplexMatrix d = ComplexMatrix::Zero(v.size(), v.size());
  for (Index i = 0; i < v.size(); ++i) d(i, i) = v[i];
  return d;
}

RealVector real_diagonal(const ComplexMatrix& m) { return m.diagonal().real(); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

WeightVector::WeightVector(RealVector entries) : entries_(std::move(entries)) {
  for (Index i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i]) || entries_[i] < 0.0) {
      throw Error(ErrorCode::InvalidMatrix, "weight vector entries must be finite and nonnegative");
    }
  }
}

WeightVector WeightVector::uniform(Index n) {
  return WeightVector(RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

bool WeightVector::is_unit(double tol) const { return std::abs(entries_.squaredNorm() - 1.0) <= tol; }

WeightVector WeightVector::normalized() const {
  const double n = norm();
  if (n == 0.0) return uniform(size());
  return WeightVector(entries_ / n);
}

TorusPoint::TorusPoint(RealVector phases) : phases_(std::move(phases)) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (Index i = 0; i < phases_.size(); ++i) {
    double p = std::fmod(phases_[i], two_pi);
    if (p < 0.0) p += two_pi;
    if (p >= two_pi) p = 0.0;
    phases_[i] = p;
  }
}

TorusPoint TorusPoint::ones(Index n) { return TorusPoint(RealVector::Zero(n)); }

TorusPoint TorusPoint::phases_of(const ComplexVector& v) {
  RealVector p(v.size());
  for (Index i = 0; i < v.size(); ++i) p[i] = v[i] == Complex(0.0) ? 0.0 : std::arg(v[i]);
  return TorusPoint(std::move(p));
}

ComplexVector TorusPoint::unimodular() const {
  ComplexVector a(phases_.size());
  for (Index i = 0; i < phases_.size(); ++i) a[i] = std::polar(1.0, phases_[i]);
  return a;
}

ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix x(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, j) = Complex(re, im);
    }
  }
  return x;
}

ComplexMatrix random_hermitian(Index n, std::mt19937_64& rng) { return hermitian_part(random_complex(n, n, rng)); }

ComplexMatrix random_positive(Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(n, n, rng);
  return hermitian_part(a * a.adjoint());
}

ComplexMatrix random_isometry(Index rows, Index cols, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  return qr.householderQ() * ComplexMatrix::Identity(rows, cols);
}

ComplexMatrix random_sign_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  ComplexMatrix x(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) x(i, j) = coin(rng) ? 1.0 : -1.0;
  }
  return x;
}

ComplexMatrix dft_matrix(Index n) {
  ComplexMatrix u(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((i * j) % n) / static_cast<double>(n);
      u(i, j) = std::polar(scale, angle);
    }
  }
  return u;
}

}  // namespace schurfact
