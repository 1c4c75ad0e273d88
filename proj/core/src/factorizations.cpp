#include "schurfact/factorizations.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {
namespace {

constexpr double kReconstructionTol = 1e-6;
constexpr double kFactorLpTol = 1e-13;
constexpr double kSelfAdjointMatchTol = 1e-6;

NormOptions factor_options(const NormOptions& options) {
  NormOptions o = options;
  o.lp_tol = std::min(o.lp_tol, kFactorLpTol);
  return o;
}

bool is_self_adjoint(const ComplexMatrix& x) {
  return x.rows() == x.cols() && (x - x.adjoint()).norm() <= kTolSym * x.norm();
}

bool is_positive(const ComplexMatrix& x) {
  if (!is_self_adjoint(x)) return false;
  const HermitianEigen e = hermitian_eigen(hermitian_part(x));
  const double scale = e.eigenvalues.cwiseAbs().maxCoeff();
  return e.eigenvalues.minCoeff() >= -kTolPsd * scale;
}

double relative(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigen(hermitian_part(m)).eigenvalues.minCoeff(); }

// Gram factor C (k × N) of a PSD block point with M ≈ C*C; eigenvalues at
// or below the PSD dust level are dropped.
ComplexMatrix gram_factor(const ComplexMatrix& point) {
  const HermitianEigen e = hermitian_eigen(hermitian_part(point));
  const double top = std::max(e.eigenvalues[0], 0.0);
  Index k = 0;
  while (k < e.eigenvalues.size() && e.eigenvalues[k] > kTolPsd * top) ++k;
  k = std::max<Index>(k, 1);
  ComplexMatrix c(k, point.cols());
  for (Index i = 0; i < k; ++i) {
    c.row(i) = std::sqrt(std::max(e.eigenvalues[i], 0.0)) * e.eigenvectors.col(i).adjoint();
  }
  return c;
}

// Square root with the PSD dust removed, for factors read off block points.
ComplexMatrix clean_sqrt(const ComplexMatrix& m) {
  const HermitianEigen e = hermitian_eigen(hermitian_part(m));
  const double top = std::max(e.eigenvalues[0], 0.0);
  RealVector root(e.eigenvalues.size());
  for (Index i = 0; i < root.size(); ++i) {
    root[i] = e.eigenvalues[i] > kTolPsd * top ? std::sqrt(e.eigenvalues[i]) : 0.0;
  }
  return hermitian_part(e.eigenvectors * root.asDiagonal() * e.eigenvectors.adjoint());
}

WeightVector unit_weights(const RealVector& squares) {
  const RealVector clipped = squares.cwiseMax(0.0);
  const double total = clipped.sum();
  if (total <= 0.0) return WeightVector::uniform(squares.size());
  return WeightVector((clipped / total).cwiseSqrt());
}

double discrepancy(const ComplexMatrix& a, const ComplexMatrix& b) {
  return relative((a - b).norm(), std::max(a.norm(), b.norm()));
}

double discrepancy(const WeightVector& a, const WeightVector& b) {
  return relative((a.entries() - b.entries()).norm(), std::max(a.norm(), b.norm()));
}

ComplexMatrix delete_column(const ComplexMatrix& x, Index j) {
  ComplexMatrix out(x.rows(), x.cols() - 1);
  out << x.leftCols(j), x.rightCols(x.cols() - j - 1);
  return out;
}

void push(InvariantReport& report, std::string name, double residual, double tolerance) {
  report.push_back({std::move(name), residual, tolerance});
}

void push_reconstruction(InvariantReport& report, const ComplexMatrix& x, const ComplexMatrix& product) {
  const double scale = operator_norm(x);
  push(report, "reconstruction", relative(operator_norm(product - x), scale), kReconstructionTol);
}

void push_norm(InvariantReport& report, double achieved, double norm, double tol) {
  if (norm < 0.0) return;
  push(report, "norm_match", relative(std::abs(achieved - norm), norm), tol);
}

void push_positive(InvariantReport& report, const char* name, const ComplexMatrix& m, double tol) {
  const double scale = std::max(operator_norm(m), 1.0);
  push(report, name, std::max(0.0, -min_eigenvalue(m)) / scale, tol);
}

}  // namespace

AlignedPair align_ranges(const ComplexMatrix& l, const ComplexMatrix& r) {
  if (l.rows() != r.rows()) throw Error(ErrorCode::ShapeMismatch, "L and R need the same number of rows");
  const ComplexMatrix q = range_projection(l);
  AlignedPair out;
  out.r = q * r;
  const ComplexMatrix q1 = range_projection(out.r);
  out.l = q1 * l;
  return out;
}

ElementarySchurFactorization elementary_schur(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  const Index m = x.rows();
  const Index n = x.cols();
  ElementarySchurFactorization out;
  if (is_zero(x)) {
    out.l = ComplexMatrix::Zero(1, m);
    out.r = ComplexMatrix::Zero(1, n);
    return out;
  }
  const BlockSolution sol = solve_schur_program(x, options);
  const ComplexMatrix c = gram_factor(sol.point);
  ComplexMatrix l = c.leftCols(m);
  ComplexMatrix r = c.rightCols(n);
  const double balance = std::sqrt(col_norm(r) / col_norm(l));
  l *= balance;
  r /= balance;
  const AlignedPair aligned = align_ranges(l, r);
  out.l = aligned.l;
  out.r = aligned.r;
  out.norm = col_norm(out.l) * col_norm(out.r);
  return out;
}

SchurFactorization schur_factorization(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  const Index m = x.rows();
  const Index n = x.cols();
  SchurFactorization out;
  if (is_zero(x)) {
    out.f = ComplexMatrix::Zero(m, m);
    out.w = ComplexMatrix::Zero(m, n);
    out.g = ComplexMatrix::Zero(n, n);
    return out;
  }
  if (is_positive(x)) {
    // X = s (s^{-1/2} X^{1/2}) P (s^{-1/2} X^{1/2})
    const ComplexMatrix h = hermitian_part(x);
    out.s = h.diagonal().real().maxCoeff();
    out.f = psd_sqrt(h) / std::sqrt(out.s);
    out.g = out.f;
    out.w = range_projection(h);
    return out;
  }
  const ElementarySchurFactorization e = elementary_schur(x, options);
  out.s = e.norm;
  const double root = std::sqrt(e.norm);
  const PolarDecomposition pl = schurfact::polar(e.l / root);
  const PolarDecomposition pr = schurfact::polar(e.r / root);
  out.f = pl.positive_part;
  out.w = pl.isometric_part.adjoint() * pr.isometric_part;
  out.g = pr.positive_part;
  return out;
}

SelfAdjointSchurFactorization selfadjoint_schur(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  if (!is_self_adjoint(x)) throw Error(ErrorCode::NotSelfAdjoint, "selfadjoint_schur needs X = X*");
  const Index n = x.rows();
  SelfAdjointSchurFactorization out;
  if (is_zero(x)) {
    out.g = ComplexMatrix::Zero(n, n);
    out.sign = ComplexMatrix::Zero(n, n);
    return out;
  }
  const ComplexMatrix h = hermitian_part(x);
  if (is_positive(h)) {
    out.s = h.diagonal().real().maxCoeff();
    out.g = psd_sqrt(h) / std::sqrt(out.s);
    out.sign = range_projection(h);
    return out;
  }
  const ElementarySchurFactorization e = elementary_schur(h, options);
  out.s = e.norm;
  const double root = std::sqrt(e.norm);
  const ComplexMatrix l = e.l / root;
  const ComplexMatrix r = e.r / root;
  const Index k = l.rows();

  ComplexMatrix stacked(2 * k, n);
  stacked << l, r;
  stacked /= std::sqrt(2.0);
  const PolarDecomposition ps = schurfact::polar(stacked);
  const ComplexMatrix& f = ps.positive_part;  // F² = (L*L + R*R)/2
  const ComplexMatrix a = ps.isometric_part.topRows(k);
  const ComplexMatrix b = ps.isometric_part.bottomRows(k);
  const ComplexMatrix t = hermitian_part(a.adjoint() * b + b.adjoint() * a);
  const PolarDecomposition pt = schurfact::polar(t);
  const ComplexMatrix s0 = hermitian_part(pt.isometric_part);
  const PolarDecomposition pv = schurfact::polar(psd_sqrt(pt.positive_part) * f);
  out.g = pv.positive_part;
  out.sign = hermitian_part(pv.isometric_part.adjoint() * s0 * pv.isometric_part);
  return out;
}

NormalizedFcgFactorization normalized_fcg(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  const ElementarySchurFactorization e = elementary_schur(x, options);
  if (std::abs(e.norm - 1.0) > kSelfAdjointMatchTol) {
    throw Error(ErrorCode::InvalidMatrix, "normalized F·C·G needs a Schur norm of 1; rescale the input");
  }
  const double root = std::sqrt(e.norm);
  const ComplexMatrix l = e.l / root;
  const ComplexMatrix r = e.r / root;
  const Index k = l.rows();
  ComplexMatrix lhat = ComplexMatrix::Zero(k + 2, l.cols());
  ComplexMatrix rhat = ComplexMatrix::Zero(k + 2, r.cols());
  lhat.topRows(k) = l;
  rhat.topRows(k) = r;
  for (Index j = 0; j < l.cols(); ++j) lhat(k, j) = std::sqrt(std::max(0.0, 1.0 - l.col(j).squaredNorm()));
  for (Index j = 0; j < r.cols(); ++j) rhat(k + 1, j) = std::sqrt(std::max(0.0, 1.0 - r.col(j).squaredNorm()));
  const PolarDecomposition pl = schurfact::polar(lhat);
  const PolarDecomposition pr = schurfact::polar(rhat);
  NormalizedFcgFactorization out;
  out.f = pl.positive_part;
  out.c = e.norm * pl.isometric_part.adjoint() * pr.isometric_part;
  out.g = pr.positive_part;
  return out;
}

CbOperatorFactorization cb_operator_factorization(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  CbOperatorFactorization out;
  if (is_zero(x)) {
    out.a = ComplexMatrix::Zero(x.rows(), x.cols());
    out.xi = WeightVector::uniform(x.cols());
    return out;
  }
  const DiagonalDominanceSolution s =
      solve_diag_dominance(hermitian_part(x.adjoint() * x), factor_options(options));
  out.xi = s.xi;
  out.a = x * diag_pseudo_inverse(s.xi);
  out.norm = std::sqrt(s.value);
  return out;
}

CbBilinearFactorization cb_bilinear_factorization(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  CbBilinearFactorization out;
  if (is_zero(x)) {
    out.eta = WeightVector::uniform(x.rows());
    out.xi = WeightVector::uniform(x.cols());
    out.b = ComplexMatrix::Zero(x.rows(), x.cols());
    return out;
  }
  if (is_positive(x)) {
    const ComplexMatrix h = hermitian_part(x);
    const DiagonalDominanceSolution s = solve_diag_dominance(h, factor_options(options));
    out.eta = s.xi;
    out.xi = s.xi;
    const ComplexMatrix inv = diag_pseudo_inverse(s.xi);
    out.b = hermitian_part(inv * h * inv);
    out.norm = s.value;
    return out;
  }
  const BlockSolution sol = solve_cbb_program(x, options);
  const Index m = x.rows();
  const Index n = x.cols();
  out.eta = unit_weights(sol.point.topLeftCorner(m, m).diagonal().real());
  out.xi = unit_weights(sol.point.bottomRightCorner(n, n).diagonal().real());
  out.b = diag_pseudo_inverse(out.eta) * x * diag_pseudo_inverse(out.xi);
  out.norm = sol.value;
  return out;
}

BilinearSchurFactorization bilinear_schur_factorization(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  const Index m = x.rows();
  const Index n = x.cols();
  BilinearSchurFactorization out;
  if (is_zero(x)) {
    out.t = ComplexMatrix::Zero(m, m);
    out.w = ComplexMatrix::Zero(m, n);
    out.g = ComplexMatrix::Zero(n, n);
    return out;
  }
  const BlockSolution sol = solve_t_program(x, options);
  out.t = clean_sqrt(sol.point.topLeftCorner(m, m));
  const PolarDecomposition p = schurfact::polar(pseudo_inverse(out.t) * x);
  out.w = p.isometric_part;
  out.g = p.positive_part;
  out.norm = sol.value;
  return out;
}

ComplexMatrix reconstruct(const CbOperatorFactorization& f) { return f.a * f.xi.diagonal(); }
ComplexMatrix reconstruct(const CbBilinearFactorization& f) { return f.eta.diagonal() * f.b * f.xi.diagonal(); }
ComplexMatrix reconstruct(const ElementarySchurFactorization& f) { return f.l.adjoint() * f.r; }
ComplexMatrix reconstruct(const SchurFactorization& f) { return f.s * f.f * f.w * f.g; }
ComplexMatrix reconstruct(const BilinearSchurFactorization& f) { return f.t * f.w * f.g; }
ComplexMatrix reconstruct(const SelfAdjointSchurFactorization& f) { return f.s * f.g * f.sign * f.g; }
ComplexMatrix reconstruct(const NormalizedFcgFactorization& f) { return f.f * f.c * f.g; }

double achieved_norm(const CbOperatorFactorization& f) { return operator_norm(f.a) * f.xi.norm(); }
double achieved_norm(const CbBilinearFactorization& f) { return f.eta.norm() * operator_norm(f.b) * f.xi.norm(); }
double achieved_norm(const ElementarySchurFactorization& f) { return col_norm(f.l) * col_norm(f.r); }

double achieved_norm(const SchurFactorization& f) {
  const double fd = f.f.colwise().norm().maxCoeff();
  const double gd = f.g.colwise().norm().maxCoeff();
  return f.s * fd * operator_norm(f.w) * gd;
}

double achieved_norm(const BilinearSchurFactorization& f) {
  return f.t.norm() * operator_norm(f.w) * f.g.colwise().norm().maxCoeff();
}

double achieved_norm(const SelfAdjointSchurFactorization& f) {
  const double gd = col_norm(f.g);
  return f.s * gd * gd * operator_norm(f.sign);
}

bool all_passed(const InvariantReport& report) {
  return std::all_of(report.begin(), report.end(), [](const InvariantCheck& c) { return c.passed(); });
}

InvariantReport check_invariants(const ComplexMatrix& x, const CbOperatorFactorization& f, double norm,
                                 double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push(report, "xi_unit", std::abs(f.xi.entries().squaredNorm() - 1.0), tol);
  push_norm(report, operator_norm(f.a), norm, tol);
  const double top = f.xi.entries().maxCoeff();
  double off_support = 0.0;
  for (Index j = 0; j < f.a.cols(); ++j) {
    if (f.xi[j] <= kRankTol * top) off_support = std::max(off_support, f.a.col(j).norm());
  }
  push(report, "support_dominated", relative(off_support, operator_norm(f.a)), tol);
  return report;
}

InvariantReport check_invariants(const ComplexMatrix& x, const CbBilinearFactorization& f, double norm,
                                 double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push(report, "eta_unit", std::abs(f.eta.entries().squaredNorm() - 1.0), tol);
  push(report, "xi_unit", std::abs(f.xi.entries().squaredNorm() - 1.0), tol);
  push_norm(report, operator_norm(f.b), norm, tol);
  const double bnorm = std::max(operator_norm(f.b), 1e-300);
  double off_support = 0.0;
  for (Index i = 0; i < f.b.rows(); ++i) {
    if (f.eta[i] <= kRankTol * f.eta.entries().maxCoeff()) off_support = std::max(off_support, f.b.row(i).norm());
  }
  for (Index j = 0; j < f.b.cols(); ++j) {
    if (f.xi[j] <= kRankTol * f.xi.entries().maxCoeff()) off_support = std::max(off_support, f.b.col(j).norm());
  }
  push(report, "support_dominated", off_support / bnorm, tol);
  if (is_self_adjoint(x)) {
    push(report, "eta_equals_xi", (f.eta.entries() - f.xi.entries()).norm(), tol);
    push(report, "b_self_adjoint", operator_norm(f.b - f.b.adjoint()) / bnorm, tol);
    if (is_positive(x)) push_positive(report, "b_positive", f.b, 1e-6);
  }
  return report;
}

InvariantReport check_invariants(const ComplexMatrix& x, const ElementarySchurFactorization& f, double norm,
                                 double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push_norm(report, achieved_norm(f), norm, tol);
  push(report, "equal_ranges", operator_norm(range_projection(f.l) - range_projection(f.r)), tol);
  return report;
}

InvariantReport check_invariants(const ComplexMatrix& x, const SchurFactorization& f, double norm, double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push_norm(report, f.s, norm, tol);
  push(report, "diag_f2_le_1", std::max(0.0, (f.f * f.f).diagonal().real().maxCoeff() - 1.0), tol);
  push(report, "diag_g2_le_1", std::max(0.0, (f.g * f.g).diagonal().real().maxCoeff() - 1.0), tol);
  push_positive(report, "f_positive", f.f, tol);
  push_positive(report, "g_positive", f.g, tol);
  push(report, "w_support_is_range_g", operator_norm(f.w.adjoint() * f.w - range_projection(f.g)), tol);
  push(report, "w_range_is_range_f", operator_norm(f.w * f.w.adjoint() - range_projection(f.f)), tol);
  return report;
}

InvariantReport check_invariants(const ComplexMatrix& x, const BilinearSchurFactorization& f, double norm,
                                 double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push_norm(report, f.t.norm(), norm, tol);
  push(report, "diag_g2_le_1", std::max(0.0, (f.g * f.g).diagonal().real().maxCoeff() - 1.0), tol);
  push_positive(report, "t_positive", f.t, tol);
  push_positive(report, "g_positive", f.g, tol);
  push(report, "w_support_is_range_g", operator_norm(f.w.adjoint() * f.w - range_projection(f.g)), tol);
  push(report, "w_range_is_range_t", operator_norm(f.w * f.w.adjoint() - range_projection(f.t)), tol);
  return report;
}

InvariantReport check_invariants(const ComplexMatrix& x, const SelfAdjointSchurFactorization& f, double norm,
                                 double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push_norm(report, f.s, norm, tol);
  push(report, "g_col_norm_le_1", std::max(0.0, col_norm(f.g) - 1.0), tol);
  push_positive(report, "g_positive", f.g, tol);
  push(report, "s_self_adjoint", operator_norm(f.sign - f.sign.adjoint()), tol);
  push(report, "s_squared_is_support_g", operator_norm(f.sign * f.sign - support_projection(f.g)), tol);
  return report;
}

InvariantReport check_invariants(const ComplexMatrix& x, const NormalizedFcgFactorization& f, double tol) {
  InvariantReport report;
  push_reconstruction(report, x, reconstruct(f));
  push(report, "diag_f2_is_1", ((f.f * f.f).diagonal().real().array() - 1.0).abs().maxCoeff(), tol);
  push(report, "diag_g2_is_1", ((f.g * f.g).diagonal().real().array() - 1.0).abs().maxCoeff(), tol);
  push(report, "c_contraction", std::max(0.0, operator_norm(f.c) - 1.0), tol);
  push_positive(report, "f_positive", f.f, tol);
  push_positive(report, "g_positive", f.g, tol);
  return report;
}

const char* to_string(UniquenessKind kind) {
  switch (kind) {
    case UniquenessKind::CbF:
      return "cbF";
    case UniquenessKind::CbB:
      return "cbB";
    case UniquenessKind::BilinearSchur:
      return "bilinear-schur";
    case UniquenessKind::Schur:
      return "schur";
  }
  return "?";
}

std::optional<UniquenessKind> parse_uniqueness_kind(const std::string& text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "cbf") return UniquenessKind::CbF;
  if (lower == "cbb") return UniquenessKind::CbB;
  if (lower == "bilinear-schur" || lower == "bilinearschur") return UniquenessKind::BilinearSchur;
  if (lower == "schur") return UniquenessKind::Schur;
  return std::nullopt;
}

DeletionCondition schur_deletion_condition(const ComplexMatrix& x, const NormOptions& options, double margin) {
  validate_matrix(x, "input matrix");
  DeletionCondition out;
  out.schur_norm = schur_norm(x, options).value;
  const double limit = out.schur_norm * (1.0 - margin);
  out.columns_hold = true;
  for (Index j = 0; j < x.cols(); ++j) {
    const double v = x.cols() > 1 ? schur_norm(delete_column(x, j), options).value : 0.0;
    out.column_deleted_norms.push_back(v);
    if (!(v < limit)) out.columns_hold = false;
  }
  out.rows_hold = true;
  const ComplexMatrix xt = x.transpose();
  for (Index i = 0; i < x.rows(); ++i) {
    const double v = x.rows() > 1 ? schur_norm(delete_column(xt, i), options).value : 0.0;
    out.row_deleted_norms.push_back(v);
    if (!(v < limit)) out.rows_hold = false;
  }
  return out;
}

std::string UniquenessVerdict::summary() const {
  if (kind == UniquenessKind::Schur && deletion && !deletion->holds()) {
    return "precondition-fails, non-uniqueness allowed";
  }
  return consistent ? "consistent" : "inconsistent";
}

UniquenessVerdict verify_uniqueness(const ComplexMatrix& x, UniquenessKind kind, int restarts, std::uint64_t seed,
                                    const NormOptions& options, double tol) {
  validate_matrix(x, "input matrix");
  if (restarts < 2) throw Error(ErrorCode::InvalidMatrix, "uniqueness check needs at least two restarts");
  UniquenessVerdict verdict;
  verdict.kind = kind;
  verdict.restarts = restarts;

  std::vector<std::vector<ComplexMatrix>> matrices;
  std::vector<std::vector<WeightVector>> weights;
  for (int r = 0; r < restarts; ++r) {
    NormOptions o = options;
    o.restart_seed = seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL;
    switch (kind) {
      case UniquenessKind::CbF: {
        const CbOperatorFactorization f = cb_operator_factorization(x, o);
        matrices.push_back({f.a});
        weights.push_back({f.xi});
        break;
      }
      case UniquenessKind::CbB: {
        const CbBilinearFactorization f = cb_bilinear_factorization(x, o);
        matrices.push_back({f.b});
        weights.push_back({f.eta, f.xi});
        break;
      }
      case UniquenessKind::BilinearSchur: {
        const BilinearSchurFactorization f = bilinear_schur_factorization(x, o);
        matrices.push_back({f.t, f.w, f.g});
        weights.emplace_back();
        break;
      }
      case UniquenessKind::Schur: {
        const SchurFactorization f = schur_factorization(x, o);
        matrices.push_back({f.f, f.w, f.g});
        weights.emplace_back();
        break;
      }
    }
  }
  for (int r = 1; r < restarts; ++r) {
    for (std::size_t k = 0; k < matrices[0].size(); ++k) {
      verdict.max_discrepancy = std::max(verdict.max_discrepancy, discrepancy(matrices[0][k], matrices[r][k]));
    }
    for (std::size_t k = 0; k < weights[0].size(); ++k) {
      verdict.max_discrepancy = std::max(verdict.max_discrepancy, discrepancy(weights[0][k], weights[r][k]));
    }
  }
  verdict.consistent = verdict.max_discrepancy <= tol;
  if (kind == UniquenessKind::Schur) verdict.deletion = schur_deletion_condition(x, options);
  return verdict;
}

}  // namespace schurfact
