#include "schurfact/cb_norms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {
namespace {

constexpr double kZeroLineTol = 1e-14;

// X with its zero rows and columns removed.
struct Compressed {
  ComplexMatrix x;
  std::vector<Index> rows;
  std::vector<Index> cols;
};

Compressed compress(const ComplexMatrix& x) {
  const double tol = kZeroLineTol * max_abs(x);
  Compressed c;
  for (Index i = 0; i < x.rows(); ++i) {
    if (x.row(i).cwiseAbs().maxCoeff() > tol) c.rows.push_back(i);
  }
  for (Index j = 0; j < x.cols(); ++j) {
    if (x.col(j).cwiseAbs().maxCoeff() > tol) c.cols.push_back(j);
  }
  c.x = ComplexMatrix(static_cast<Index>(c.rows.size()), static_cast<Index>(c.cols.size()));
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    for (std::size_t j = 0; j < c.cols.size(); ++j) {
      c.x(static_cast<Index>(i), static_cast<Index>(j)) = x(c.rows[i], c.cols[j]);
    }
  }
  return c;
}

// Reinserts zero rows/columns into a compressed (m'+n')-block matrix.
ComplexMatrix expand_block(const ComplexMatrix& small, const Compressed& c, Index m, Index n) {
  std::vector<Index> map;
  for (Index i : c.rows) map.push_back(i);
  for (Index j : c.cols) map.push_back(m + j);
  ComplexMatrix out = ComplexMatrix::Zero(m + n, m + n);
  for (std::size_t a = 0; a < map.size(); ++a) {
    for (std::size_t b = 0; b < map.size(); ++b) {
      out(map[a], map[b]) = small(static_cast<Index>(a), static_cast<Index>(b));
    }
  }
  return out;
}

bool is_zero_matrix(const Compressed& c) { return c.rows.empty() || c.cols.empty(); }

SplittingOptions splitting_options(const NormOptions& options) {
  SplittingOptions s;
  s.tol = options.splitting_tol;
  s.max_iter = options.max_iter;
  s.restart_seed = options.restart_seed;
  return s;
}

void append_splitting(Diagnostics& d, const SplittingResult& r) {
  d.emplace_back("iterations", static_cast<double>(r.iterations));
  d.emplace_back("primal_residual", r.primal_residual);
  d.emplace_back("dual_residual", r.dual_residual);
}

enum class Program { Schur, Cbb, T };

AffineSlab program_slab(Program program, const ComplexMatrix& x) {
  AffineSlab slab{x, {}, {}};
  if (program == Program::Cbb) {
    slab.upper.force_diagonal = true;
    slab.lower.force_diagonal = true;
  } else if (program == Program::T) {
    slab.lower = {DiagonalRule::EntrywiseCap, 1.0, false};
  }
  return slab;
}

std::pair<BlockCost, BlockCost> program_costs(Program program) {
  switch (program) {
    case Program::Schur:
      return {{BlockObjective::MaxDiagonal, 0.5}, {BlockObjective::MaxDiagonal, 0.5}};
    case Program::Cbb:
      return {{BlockObjective::Trace, 0.5}, {BlockObjective::Trace, 0.5}};
    case Program::T:
      return {{BlockObjective::Trace, 1.0}, {BlockObjective::None, 0.0}};
  }
  return {};
}

BlockSolution solve_program(Program program, const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  const Index m = x.rows();
  const Index n = x.cols();
  const Compressed c = compress(x);
  BlockSolution out;
  if (is_zero_matrix(c)) {
    out.point = ComplexMatrix::Zero(m + n, m + n);
    out.multiplier = ComplexMatrix::Zero(m + n, m + n);
    return out;
  }
  const double scale = operator_norm(c.x);
  const ComplexMatrix unit = c.x / scale;
  const auto [upper, lower] = program_costs(program);
  const SplittingResult r = minimize_over_slab(program_slab(program, unit), upper, lower, splitting_options(options));
  if (!r.converged) throw Error(ErrorCode::IterationCap, "splitting solver hit its iteration cap");

  const Index mc = c.x.rows();
  const Index nc = c.x.cols();
  ComplexMatrix point = r.slab_point;
  if (program == Program::T) {
    point.topLeftCorner(mc, mc) *= scale * scale;
    point.topRightCorner(mc, nc) = c.x;
    point.bottomLeftCorner(nc, mc) = c.x.adjoint();
    out.value = scale * std::sqrt(std::max(r.objective, 0.0));
  } else {
    point *= scale;
    out.value = scale * r.objective;
  }
  out.point = expand_block(point, c, m, n);
  out.multiplier = expand_block(r.multiplier, c, m, n);
  append_splitting(out.residuals, r);
  out.residuals.emplace_back("scale", scale);
  return out;
}

// Bisection over Dykstra feasibility on X/‖X‖_∞.
double bisection_value(Program program, const ComplexMatrix& x, const NormOptions& options, Diagnostics& d) {
  const Compressed c = compress(x);
  if (is_zero_matrix(c)) return 0.0;
  const double scale = operator_norm(c.x);
  const ComplexMatrix unit = c.x / scale;
  DykstraOptions dy;
  dy.tol_feas = options.tol_feas;
  const Index m = unit.rows();
  const Index n = unit.cols();
  double lo = 0.0;
  double hi = 0.0;
  std::function<bool(double)> predicate;
  switch (program) {
    case Program::Schur:
      lo = max_abs(unit);
      hi = std::min(unit.rowwise().norm().maxCoeff(), unit.colwise().norm().maxCoeff());
      predicate = [&](double t) { return schur_feasible(unit, t, dy); };
      break;
    case Program::Cbb:
      lo = 1.0;
      hi = std::sqrt(static_cast<double>(m * n));
      predicate = [&](double t) { return cbb_feasible(unit, t, dy); };
      break;
    case Program::T:
      lo = 0.0;
      hi = unit.norm();
      predicate = [&](double t) { return t_feasible(unit, t, dy); };
      break;
  }
  // trivial factorizations sit on the boundary; a small widening keeps t_hi strictly feasible
  hi *= 1.0 + 1e-3;
  const double t = bisect_norm(predicate, lo, hi, options.tol_bisect);
  d.emplace_back("scale", scale);
  d.emplace_back("bracket_low", lo * scale);
  d.emplace_back("bracket_high", hi * scale);
  return scale * t;
}

NormReport block_norm(NormKind kind, Program program, const ComplexMatrix& x, const NormOptions& options) {
  NormReport report;
  report.kind = kind;
  if (options.method == SolverMethod::Bisection) {
    validate_matrix(x, "input matrix");
    report.method = "bisection-dykstra";
    report.value = bisection_value(program, x, options, report.residuals);
    return report;
  }
  const BlockSolution s = solve_program(program, x, options);
  report.method = "splitting";
  report.value = s.value;
  report.residuals = s.residuals;
  return report;
}

bool feasible(const AffineSlab& slab, const DykstraOptions& options) {
  return dykstra(slab, options).status != FeasibilityStatus::Infeasible;
}

CuttingPlaneOptions lp_options(const NormOptions& options, Index n) {
  CuttingPlaneOptions cp;
  cp.tol = options.lp_tol;
  if (options.restart_seed) {
    std::mt19937_64 rng(*options.restart_seed);
    const ComplexMatrix seeds = random_complex(n, n, rng);
    for (Index j = 0; j < n; ++j) cp.initial_directions.push_back(seeds.col(j));
  }
  return cp;
}

void check_psd(const ComplexMatrix& p) {
  validate_matrix(p, "positive matrix");
  const HermitianEigen e = hermitian_eigen(p);
  const double scale = e.eigenvalues.cwiseAbs().maxCoeff();
  if (e.eigenvalues.minCoeff() < -kTolPsd * scale) {
    throw Error(ErrorCode::NotPsd, "matrix is not positive semidefinite");
  }
}

}  // namespace

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::F:
      return "F";
    case NormKind::CbF:
      return "cbF";
    case NormKind::B:
      return "B";
    case NormKind::CbB:
      return "cbB";
    case NormKind::S:
      return "S";
    case NormKind::T:
      return "T";
  }
  return "?";
}

std::optional<NormKind> parse_norm_kind(const std::string& text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "f") return NormKind::F;
  if (lower == "cbf") return NormKind::CbF;
  if (lower == "b") return NormKind::B;
  if (lower == "cbb") return NormKind::CbB;
  if (lower == "s") return NormKind::S;
  if (lower == "t") return NormKind::T;
  return std::nullopt;
}

const char* to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Automatic:
      return "automatic";
    case SolverMethod::Splitting:
      return "splitting";
    case SolverMethod::CuttingPlane:
      return "cutting-plane";
    case SolverMethod::Bisection:
      return "bisection-dykstra";
  }
  return "?";
}

bool schur_feasible(const ComplexMatrix& x, double t, const DykstraOptions& options) {
  return feasible({x, {DiagonalRule::EntrywiseCap, t, false}, {DiagonalRule::EntrywiseCap, t, false}}, options);
}

bool cbb_feasible(const ComplexMatrix& x, double t, const DykstraOptions& options) {
  return feasible({x, {DiagonalRule::TraceEqual, t, true}, {DiagonalRule::TraceEqual, t, true}}, options);
}

bool t_feasible(const ComplexMatrix& x, double t, const DykstraOptions& options) {
  return feasible({x, {DiagonalRule::TraceCap, t * t, false}, {DiagonalRule::EntrywiseCap, 1.0, false}}, options);
}

BlockSolution solve_schur_program(const ComplexMatrix& x, const NormOptions& options) {
  return solve_program(Program::Schur, x, options);
}

BlockSolution solve_cbb_program(const ComplexMatrix& x, const NormOptions& options) {
  return solve_program(Program::Cbb, x, options);
}

BlockSolution solve_t_program(const ComplexMatrix& x, const NormOptions& options) {
  return solve_program(Program::T, x, options);
}

DiagonalDominanceSolution solve_diag_dominance(const ComplexMatrix& p, const NormOptions& options) {
  check_psd(p);
  const Index n = p.rows();
  DiagonalDominanceSolution out;
  const double scale = std::max(max_abs(p), 0.0);
  if (scale == 0.0) {
    out.gamma = WeightVector(RealVector::Zero(n));
    out.xi = WeightVector::uniform(n);
    out.correlation = ComplexMatrix::Zero(n, n);
    return out;
  }
  const CuttingPlaneResult cp = cutting_plane_diag_dominance(p / scale, lp_options(options, n));
  out.value = scale * cp.value;
  out.gamma = WeightVector(scale * cp.gamma.entries());
  out.xi = WeightVector((cp.gamma.entries() / cp.value).cwiseSqrt());
  out.correlation = cut_correlation(cp);
  out.residuals.emplace_back("rounds", static_cast<double>(cp.rounds));
  out.residuals.emplace_back("cuts", static_cast<double>(cp.cuts.size()));
  out.residuals.emplace_back("lower_bound", scale * cp.lower_bound);
  out.residuals.emplace_back("min_eigenvalue", scale * cp.min_eigenvalue);
  return out;
}

NormReport schur_norm(const ComplexMatrix& x, const NormOptions& options) {
  return block_norm(NormKind::S, Program::Schur, x, options);
}

NormReport t_norm(const ComplexMatrix& x, const NormOptions& options) {
  return block_norm(NormKind::T, Program::T, x, options);
}

NormReport cbb_norm(const ComplexMatrix& x, const NormOptions& options) {
  if (options.method == SolverMethod::Splitting || options.method == SolverMethod::Bisection) {
    return block_norm(NormKind::CbB, Program::Cbb, x, options);
  }
  if (options.method == SolverMethod::Automatic) {
    try {
      return block_norm(NormKind::CbB, Program::Cbb, x, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IterationCap) throw;
    }
  }
  validate_matrix(x, "input matrix");
  NormReport report;
  report.kind = NormKind::CbB;
  report.method = "cutting-plane-dilation";
  const Compressed c = compress(x);
  if (is_zero_matrix(c)) return report;
  const double scale = operator_norm(c.x);
  const Index m = c.x.rows();
  const Index n = c.x.cols();
  ComplexMatrix dilation = ComplexMatrix::Zero(m + n, m + n);
  dilation.topRightCorner(m, n) = c.x / scale;
  dilation.bottomLeftCorner(n, m) = c.x.adjoint() / scale;
  const CuttingPlaneResult cp = cutting_plane_hermitian(dilation, lp_options(options, m + n));
  report.value = 0.5 * scale * cp.value;
  report.residuals.emplace_back("rounds", static_cast<double>(cp.rounds));
  report.residuals.emplace_back("cuts", static_cast<double>(cp.cuts.size()));
  report.residuals.emplace_back("lower_bound", 0.5 * scale * cp.lower_bound);
  return report;
}

NormReport cbb_norm_positive_lp(const ComplexMatrix& p, const NormOptions& options) {
  const DiagonalDominanceSolution s = solve_diag_dominance(p, options);
  NormReport report;
  report.kind = NormKind::CbB;
  report.method = "cutting-plane";
  report.value = s.value;
  report.residuals = s.residuals;
  return report;
}

NormReport cbf_norm(const ComplexMatrix& x, const NormOptions& options) {
  validate_matrix(x, "input matrix");
  const double scale = operator_norm(x);
  NormReport report;
  report.kind = NormKind::CbF;
  if (scale == 0.0) {
    report.method = "cutting-plane";
    return report;
  }
  const ComplexMatrix unit = x / scale;
  const ComplexMatrix gram = hermitian_part(unit.adjoint() * unit);
  NormReport inner;
  if (options.method == SolverMethod::Automatic || options.method == SolverMethod::CuttingPlane) {
    inner = cbb_norm_positive_lp(gram, options);
  } else {
    inner = cbb_norm(gram, options);
  }
  report.method = inner.method;
  report.value = scale * std::sqrt(inner.value);
  report.residuals = std::move(inner.residuals);
  return report;
}

NormReport f_norm_report(const ComplexMatrix& x, const NormOptions& options) {
  const FNormResult r = f_norm(x, options.torus);
  NormReport report;
  report.kind = NormKind::F;
  report.value = r.value;
  report.method = r.certified ? "torus-grid" : "torus-multistart";
  report.residuals.emplace_back("grid_error_bound", r.grid_error_bound);
  return report;
}

NormReport b_norm_report(const ComplexMatrix& x, const NormOptions& options) {
  const BNormResult r = b_norm(x, options.torus);
  NormReport report;
  report.kind = NormKind::B;
  report.value = r.value;
  report.method = r.certified ? "torus-grid" : "torus-multistart";
  report.residuals.emplace_back("grid_error_bound", r.grid_error_bound);
  return report;
}

NormReport compute_norm(NormKind kind, const ComplexMatrix& x, const NormOptions& options) {
  switch (kind) {
    case NormKind::F:
      return f_norm_report(x, options);
    case NormKind::CbF:
      return cbf_norm(x, options);
    case NormKind::B:
      return b_norm_report(x, options);
    case NormKind::CbB:
      return cbb_norm(x, options);
    case NormKind::S:
      return schur_norm(x, options);
    case NormKind::T:
      return t_norm(x, options);
  }
  throw Error(ErrorCode::InvalidMatrix, "unknown norm kind");
}

GrothendieckRatios grothendieck_ratios(const ComplexMatrix& x, const NormOptions& options) {
  GrothendieckRatios out;
  const FNormResult f = f_norm(x, options.torus);
  const BNormResult b = b_norm(x, options.torus);
  out.certified = f.certified && b.certified;
  const double cbf = cbf_norm(x, options).value;
  const double cbb = cbb_norm(x, options).value;
  out.ratio_f = f.value > 0.0 ? cbf / f.value : 1.0;
  out.ratio_b = b.value > 0.0 ? cbb / b.value : 1.0;
  return out;
}

}  // namespace schurfact
