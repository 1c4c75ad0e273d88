#include "schurfact/cli/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <random>
#include <sstream>

#include "schurfact/cb_norms.hpp"
#include "schurfact/duality.hpp"
#include "schurfact/elem_norms.hpp"
#include "schurfact/error.hpp"
#include "schurfact/factorizations.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact::cli {
namespace {

using Clock = std::chrono::steady_clock;

// Worst check of a criterion, measured as residual / tolerance.
class Tracker {
 public:
  explicit Tracker(double scale) : scale_(scale) {}

  void check(double residual, double tolerance, const std::string& label) {
    const double tol = tolerance * scale_;
    if (!(residual <= tol)) {
      if (failures_++ == 0) first_failure_ = label;
      passed_ = false;
    }
    const double ratio = tolerance > 0.0 ? residual / tolerance : residual;
    if (!seen_ || ratio > worst_ratio_ || std::isnan(residual)) {
      seen_ = true;
      worst_ratio_ = ratio;
      worst_ = residual;
      tolerance_ = tol;
      worst_label_ = label;
    }
  }

  void error(const std::string& label, const std::exception& e) {
    if (failures_++ == 0) first_failure_ = label + ": " + e.what();
    passed_ = false;
  }

  void count() { ++cases_; }

  CriterionResult finish(int id, std::string name, Clock::time_point start) const {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.passed = passed_;
    r.worst = worst_;
    r.tolerance = tolerance_;
    r.cases = cases_;
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (failures_ > 0) {
      r.detail = std::to_string(failures_) + " failing check(s), first: " + first_failure_;
    } else if (seen_) {
      r.detail = "worst at " + worst_label_;
    }
    return r;
  }

  bool passed() const { return passed_; }

 private:
  double scale_;
  bool passed_ = true;
  bool seen_ = false;
  int failures_ = 0;
  int cases_ = 0;
  double worst_ratio_ = 0.0;
  double worst_ = 0.0;
  double tolerance_ = 0.0;
  std::string worst_label_;
  std::string first_failure_;
};

double rel(double value, double expected) { return std::abs(value - expected) / std::max(std::abs(expected), 1e-300); }

std::vector<int> pick(const SelftestOptions& o, std::vector<int> defaults, int lo, int hi) {
  if (o.sizes.empty()) return defaults;
  std::vector<int> out;
  for (int s : o.sizes) {
    if (s >= lo && s <= hi && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

ComplexMatrix diagonal_of(std::initializer_list<double> values) {
  RealVector v(static_cast<Index>(values.size()));
  Index k = 0;
  for (double value : values) v[k++] = value;
  return diag_matrix(v);
}

std::string shape(const ComplexMatrix& x) { return std::to_string(x.rows()) + "x" + std::to_string(x.cols()); }

std::vector<std::pair<std::string, ComplexMatrix>> golden_fixtures(const std::vector<int>& dft_orders) {
  std::vector<std::pair<std::string, ComplexMatrix>> out;
  for (int n : dft_orders) out.emplace_back("dft" + std::to_string(n), dft_matrix(n));
  out.emplace_back("diag(2,0.5,1)", diagonal_of({2.0, 0.5, 1.0}));
  ComplexMatrix d2 = ComplexMatrix::Zero(2, 2);
  d2(0, 0) = 3.0;
  d2(1, 1) = Complex(0.0, 1.0);
  out.emplace_back("diag(3,i)", d2);
  return out;
}

CriterionResult unitary_golden(const SelftestOptions& o) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  for (int n : pick(o, {2, 3, 4, 5, 6}, 2, 6)) {
    t.count();
    const ComplexMatrix u = dft_matrix(n);
    const double root = std::sqrt(static_cast<double>(n));
    const std::string tag = "dft" + std::to_string(n);
    try {
      t.check(rel(cbf_norm(u).value, root), 1e-5, tag + " cbF");
      t.check(rel(cbb_norm(u).value, n), 1e-5, tag + " cbB");
      t.check(rel(schur_norm(u).value, 1.0), 1e-5, tag + " S");
      t.check(rel(t_norm(u).value, root), 1e-5, tag + " T");
      if (n <= 3) {
        const FNormResult f = f_norm(u);
        t.check(f.certified ? rel(f.value, root) : 1.0, 1e-5, tag + " certified F");
      }
    } catch (const std::exception& e) {
      t.error(tag, e);
    }
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  t.check(elapsed <= 30.0 ? 0.0 : elapsed, 1e-300, "runtime under 30 s");
  return t.finish(1, "unitary golden values", start);
}

CriterionResult isometry_golden(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  for (int m : pick(o, {2, 3, 4, 5, 6, 7, 8}, 2, 8)) {
    for (int n = 1; n < m; ++n) {
      t.count();
      const ComplexMatrix x = random_isometry(m, n, rng);
      const double root = std::sqrt(static_cast<double>(n));
      const std::string tag = shape(x) + " isometry";
      try {
        t.check(rel(cbf_norm(x).value, root), 1e-5, tag + " cbF");
        t.check(rel(t_norm(x).value, root), 1e-5, tag + " T");
        const BilinearSchurFactorization f = bilinear_schur_factorization(x);
        t.check(operator_norm(f.t - x * x.adjoint()), 1e-4, tag + " T factor vs range projection");
      } catch (const std::exception& e) {
        t.error(tag, e);
      }
    }
  }
  return t.finish(2, "isometry golden values", start);
}

CriterionResult positive_cross_validation(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  const std::vector<int> dims = pick(o, {4}, 1, 64);
  NormOptions splitting;
  splitting.method = SolverMethod::Splitting;
  for (int k = 0; k < 50 && !dims.empty(); ++k) {
    t.count();
    const ComplexMatrix p = random_positive(dims[k % dims.size()], rng);
    const std::string tag = "positive #" + std::to_string(k);
    try {
      t.check(rel(cbb_norm(p, splitting).value, cbb_norm_positive_lp(p).value), 1e-6, tag);
    } catch (const std::exception& e) {
      t.error(tag, e);
    }
  }
  return t.finish(3, "positive cbB: LP vs block program", start);
}

CriterionResult gram_identity(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  const std::vector<int> dims = pick(o, {3}, 1, 64);
  for (int k = 0; k < 50 && !dims.empty(); ++k) {
    t.count();
    const int m = dims[k % dims.size()];
    const ComplexMatrix x = random_complex(m, m + 1, rng);
    const std::string tag = shape(x) + " #" + std::to_string(k);
    try {
      const double cbf = cbf_norm(x).value;
      t.check(rel(cbf * cbf, cbb_norm(x.adjoint() * x).value), 1e-6, tag);
    } catch (const std::exception& e) {
      t.error(tag, e);
    }
  }
  return t.finish(4, "cbF(X)^2 = cbB(X*X)", start);
}

template <typename Factorization>
void check_factorization(Tracker& t, const ComplexMatrix& x, const Factorization& f, double norm,
                         const std::string& tag) {
  const double scale = std::max(operator_norm(x), 1e-300);
  t.check(operator_norm(reconstruct(f) - x) / scale, 1e-6, tag + " reconstruction");
  t.check(rel(achieved_norm(f), norm), 1e-5, tag + " norm");
}

CriterionResult reconstruction_suite(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  const std::vector<int> dims = pick(o, {1, 2, 3, 4, 5, 6}, 1, 6);
  const std::size_t k = dims.size();
  for (std::size_t c = 0; c < 100 && k > 0; ++c) {
    t.count();
    const ComplexMatrix x = random_complex(dims[c % k], dims[(c / k + c) % k], rng);
    const ComplexMatrix h = hermitian_part(random_complex(x.rows(), x.rows(), rng));
    const std::string tag = shape(x) + " #" + std::to_string(c);
    try {
      const double s = schur_norm(x).value;
      check_factorization(t, x, cb_operator_factorization(x), cbf_norm(x).value, tag + " cb-op");
      check_factorization(t, x, cb_bilinear_factorization(x), cbb_norm(x).value, tag + " cb-bilinear");
      check_factorization(t, x, elementary_schur(x), s, tag + " elementary-schur");
      check_factorization(t, x, schur_factorization(x), s, tag + " schur");
      check_factorization(t, h, selfadjoint_schur(h), schur_norm(h).value, tag + " selfadjoint-schur");
      check_factorization(t, x, bilinear_schur_factorization(x), t_norm(x).value, tag + " bilinear-schur");
      const ComplexMatrix unit = x / s;
      const NormalizedFcgFactorization fcg = normalized_fcg(unit);
      t.check(operator_norm(reconstruct(fcg) - unit) / operator_norm(unit), 1e-6, tag + " fcg reconstruction");
      t.check(rel(operator_norm(fcg.c), 1.0), 1e-5, tag + " fcg norm");
    } catch (const std::exception& e) {
      t.error(tag, e);
    }
  }
  return t.finish(5, "reconstruction suite", start);
}

CriterionResult uniqueness_suite(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  const std::vector<int> dims = pick(o, {4}, 1, 64);
  std::uniform_int_distribution<std::uint64_t> seeds;
  for (int c = 0; c < 25 && !dims.empty(); ++c) {
    t.count();
    const int n = dims[c % dims.size()];
    const ComplexMatrix x = random_complex(n, n, rng);
    for (UniquenessKind kind : {UniquenessKind::CbF, UniquenessKind::CbB, UniquenessKind::BilinearSchur}) {
      const std::string tag = shape(x) + " #" + std::to_string(c) + " " + to_string(kind);
      try {
        const UniquenessVerdict v = verify_uniqueness(x, kind, 5, seeds(rng), {}, 1e-5 * o.tolerance_scale);
        t.check(v.consistent ? v.max_discrepancy : std::max(v.max_discrepancy, 1.0), 1e-5, tag);
      } catch (const std::exception& e) {
        t.error(tag, e);
      }
    }
  }
  return t.finish(6, "uniqueness of canonical factors", start);
}

CriterionResult non_uniqueness_fixture(const SelftestOptions& o) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 0) = 1.0;
  x(1, 1) = Complex(0.0, 0.25);
  ComplexMatrix w = ComplexMatrix::Zero(2, 2);
  w(0, 0) = 1.0;
  w(1, 1) = Complex(0.0, 1.0);
  const SchurFactorization first{1.0, diagonal_of({1.0, 0.5}), w, diagonal_of({1.0, 0.5})};
  const SchurFactorization second{1.0, ComplexMatrix::Identity(2, 2), w, diagonal_of({1.0, 0.25})};
  t.count();
  try {
    const double s = schur_norm(x).value;
    t.check(rel(s, 1.0), 1e-5, "Schur norm equals 1");
    int index = 0;
    for (const SchurFactorization& f : {first, second}) {
      const std::string tag = "factorization " + std::to_string(++index);
      t.check((reconstruct(f) - x).norm(), 1e-15, tag + " exact reconstruction");
      for (const InvariantCheck& c : check_invariants(x, f, 1.0, 1e-5)) {
        t.check(c.residual, c.tolerance, tag + " " + c.name);
      }
    }
    t.check(operator_norm(first.f - second.f) > 0.1 ? 0.0 : 1.0, 1e-300, "factorizations differ");
    const DeletionCondition d = schur_deletion_condition(x);
    t.check(d.columns_hold ? 1.0 : 0.0, 1e-300, "column deletion keeps the Schur norm");
    t.check(d.holds() ? 1.0 : 0.0, 1e-300, "detector reports the precondition failing");
  } catch (const std::exception& e) {
    t.error("diag(1, i/4)", e);
  }
  return t.finish(7, "non-uniqueness fixture diag(1, i/4)", start);
}

CriterionResult self_adjoint_suite(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  const std::vector<int> dims = pick(o, {5}, 1, 64);
  for (int c = 0; c < 25 && !dims.empty(); ++c) {
    t.count();
    const int n = dims[c % dims.size()];
    const ComplexMatrix h = random_hermitian(n, rng);
    const ComplexMatrix p = random_positive(n, rng);
    const std::string tag = "#" + std::to_string(c);
    try {
      const SelfAdjointSchurFactorization sa = selfadjoint_schur(h);
      for (const InvariantCheck& check : check_invariants(h, sa, schur_norm(h).value, 1e-5)) {
        t.check(check.residual, check.tolerance, tag + " selfadjoint-schur " + check.name);
      }
      for (const ComplexMatrix* x : {&h, &p}) {
        const CbBilinearFactorization f = cb_bilinear_factorization(*x);
        const double bnorm = std::max(operator_norm(f.b), 1e-300);
        const std::string which = x == &h ? " self-adjoint" : " positive";
        t.check((f.eta.entries() - f.xi.entries()).norm(), 1e-5, tag + which + " eta = xi");
        t.check(operator_norm(f.b - f.b.adjoint()) / bnorm, 1e-5, tag + which + " B = B*");
      }
      const CbBilinearFactorization fp = cb_bilinear_factorization(p);
      const double lowest = hermitian_eigen(hermitian_part(fp.b)).eigenvalues.minCoeff();
      t.check(std::max(0.0, -lowest) / std::max(operator_norm(fp.b), 1.0), 1e-6, tag + " B positive");
    } catch (const std::exception& e) {
      t.error(tag, e);
    }
  }
  return t.finish(8, "self-adjoint and positive constructions", start);
}

CriterionResult duality_suite(const SelftestOptions& o, std::mt19937_64& rng) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  const std::vector<int> dims = pick(o, {2, 3, 4}, 1, 64);
  std::uniform_int_distribution<std::size_t> choose(0, dims.empty() ? 0 : dims.size() - 1);
  for (int c = 0; c < 200 && !dims.empty(); ++c) {
    t.count();
    const Index m = dims[choose(rng)];
    const Index n = dims[choose(rng)];
    const ComplexMatrix x = random_complex(m, n, rng);
    // Every fourth pair is aligned with X to probe near-tight pairings.
    const ComplexMatrix y = c % 4 == 0 ? ComplexMatrix(x + 0.1 * random_complex(m, n, rng)) : random_complex(m, n, rng);
    const std::string tag = shape(x) + " pair #" + std::to_string(c);
    try {
      const double p = std::abs(pairing(x, y));
      t.check(std::max(0.0, p - cbb_norm(x).value * schur_norm(y).value), 1e-6, tag + " cbB/S");
      t.check(std::max(0.0, p - cbf_norm(x).value * t_norm(y).value), 1e-6, tag + " cbF/T");
    } catch (const std::exception& e) {
      t.error(tag, e);
    }
  }
  WitnessOptions wo;
  wo.seed = o.seed;
  for (const auto& [name, x] : golden_fixtures(pick(o, {2, 3, 4, 5, 6}, 2, 6))) {
    for (Duality d : {Duality::CbBvsS, Duality::CbFvsT, Duality::TvsCbF, Duality::SvsCbB}) {
      t.count();
      const std::string tag = name + " witness " + to_string(d);
      try {
        t.check(find_witness(x, d, wo).certified_gap, 1e-6, tag);
      } catch (const std::exception& e) {
        t.error(tag, e);
      }
    }
  }
  return t.finish(9, "duality inequalities and witnesses", start);
}

CriterionResult witness_formulas(const SelftestOptions& o) {
  const auto start = Clock::now();
  Tracker t(o.tolerance_scale);
  WitnessOptions wo;
  wo.seed = o.seed;
  for (const auto& [name, x] : golden_fixtures(pick(o, {2, 3, 4, 5, 6}, 2, 6))) {
    t.count();
    try {
      const CbOperatorFactorization op = cb_operator_factorization(x);
      const WitnessCertificate w_t = find_witness(x, Duality::CbFvsT, wo);
      t.check((right_weights_from_witness(x, w_t.y) - op.xi.entries().cwiseAbs2()).norm(), 1e-6,
              name + " cbF xi^2");

      const CbBilinearFactorization bl = cb_bilinear_factorization(x);
      const WitnessCertificate w_s = find_witness(x, Duality::CbBvsS, wo);
      t.check((right_weights_from_witness(x, w_s.y) - bl.xi.entries().cwiseAbs2()).norm(), 1e-6,
              name + " cbB xi^2");
      t.check((left_weights_from_witness(x, w_s.y) - bl.eta.entries().cwiseAbs2()).norm(), 1e-6,
              name + " cbB eta^2");

      const BilinearSchurFactorization bs = bilinear_schur_factorization(x);
      const WitnessCertificate w_c = find_witness(x, Duality::TvsCbF, wo);
      t.check(operator_norm(t_squared_from_witness(x, w_c.y, bs.norm) - bs.t * bs.t), 1e-6, name + " T^2");
    } catch (const std::exception& e) {
      t.error(name, e);
    }
  }
  return t.finish(10, "uniqueness formulas at the optimum", start);
}

}  // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& options, const CriterionCallback& on_result) {
  std::vector<CriterionResult> results;
  auto record = [&](CriterionResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  // Each randomized criterion draws from its own stream so subsets stay reproducible.
  auto stream = [&](int id) { return std::mt19937_64(options.seed * 1000003ULL + static_cast<std::uint64_t>(id)); };
  record(unitary_golden(options));
  {
    auto rng = stream(2);
    record(isometry_golden(options, rng));
  }
  {
    auto rng = stream(3);
    record(positive_cross_validation(options, rng));
  }
  {
    auto rng = stream(4);
    record(gram_identity(options, rng));
  }
  {
    auto rng = stream(5);
    record(reconstruction_suite(options, rng));
  }
  {
    auto rng = stream(6);
    record(uniqueness_suite(options, rng));
  }
  record(non_uniqueness_fixture(options));
  {
    auto rng = stream(8);
    record(self_adjoint_suite(options, rng));
  }
  {
    auto rng = stream(9);
    record(duality_suite(options, rng));
  }
  record(witness_formulas(options));
  return results;
}

std::string format_result_line(const CriterionResult& r) {
  char numbers[160];
  std::snprintf(numbers, sizeof(numbers), "worst=%.3e tol=%.1e cases=%d time=%.2fs", r.worst, r.tolerance, r.cases,
                r.seconds);
  std::ostringstream line;
  line << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << "  " << numbers;
  if (!r.passed && !r.detail.empty()) line << "  (" << r.detail << ")";
  return line.str();
}

}  // namespace schurfact::cli
