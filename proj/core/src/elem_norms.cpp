#include "schurfact/elem_norms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRefineTol = 1e-12;

ComplexVector phase_vector(const ComplexVector& v) {
  ComplexVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    out[i] = mag > 0.0 ? v[i] / mag : Complex(1.0, 0.0);
  }
  return out;
}

bool is_real(const ComplexMatrix& x) { return x.imag().cwiseAbs().maxCoeff() == 0.0; }

// Odometer over (n-1) free phases on a uniform grid; first coordinate pinned to 1.
template <typename Visit>
void sweep_grid(Index n, int resolution, Visit&& visit) {
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  ComplexVector a = ComplexVector::Ones(n);
  const double h = kTwoPi / resolution;
  while (true) {
    visit(a);
    Index k = 1;
    while (k < n) {
      auto& d = digits[static_cast<std::size_t>(k)];
      if (++d < resolution) {
        a[k] = std::polar(1.0, h * d);
        break;
      }
      d = 0;
      a[k] = 1.0;
      ++k;
    }
    if (k >= n) return;
  }
}

// Visits every ±1 vector with first entry +1.
template <typename Visit>
void sweep_signs(Index n, Visit&& visit) {
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  ComplexVector s(n);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    s[0] = 1.0;
    for (Index k = 1; k < n; ++k) s[k] = ((mask >> (k - 1)) & 1U) ? -1.0 : 1.0;
    visit(s);
  }
}

double grid_step_error(Index free_coordinates, int resolution) {
  const double h = kTwoPi / resolution;
  return std::sqrt(static_cast<double>(free_coordinates)) * 2.0 * std::sin(h / 4.0);
}

ComplexVector random_torus(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  ComplexVector a(n);
  for (Index i = 0; i < n; ++i) a[i] = std::polar(1.0, phase(rng));
  return a;
}

// a ← phase(X*X a) until the value stalls.
double refine_f(const ComplexMatrix& x, ComplexVector& a, int iters) {
  double value = (x * a).norm();
  for (int it = 0; it < iters; ++it) {
    ComplexVector next = phase_vector(x.adjoint() * (x * a));
    const double next_value = (x * next).norm();
    const double change = (next - a).norm();
    if (next_value >= value) {
      a = std::move(next);
      value = next_value;
    }
    if (change < kRefineTol) break;
  }
  return value;
}

// Alternating ascent for |aᵀ X b|; the optimal a for fixed b is conj phase(Xb).
double refine_b(const ComplexMatrix& x, ComplexVector& b, int iters) {
  double value = (x * b).cwiseAbs().sum();
  for (int it = 0; it < iters; ++it) {
    const ComplexVector a = phase_vector(x * b).conjugate();
    ComplexVector next = phase_vector(x.transpose() * a).conjugate();
    const double next_value = (x * next).cwiseAbs().sum();
    const double change = (next - b).norm();
    if (next_value >= value) {
      b = std::move(next);
      value = next_value;
    }
    if (change < kRefineTol) break;
  }
  return value;
}

}  // namespace

double op_norm(const ComplexMatrix& x) { return operator_norm(x); }

double hs_norm(const ComplexMatrix& x) { return x.norm(); }

double col_norm(const ComplexMatrix& x) {
  if (x.cols() == 0) return 0.0;
  return x.colwise().norm().maxCoeff();
}

std::size_t certified_grid_points(Index free_coordinates, int grid_resolution) {
  std::size_t points = 1;
  for (Index k = 0; k < free_coordinates; ++k) {
    if (points > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(grid_resolution)) {
      return std::numeric_limits<std::size_t>::max();
    }
    points *= static_cast<std::size_t>(grid_resolution);
  }
  return points;
}

FNormResult f_norm(const ComplexMatrix& x, const TorusSearchOptions& options) {
  validate_matrix(x, "f_norm input");
  const Index n = x.cols();
  FNormResult result;
  ComplexVector best = ComplexVector::Ones(n);
  double best_value = (x * best).norm();
  auto consider = [&](const ComplexVector& a) {
    const double v = (x * a).norm();
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  };

  if (options.mode == SearchMode::Certified) {
    if (certified_grid_points(n - 1, options.grid_resolution) > options.grid_cap) {
      throw Error(ErrorCode::GridTooLarge, "phase grid for the F-norm exceeds the configured cap");
    }
    sweep_grid(n, options.grid_resolution, consider);
    result.grid_error_bound = op_norm(x) * grid_step_error(n - 1, options.grid_resolution);
    result.certified = true;
  } else {
    std::mt19937_64 rng(options.seed);
    for (int s = 0; s < options.multistarts; ++s) {
      ComplexVector a = random_torus(n, rng);
      refine_f(x, a, options.refinement_iters);
      consider(a);
    }
  }
  if (is_real(x) && n <= 20) sweep_signs(n, consider);

  best_value = refine_f(x, best, options.refinement_iters);
  ComplexVector pinned = best * std::conj(best[0]);
  result.value = best_value;
  result.maximizer = TorusPoint::phases_of(pinned);
  return result;
}

BNormResult b_norm(const ComplexMatrix& x, const TorusSearchOptions& options) {
  validate_matrix(x, "b_norm input");
  // |aᵀXb| = |bᵀXᵀa|: search over the shorter phase vector
  const bool transposed = x.rows() < x.cols();
  const ComplexMatrix y = transposed ? ComplexMatrix(x.transpose()) : x;
  const Index n = y.cols();

  BNormResult result;
  ComplexVector best = ComplexVector::Ones(n);
  double best_value = (y * best).cwiseAbs().sum();
  auto consider = [&](const ComplexVector& b) {
    const double v = (y * b).cwiseAbs().sum();
    if (v > best_value) {
      best_value = v;
      best = b;
    }
  };

  if (options.mode == SearchMode::Certified) {
    if (certified_grid_points(n - 1, options.grid_resolution) > options.grid_cap) {
      throw Error(ErrorCode::GridTooLarge, "phase grid for the B-norm exceeds the configured cap");
    }
    sweep_grid(n, options.grid_resolution, consider);
    result.grid_error_bound = std::sqrt(static_cast<double>(y.rows())) * op_norm(y) *
                              grid_step_error(n - 1, options.grid_resolution);
    result.certified = true;
  } else {
    std::mt19937_64 rng(options.seed);
    for (int s = 0; s < options.multistarts; ++s) {
      ComplexVector b = random_torus(n, rng);
      refine_b(y, b, options.refinement_iters);
      consider(b);
    }
  }
  if (is_real(y) && n <= 20) sweep_signs(n, consider);

  best_value = refine_b(y, best, options.refinement_iters);
  const ComplexVector a = phase_vector(y * best).conjugate();
  result.value = best_value;
  const TorusPoint row = TorusPoint::phases_of(a);
  const TorusPoint col = TorusPoint::phases_of(best);
  result.row_phases = transposed ? col : row;
  result.col_phases = transposed ? row : col;
  return result;
}

}  // namespace schurfact
