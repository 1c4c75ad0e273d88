#include "schurfact/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {
namespace {

double cost_of(const ComplexMatrix& block, const BlockCost& cost) {
  switch (cost.kind) {
    case BlockObjective::None:
      return 0.0;
    case BlockObjective::Trace:
      return cost.weight * block.diagonal().real().sum();
    case BlockObjective::MaxDiagonal:
      return cost.weight * block.diagonal().real().maxCoeff();
  }
  return 0.0;
}

// prox of (cost/ρ + slab rule) on one diagonal block
void prox_block(ComplexMatrix& block, const BlockConstraint& rule, const BlockCost& cost, double rho) {
  const Index k = block.rows();
  RealVector d = block.diagonal().real();
  const double tau = cost.weight / rho;
  switch (cost.kind) {
    case BlockObjective::None:
      break;
    case BlockObjective::Trace:
      d.array() -= tau;
      break;
    case BlockObjective::MaxDiagonal:
      if (tau > 0.0) d -= tau * project_simplex(d / tau);
      break;
  }
  for (Index i = 0; i < k; ++i) block(i, i) = d[i];
  if (rule.force_diagonal) {
    const ComplexMatrix diag = block.diagonal().asDiagonal();
    block = diag;
  }
  RealVector e = block.diagonal().real();
  switch (rule.rule) {
    case DiagonalRule::Free:
      break;
    case DiagonalRule::EntrywiseCap:
      e = e.cwiseMin(rule.bound);
      break;
    case DiagonalRule::TraceEqual:
      e.array() += (rule.bound - e.sum()) / static_cast<double>(k);
      break;
    case DiagonalRule::TraceCap:
      if (e.sum() > rule.bound) e.array() += (rule.bound - e.sum()) / static_cast<double>(k);
      break;
  }
  for (Index i = 0; i < k; ++i) block(i, i) = e[i];
}

ComplexMatrix prox_slab(const ComplexMatrix& v, const AffineSlab& slab, const BlockCost& upper,
                        const BlockCost& lower, double rho) {
  const Index m = slab.rows();
  const Index n = slab.cols();
  const ComplexMatrix h = hermitian_part(v);
  ComplexMatrix top = h.topLeftCorner(m, m);
  ComplexMatrix bottom = h.bottomRightCorner(n, n);
  prox_block(top, slab.upper, upper, rho);
  prox_block(bottom, slab.lower, lower, rho);
  return assemble_blocks(top, slab.offdiag, bottom);
}

class WarmPsdProjector {
 public:
  explicit WarmPsdProjector(Index n) : basis_(ComplexMatrix::Identity(n, n)) {}

  ComplexMatrix operator()(const ComplexMatrix& m) {
    const HermitianEigen e = hermitian_eigen(hermitian_part(m), basis_);
    basis_ = e.eigenvectors;
    const RealVector clipped = e.eigenvalues.cwiseMax(0.0);
    return hermitian_part(e.eigenvectors * clipped.asDiagonal() * e.eigenvectors.adjoint());
  }

 private:
  ComplexMatrix basis_;
};

void check_costs(const BlockConstraint& rule, const BlockCost& cost) {
  if (cost.kind == BlockObjective::MaxDiagonal && rule.rule != DiagonalRule::Free) {
    throw Error(ErrorCode::InvalidMatrix, "max-diagonal objective requires a free diagonal rule");
  }
  if (cost.weight < 0.0) throw Error(ErrorCode::InvalidMatrix, "objective weights must be nonnegative");
}

}  // namespace

RealVector project_simplex(const RealVector& v) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

double block_objective_value(const ComplexMatrix& point, const AffineSlab& slab, const BlockCost& upper,
                             const BlockCost& lower) {
  const Index m = slab.rows();
  const Index n = slab.cols();
  return cost_of(point.topLeftCorner(m, m), upper) + cost_of(point.bottomRightCorner(n, n), lower);
}

SplittingResult minimize_over_slab(const AffineSlab& slab, const BlockCost& upper, const BlockCost& lower,
                                   const SplittingOptions& options) {
  validate_matrix(slab.offdiag, "slab off-diagonal block");
  check_costs(slab.upper, upper);
  check_costs(slab.lower, lower);
  const Index m = slab.rows();
  const Index n = slab.cols();
  const Index dim = m + n;

  const double c = std::max(operator_norm(slab.offdiag), 1e-300);
  ComplexMatrix z = assemble_blocks(c * ComplexMatrix::Identity(m, m), slab.offdiag, c * ComplexMatrix::Identity(n, n));
  double rho = options.rho;
  if (options.restart_seed) {
    std::mt19937_64 rng(*options.restart_seed);
    const ComplexMatrix b = random_complex(dim, dim, rng);
    z += (c / static_cast<double>(dim)) * b * b.adjoint();
    std::uniform_real_distribution<double> spread(-1.0, 1.0);
    rho *= std::pow(2.0, spread(rng));
  }
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix x = z;
  WarmPsdProjector project(dim);

  SplittingResult result;
  for (int it = 1; it <= options.max_iter; ++it) {
    x = prox_slab(z - u, slab, upper, lower, rho);
    const ComplexMatrix z_prev = z;
    z = project(x + u);
    u += x - z;

    const double r = (x - z).norm();
    const double s = rho * (z - z_prev).norm();
    result.iterations = it;
    result.primal_residual = r;
    result.dual_residual = s;
    if (r <= options.tol && s <= options.tol) {
      result.converged = true;
      break;
    }
    if (options.adaptive_rho && it % 25 == 0) {
      if (r > 10.0 * s && rho < 1e6) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s > 10.0 * r && rho > 1e-6) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  result.slab_point = x;
  result.psd_point = z;
  result.multiplier = rho * u;
  result.objective = block_objective_value(x, slab, upper, lower);
  return result;
}

}  // namespace schurfact
