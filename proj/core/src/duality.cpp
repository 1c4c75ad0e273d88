#include "schurfact/duality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "schurfact/error.hpp"
#include "schurfact/linalg.hpp"

namespace schurfact {
namespace {

// Off-diagonal block of the PSD dual variable of a block program.
ComplexMatrix dual_block(const BlockSolution& s, Index m, Index n) {
  return -s.multiplier.topRightCorner(m, n);
}

ComplexMatrix seed_witness(const ComplexMatrix& x, Duality duality, const NormOptions& options) {
  const Index m = x.rows();
  const Index n = x.cols();
  switch (duality) {
    case Duality::CbBvsS:
      return dual_block(solve_cbb_program(x, options), m, n);
    case Duality::SvsCbB:
      return dual_block(solve_schur_program(x, options), m, n);
    case Duality::TvsCbF:
      return dual_block(solve_t_program(x, options), m, n);
    case Duality::CbFvsT: {
      const ComplexMatrix gram = hermitian_part(x.adjoint() * x) / std::max(max_abs(x) * max_abs(x), 1e-300);
      return x * solve_diag_dominance(gram, options).correlation;
    }
  }
  return x;
}

std::string lowercase(const std::string& text) {
  std::string out;
  for (char ch : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return out;
}

}  // namespace

Complex pairing(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "pairing needs matrices of equal shape");
  }
  // Tr(Y*X) = Σ conj(Y_ij) X_ij
  return (y.conjugate().cwiseProduct(x)).sum();
}

const char* to_string(Ball ball) {
  switch (ball) {
    case Ball::CbF:
      return "cbF";
    case Ball::CbB:
      return "cbB";
    case Ball::S:
      return "S";
    case Ball::T:
      return "T";
  }
  return "?";
}

double polar_membership(const ComplexMatrix& y, Ball ball, const NormOptions& options) {
  switch (ball) {
    case Ball::CbF:
      return cbf_norm(y, options).value;
    case Ball::CbB:
      return cbb_norm(y, options).value;
    case Ball::S:
      return schur_norm(y, options).value;
    case Ball::T:
      return t_norm(y, options).value;
  }
  return 0.0;
}

const char* to_string(Duality duality) {
  switch (duality) {
    case Duality::CbBvsS:
      return "cbB_vs_S";
    case Duality::CbFvsT:
      return "cbF_vs_T";
    case Duality::TvsCbF:
      return "T_vs_cbF";
    case Duality::SvsCbB:
      return "S_vs_cbB";
  }
  return "?";
}

std::optional<Duality> parse_duality(const std::string& text) {
  const std::string t = lowercase(text);
  if (t == "cbb_vs_s") return Duality::CbBvsS;
  if (t == "cbf_vs_t") return Duality::CbFvsT;
  if (t == "t_vs_cbf") return Duality::TvsCbF;
  if (t == "s_vs_cbb") return Duality::SvsCbB;
  return std::nullopt;
}

NormKind target_kind(Duality duality) {
  switch (duality) {
    case Duality::CbBvsS:
      return NormKind::CbB;
    case Duality::CbFvsT:
      return NormKind::CbF;
    case Duality::TvsCbF:
      return NormKind::T;
    case Duality::SvsCbB:
      return NormKind::S;
  }
  return NormKind::S;
}

Ball witness_ball(Duality duality) {
  switch (duality) {
    case Duality::CbBvsS:
      return Ball::S;
    case Duality::CbFvsT:
      return Ball::T;
    case Duality::TvsCbF:
      return Ball::CbF;
    case Duality::SvsCbB:
      return Ball::CbB;
  }
  return Ball::S;
}

WitnessCertificate certify(const ComplexMatrix& x, const ComplexMatrix& y, Duality duality,
                           const NormOptions& options) {
  WitnessCertificate c;
  c.target_norm = compute_norm(target_kind(duality), x, options).value;
  const double dual = polar_membership(y, witness_ball(duality), options);
  if (dual <= 0.0) {
    c.y = ComplexMatrix::Zero(x.rows(), x.cols());
    c.certified_gap = c.target_norm;
    return c;
  }
  c.y = y / dual;
  c.dual_norm_bound = 1.0;
  c.pairing = pairing(x, c.y).real();
  c.certified_gap = std::abs(c.target_norm - c.pairing);
  return c;
}

WitnessCertificate find_witness(const ComplexMatrix& x, Duality duality, const WitnessOptions& options) {
  validate_matrix(x, "input matrix");
  if (is_zero(x)) throw Error(ErrorCode::ZeroMatrix, "no witness exists for the zero matrix");
  const Ball ball = witness_ball(duality);
  const double target = compute_norm(target_kind(duality), x, options.norm).value;

  auto evaluate = [&](const ComplexMatrix& y, const NormOptions& norm) -> std::pair<ComplexMatrix, double> {
    double dual = 0.0;
    try {
      dual = polar_membership(y, ball, norm);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IterationCap) throw;
      return {y, -1.0};
    }
    if (!(dual > 0.0)) return {y, -1.0};
    ComplexMatrix unit = y / dual;
    return {unit, pairing(x, unit).real()};
  };

  ComplexMatrix seed = seed_witness(x, duality, options.norm);
  if (pairing(x, seed).real() < 0.0) seed = -seed;
  auto [best, best_value] = evaluate(seed, options.norm);
  {
    auto [fallback, value] = evaluate(x, options.norm);
    if (value > best_value) {
      best = fallback;
      best_value = value;
    }
  }

  NormOptions ascent_norm = options.norm;
  ascent_norm.max_iter = std::min(ascent_norm.max_iter, 50000);
  std::mt19937_64 rng(options.seed);
  const ComplexMatrix direction = x / x.norm();
  ComplexMatrix current = best;
  double step = 0.5 * best.norm();
  const double settled = 1e-12 * std::max(1.0, target);
  for (int it = 0; it < options.max_iters && step > 1e-14 * best.norm() && target - best_value > settled; ++it) {
    const ComplexMatrix jitter = 1e-3 * random_complex(x.rows(), x.cols(), rng) / std::sqrt(static_cast<double>(x.size()));
    auto [candidate, value] = evaluate(current + step * (direction + jitter), ascent_norm);
    if (value > best_value) {
      best = candidate;
      best_value = value;
      current = candidate;
    } else {
      step *= 0.5;
    }
  }

  WitnessCertificate c;
  c.y = best;
  c.pairing = best_value;
  c.dual_norm_bound = 1.0;
  c.target_norm = target;
  c.certified_gap = std::abs(target - best_value);
  return c;
}

RealVector right_weights_from_witness(const ComplexMatrix& x, const ComplexMatrix& y) {
  const double p = pairing(x, y).real();
  return (y.adjoint() * x).diagonal().real() / p;
}

RealVector left_weights_from_witness(const ComplexMatrix& x, const ComplexMatrix& y) {
  const double p = pairing(x, y).real();
  return (y * x.adjoint()).diagonal().real() / p;
}

ComplexMatrix t_squared_from_witness(const ComplexMatrix& x, const ComplexMatrix& y, double t_norm_value) {
  const double p = pairing(x, y).real();
  return (t_norm_value * t_norm_value / p) * y * x.adjoint();
}

}  // namespace schurfact
