#pragma once

#include <cstddef>
#include <cstdint>

#include "schurfact/matrix.hpp"

namespace schurfact {

double op_norm(const ComplexMatrix& x);
double hs_norm(const ComplexMatrix& x);
/// Largest Euclidean column length, ‖X‖_c.
double col_norm(const ComplexMatrix& x);

enum class SearchMode {
  Certified,  // exhaustive phase grid on the small side, then refinement
  Heuristic,  // seeded multistart alternating ascent
};

struct TorusSearchOptions {
  SearchMode mode = SearchMode::Certified;
  int grid_resolution = 64;
  int refinement_iters = 500;
  int multistarts = 16;
  std::uint64_t seed = 0;
  std::size_t grid_cap = std::size_t{1} << 22;
};

struct FNormResult {
  double value = 0.0;
  TorusPoint maximizer;
  /// In certified mode the true norm lies in [value, value + grid_error_bound].
  double grid_error_bound = 0.0;
  bool certified = false;
};

struct BNormResult {
  double value = 0.0;
  TorusPoint row_phases;
  TorusPoint col_phases;
  double grid_error_bound = 0.0;
  bool certified = false;
};

/// ‖X‖_F = sup ‖Xa‖₂ over unimodular a. Certified mode throws GridTooLarge
/// when the phase grid exceeds options.grid_cap points.
FNormResult f_norm(const ComplexMatrix& x, const TorusSearchOptions& options = {});

/// ‖X‖_B = sup |Σ X_ij a_i b_j| over unimodular a, b.
BNormResult b_norm(const ComplexMatrix& x, const TorusSearchOptions& options = {});

/// Grid size a certified search on x would need (points).
std::size_t certified_grid_points(Index free_coordinates, int grid_resolution);

}  // namespace schurfact
