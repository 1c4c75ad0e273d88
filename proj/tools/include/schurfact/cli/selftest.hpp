#pragma once

// Golden-fixture suite: unitaries, isometries, positive and self-adjoint
// families, the diag(1, i/4) non-uniqueness fixture and dual witnesses.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace schurfact::cli {

struct SelftestOptions {
  std::uint64_t seed = 42;
  /// Dimensions to exercise; empty means the full default shapes.
  std::vector<int> sizes;
  /// Multiplies every tolerance. Test hook: a negative scale forces failures.
  double tolerance_scale = 1.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double worst = 0.0;      // worst observed residual, in the criterion's own units
  double tolerance = 0.0;
  int cases = 0;
  double seconds = 0.0;
  std::string detail;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs criteria 1 to 10 in order; the callback sees each result as it finishes.
std::vector<CriterionResult> run_selftest(const SelftestOptions& options, const CriterionCallback& on_result = {});

/// "PASS [3] name  worst=... tol=... cases=... time=...s".
std::string format_result_line(const CriterionResult& result);

}  // namespace schurfact::cli
