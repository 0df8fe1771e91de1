#pragma once

#include <vector>

#include "newton/common.hpp"

namespace newton {

/// How a sub-problem solve exited.
enum class StepStatus {
  interior,                 // converged strictly inside the feasible region
  boundary,                 // truncated at the trust-region boundary
  negative_curvature_exit,  // CG met non-positive curvature, ran to the boundary
  eigen_step,               // step along an approximate negative-curvature direction
  cauchy_fallback,          // closed-form step along the negative gradient
};

const char* to_string(StepStatus status);

/// One outer-iteration log row.
struct TraceRecord {
  long long iteration = 0;
  long long props = 0;  // cumulative propagation count after this iteration
  double loss = 0.0;    // F at the iterate this iteration started from
  double grad_norm = 0.0;
  double radius_or_sigma = 0.0;  // trust-region radius or cubic regularizer used
  double rho = 0.0;              // agreement ratio; NaN when no step was tried
  bool success = false;
  double step_norm = 0.0;
  StepStatus status = StepStatus::interior;
  int inner_iterations = 0;
  double lambda_hat = 0.0;  // smallest-curvature estimate; NaN when not computed
  double wall_ms = 0.0;     // 0 unless timing was enabled for the run
};

using Trace = std::vector<TraceRecord>;

}  // namespace newton
