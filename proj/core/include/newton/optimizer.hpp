#pragma once

#include <cstdint>
#include <optional>

#include "newton/cubic_subproblem.hpp"
#include "newton/oracle.hpp"
#include "newton/sampling.hpp"
#include "newton/trace.hpp"

namespace newton {

struct OptimizerConfig {
  // Termination tolerances: stop once the gradient estimate is below eps_g
  // and the smallest-curvature estimate is certified above -eps_h.
  double eps_g = 1e-5;
  double eps_h = 1e-3;

  double eta = 0.1;    // acceptance threshold on the agreement ratio, (0,1]
  double gamma = 2.0;  // radius / regularizer update factor, > 1
  double delta0 = 1.0; // initial trust-region radius
  double sigma0 = 10.0;  // initial cubic regularizer
  double nu = 0.9;     // negative-curvature quality target, (0,1)

  /// Drop the gradient term from the model when its norm is below eps_g.
  bool zero_small_gradient = false;

  ArcSolveMode arc_mode = ArcSolveMode::lanczos;
  /// Keep sigma pinned to this value, never adapting it.
  std::optional<double> fixed_sigma;

  long long max_iterations = 1000;
  std::optional<long long> max_props;

  /// Sub-sampling policy; unset estimators are computed exactly. Requires a
  /// finite-sum oracle when any estimator samples.
  SampleConfig sampling;

  /// Seed for curvature-estimation start vectors.
  std::uint64_t seed = 42;

  /// Record per-iteration wall time. Off by default so traces from
  /// identical runs are byte-identical.
  bool measure_time = false;

  void validate() const;
};

enum class TerminationReason {
  optimality,      // gradient and curvature certificates both hold
  max_iterations,
  prop_budget,
  numerical,       // persistent degenerate models or radius collapse
};

const char* to_string(TerminationReason reason);

struct RunResult {
  Vector x;
  TerminationReason reason = TerminationReason::max_iterations;
  Trace trace;
  double final_loss = 0.0;
  long long total_props = 0;
};

/// Agreement between the actual decrease and the model decrease. Requires
/// a strictly negative model value.
double compute_rho(double f_old, double f_new, double model_value);

/// Trust-region outer loop: accepted steps grow the radius by gamma,
/// rejected ones shrink it.
RunResult run_tr(const ObjectiveOracle& oracle, const OptimizerConfig& config,
                 const Vector& x0);

/// Adaptive cubic regularization outer loop: accepted steps divide sigma by
/// gamma, rejected ones multiply it (unless fixed_sigma pins it).
RunResult run_arc(const ObjectiveOracle& oracle, const OptimizerConfig& config,
                  const Vector& x0);

}  // namespace newton
