#pragma once

#include <atomic>

#include "newton/common.hpp"

namespace newton {

/// Cost weights of one per-sample oracle call, in propagation units.
/// The defaults model reverse-mode cost ratios: a gradient costs two
/// function passes and a Hessian-vector product four.
struct PropWeights {
  long long function = 1;
  long long gradient = 2;
  long long hessian_vector = 4;
};

/// Global propagation meter shared by an oracle and any sampled views of
/// it. Counters are atomic so parallel per-sample evaluation stays
/// race-free; totals are monotone non-decreasing.
class PropLedger {
 public:
  explicit PropLedger(PropWeights weights = {}) : weights_(weights) {
    if (weights_.function <= 0 || weights_.gradient <= 0 ||
        weights_.hessian_vector <= 0) {
      throw UsageError("PropLedger: weights must be positive");
    }
  }

  PropLedger(const PropLedger& other)
      : weights_(other.weights_),
        function_(other.function_.load()),
        gradient_(other.gradient_.load()),
        hvp_(other.hvp_.load()) {}

  void charge_function(long long count = 1) { function_.fetch_add(count); }
  void charge_gradient(long long count = 1) { gradient_.fetch_add(count); }
  void charge_hvp(long long count = 1) { hvp_.fetch_add(count); }

  long long function_calls() const { return function_.load(); }
  long long gradient_calls() const { return gradient_.load(); }
  long long hvp_calls() const { return hvp_.load(); }

  /// Weighted total: w_f * #function + w_g * #gradient + w_h * #hvp.
  long long cumulative() const {
    return weights_.function * function_.load() +
           weights_.gradient * gradient_.load() +
           weights_.hessian_vector * hvp_.load();
  }

  const PropWeights& weights() const { return weights_; }

  void reset() {
    function_.store(0);
    gradient_.store(0);
    hvp_.store(0);
  }

 private:
  PropWeights weights_;
  std::atomic<long long> function_{0};
  std::atomic<long long> gradient_{0};
  std::atomic<long long> hvp_{0};
};

}  // namespace newton
