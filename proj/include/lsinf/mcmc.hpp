#pragma once

// Shared Metropolis-Hastings machinery: run configuration, random streams,
// acceptance bookkeeping and burn-in step-size adaptation.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace lsinf {

using Rng = std::mt19937_64;

/// Independent, reproducible generator for sub-stream `stream` of `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

struct LsmSteps {
  double z = 0.15;
  double alpha = 0.05;
  double log_gamma = 0.02;
};

struct LsirmSteps {
  double w = 0.3;
  double beta = 0.3;
  double theta = 0.8;
  double delta = 0.05;
};

struct McmcConfig {
  std::size_t total_iters = 30000;
  std::size_t burn_in = 5000;
  std::size_t thin = 5;
  std::uint64_t seed = 1;
  bool adapt = true;
  LsmSteps lsm;
  LsirmSteps lsirm;

  /// Throws InputError when the schedule or a step size is invalid.
  void validate() const;

  /// Number of draws kept: floor((total - burn) / thin).
  std::size_t retained() const { return (total_iters - burn_in) / thin; }

  /// True when iteration `t` (0-based) is stored.
  bool keeps(std::size_t t) const { return t >= burn_in && (t - burn_in + 1) % thin == 0; }
};

struct Acceptance {
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  void record(bool ok) {
    ++proposed;
    accepted += ok ? 1 : 0;
  }
  double rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

/// Metropolis-Hastings decision for a symmetric proposal.
inline bool mh_accept(double log_ratio, Rng& rng) {
  if (log_ratio >= 0.0) return true;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return std::log(unif(rng)) < log_ratio;
}

inline constexpr double kTargetAcceptLow = 0.2;
inline constexpr double kTargetAcceptHigh = 0.5;

/// One adaptation step: widen the proposal when acceptance is above the
/// target band, shrink it when below, leave it alone inside.
double tune_step_size(double step, double acceptance, double kappa);

/// Batch-wise step adaptation for one proposal block during burn-in.
/// The adaptation gain decays like 1/sqrt(batch) and stops at burn-in end.
class AdaptiveStep {
 public:
  static constexpr std::size_t kBatchLength = 50;

  explicit AdaptiveStep(double step) : step_(step) {}

  double step() const { return step_; }
  const Acceptance& total() const { return total_; }

  void record(bool ok, bool counting) {
    batch_.record(ok);
    if (counting) total_.record(ok);
  }

  /// Called once per iteration; adapts at batch boundaries while enabled.
  void end_iteration(std::size_t iter, bool enabled);

 private:
  double step_;
  Acceptance batch_;
  Acceptance total_;
  std::size_t batches_ = 0;
};

/// Test hooks. Production runs leave these at their defaults.
struct SamplerHooks {
  /// Replace the data likelihood by a constant so chains target the prior.
  bool flat_likelihood = false;
  /// Hold delta at a constant instead of sampling it.
  bool fix_delta = false;
  double fixed_delta = 0.0;
};

}  // namespace lsinf
