#include "lsinf/mcmc.hpp"

#include "lsinf/types.hpp"

#include <algorithm>

namespace lsinf {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return Rng(seq);
}

void McmcConfig::validate() const {
  if (thin < 1) throw InputError("thin must be at least 1");
  if (burn_in >= total_iters) throw InputError("burn-in must be smaller than total iterations");
  if (retained() == 0) throw InputError("configuration retains no draws");
  const bool steps_ok = lsm.z > 0 && lsm.alpha > 0 && lsm.log_gamma > 0 && lsirm.w > 0 &&
                        lsirm.beta > 0 && lsirm.theta > 0 && lsirm.delta > 0;
  if (!steps_ok) throw InputError("step sizes must be positive");
}

double tune_step_size(double step, double acceptance, double kappa) {
  if (acceptance > kTargetAcceptHigh) return step * std::exp(kappa);
  if (acceptance < kTargetAcceptLow) return step * std::exp(-kappa);
  return step;
}

void AdaptiveStep::end_iteration(std::size_t iter, bool enabled) {
  if ((iter + 1) % kBatchLength != 0) return;
  if (enabled && batch_.proposed > 0) {
    ++batches_;
    const double kappa = std::min(0.5, 1.0 / std::sqrt(static_cast<double>(batches_)));
    step_ = tune_step_size(step_, batch_.rate(), kappa);
  }
  batch_ = Acceptance{};
}

}  // namespace lsinf
