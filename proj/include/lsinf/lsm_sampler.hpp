#pragma once

#include "lsinf/mcmc.hpp"
#include "lsinf/types.hpp"

#include <vector>

namespace lsinf {

/// Retained draws of one network-model chain.
struct LsmDraws {
  Eigen::VectorXd alpha;
  Eigen::VectorXd gamma;
  std::vector<LatentConfig> z;
  Eigen::VectorXd log_posterior;

  Acceptance accept_z;
  Acceptance accept_alpha;
  Acceptance accept_gamma;
  LsmSteps final_steps;

  /// Set once the z draws have been Procrustes-matched to a common reference.
  bool aligned = false;

  std::size_t size() const { return z.size(); }
};

/// Random-walk Metropolis-Hastings for (z_1..z_n, alpha, log gamma).
///
/// Each iteration proposes every z_k in index order with its own accept
/// decision, then alpha, then log gamma. Step sizes adapt in batches during
/// burn-in and are frozen afterwards. Initial state: alpha = 0, gamma = 1,
/// z drawn from the N(0, I) prior. Results depend only on the inputs and
/// `cfg.seed`.
LsmDraws run_lsm_chain(const NetworkData& net, const Hyperparams& hp, const McmcConfig& cfg,
                       const SamplerHooks& hooks = {});

/// Element-wise mean of the z draws. With `aligned` set, the draws must
/// already be Procrustes-matched (throws std::logic_error otherwise).
LatentConfig point_estimate_z(const LsmDraws& draws, bool aligned = true);

/// Element-wise mean of a non-empty list of configurations.
LatentConfig mean_configuration(const std::vector<LatentConfig>& configs);

}  // namespace lsinf
