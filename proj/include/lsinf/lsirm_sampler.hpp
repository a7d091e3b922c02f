#pragma once

#include "lsinf/mcmc.hpp"
#include "lsinf/procrustes.hpp"
#include "lsinf/types.hpp"

#include <vector>

namespace lsinf {

/// Retained draws of one adapted-LSIRM chain with respondents fixed at zhat.
struct LsirmDraws {
  Eigen::MatrixXd beta;   // draws x p
  Eigen::MatrixXd theta;  // draws x n
  Eigen::VectorXd sigma2;
  Eigen::VectorXd delta;
  std::vector<LatentConfig> w;
  Eigen::VectorXd log_posterior;

  Acceptance accept_w;
  Acceptance accept_beta;
  Acceptance accept_theta;
  Acceptance accept_delta;
  LsirmSteps final_steps;

  /// Fixed respondent positions the chain was run with.
  LatentConfig zhat;
  /// Per-draw motion applied jointly to (zhat, w) by alignment; empty until aligned.
  std::vector<ProcrustesTransform> motions;
  bool aligned = false;

  std::size_t size() const { return w.size(); }
};

/// One draw of sigma^2 from Inv-Gamma(a + n/2, b + sum(theta^2)/2).
double gibbs_sigma2(const Eigen::VectorXd& theta, const Hyperparams& hp, Rng& rng);

/// Metropolis-within-Gibbs for (W, beta, theta, sigma^2, delta).
///
/// Per iteration, in order: every w_i, every beta_i, every theta_k (each a
/// Gaussian random walk with its own accept decision), a conjugate draw of
/// sigma^2, then a random walk on delta. Initial state: beta = theta = 0,
/// sigma^2 = 1, delta = 0, w from the N(0, I) prior.
LsirmDraws run_adapted_lsirm_chain(const ItemResponseData& resp, const LatentConfig& zhat,
                                   const Hyperparams& hp, const McmcConfig& cfg,
                                   const SamplerHooks& hooks = {});

/// Posterior means of every parameter (W averaged over the aligned draws).
AdaptedLsirmParams posterior_mean(const LsirmDraws& draws);

/// Estimated positive-response probabilities for every (respondent, item) cell.
Eigen::MatrixXd fit_statistic(const LatentConfig& zhat, const AdaptedLsirmParams& point);

}  // namespace lsinf
