#pragma once

// Procrustes post-processing of retained latent draws.

#include "lsinf/lsirm_sampler.hpp"
#include "lsinf/lsm_sampler.hpp"
#include "lsinf/procrustes.hpp"

#include <vector>

namespace lsinf {

enum class ReferenceRule {
  max_log_posterior,  // retained draw with the highest log-posterior
  first_draw,
};

/// Index of the reference draw under `rule`.
std::size_t reference_index(const Eigen::VectorXd& log_posterior, ReferenceRule rule);

/// Aligns every configuration in place to `reference`; returns the motions used.
std::vector<ProcrustesTransform> align_draw_sequence(std::vector<LatentConfig>& draws,
                                                     const LatentConfig& reference);

/// Same, with the reference picked from the draws themselves.
std::vector<ProcrustesTransform> align_draw_sequence(std::vector<LatentConfig>& draws,
                                                     const Eigen::VectorXd& log_posterior,
                                                     ReferenceRule rule);

/// Aligns respondent draws to `reference` and marks them aligned.
void align_lsm_draws(LsmDraws& draws, const LatentConfig& reference);
void align_lsm_draws(LsmDraws& draws, ReferenceRule rule = ReferenceRule::max_log_posterior);

/// Aligns the stacked configuration [zhat; w] of every draw to
/// [zhat; item_reference]. The same motion moves zhat and w together, so
/// respondent-item distances are unchanged; motions are kept in the draws.
void align_lsirm_draws(LsirmDraws& draws, const LatentConfig& item_reference);
void align_lsirm_draws(LsirmDraws& draws, ReferenceRule rule = ReferenceRule::max_log_posterior);

}  // namespace lsinf
