#include "lsinf/alignment.hpp"

namespace lsinf {

std::size_t reference_index(const Eigen::VectorXd& log_posterior, ReferenceRule rule) {
  if (log_posterior.size() == 0) throw InputError("no draws to choose a reference from");
  if (rule == ReferenceRule::first_draw) return 0;
  Eigen::Index best = 0;
  log_posterior.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

std::vector<ProcrustesTransform> align_draw_sequence(std::vector<LatentConfig>& draws,
                                                     const LatentConfig& reference) {
  if (draws.empty()) throw InputError("no draws to align");
  std::vector<ProcrustesTransform> motions;
  motions.reserve(draws.size());
  for (auto& d : draws) {
    auto r = procrustes_align(d, reference);
    d = std::move(r.aligned);
    motions.push_back(r.transform);
  }
  return motions;
}

std::vector<ProcrustesTransform> align_draw_sequence(std::vector<LatentConfig>& draws,
                                                     const Eigen::VectorXd& log_posterior,
                                                     ReferenceRule rule) {
  if (draws.empty()) throw InputError("no draws to align");
  if (static_cast<std::size_t>(log_posterior.size()) != draws.size())
    throw InputError("log-posterior trace and draws differ in length");
  const LatentConfig reference = draws[reference_index(log_posterior, rule)];
  return align_draw_sequence(draws, reference);
}

void align_lsm_draws(LsmDraws& draws, const LatentConfig& reference) {
  align_draw_sequence(draws.z, reference);
  draws.aligned = true;
}

void align_lsm_draws(LsmDraws& draws, ReferenceRule rule) {
  if (draws.z.empty()) throw InputError("no draws to align");
  const LatentConfig reference = draws.z[reference_index(draws.log_posterior, rule)];
  align_lsm_draws(draws, reference);
}

void align_lsirm_draws(LsirmDraws& draws, const LatentConfig& item_reference) {
  if (draws.w.empty()) throw InputError("no draws to align");
  const Eigen::Index n = draws.zhat.rows();
  const Eigen::Index p = item_reference.rows();
  LatentConfig reference(n + p, kLatentDim);
  reference << draws.zhat, item_reference;

  LatentConfig stacked(n + p, kLatentDim);
  draws.motions.clear();
  draws.motions.reserve(draws.w.size());
  for (auto& w : draws.w) {
    stacked << draws.zhat, w;
    const auto r = procrustes_align(stacked, reference);
    w = r.aligned.bottomRows(p);
    draws.motions.push_back(r.transform);
  }
  draws.aligned = true;
}

void align_lsirm_draws(LsirmDraws& draws, ReferenceRule rule) {
  if (draws.w.empty()) throw InputError("no draws to align");
  const LatentConfig reference = draws.w[reference_index(draws.log_posterior, rule)];
  align_lsirm_draws(draws, reference);
}

}  // namespace lsinf
