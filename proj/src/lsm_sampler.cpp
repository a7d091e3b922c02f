#include "lsinf/lsm_sampler.hpp"

#include "lsinf/likelihood.hpp"

#include <stdexcept>

namespace lsinf {
namespace {

class LsmChain {
 public:
  LsmChain(const NetworkData& net, const Hyperparams& hp, const McmcConfig& cfg,
           const SamplerHooks& hooks)
      : y_(net.as_double()),
        hp_(hp),
        cfg_(cfg),
        hooks_(hooks),
        rng_(make_stream(cfg.seed, 1)),
        n_(net.size()),
        step_z_(cfg.lsm.z),
        step_alpha_(cfg.lsm.alpha),
        step_gamma_(cfg.lsm.log_gamma) {
    const Eigen::Index pairs = n_ * (n_ - 1) / 2;
    pair_ties_.resize(pairs);
    pair_dist_.resize(pairs);
    for (Eigen::Index l = 1, off = 0; l < n_; off += l, ++l)
      pair_ties_.segment(off, l) = y_.col(l).head(l).array();
    edges_ = pair_ties_.sum();

    z_.resize(n_, kLatentDim);
    for (Eigen::Index k = 0; k < n_; ++k)
      for (int d = 0; d < kLatentDim; ++d) z_(k, d) = normal_(rng_);
  }

  LsmDraws run() {
    refresh_pairs();
    loglik_ = pair_loglik(alpha_, gamma());
    if (!std::isfinite(loglik_ + log_prior()))
      throw NumericalError("network model: non-finite log-posterior at initial state");

    LsmDraws out;
    const std::size_t keep = cfg_.retained();
    out.alpha.resize(static_cast<Eigen::Index>(keep));
    out.gamma.resize(static_cast<Eigen::Index>(keep));
    out.log_posterior.resize(static_cast<Eigen::Index>(keep));
    out.z.reserve(keep);

    Eigen::Index slot = 0;
    for (std::size_t t = 0; t < cfg_.total_iters; ++t) {
      const bool counting = t >= cfg_.burn_in;
      update_positions(counting);
      refresh_pairs();
      loglik_ = pair_loglik(alpha_, gamma());
      update_alpha(counting);
      update_gamma(counting);

      const bool adapting = cfg_.adapt && t < cfg_.burn_in;
      step_z_.end_iteration(t, adapting);
      step_alpha_.end_iteration(t, adapting);
      step_gamma_.end_iteration(t, adapting);

      if (cfg_.keeps(t)) {
        out.alpha(slot) = alpha_;
        out.gamma(slot) = gamma();
        out.log_posterior(slot) = loglik_ + log_prior();
        out.z.push_back(z_);
        ++slot;
      }
    }
    out.accept_z = step_z_.total();
    out.accept_alpha = step_alpha_.total();
    out.accept_gamma = step_gamma_.total();
    out.final_steps = {step_z_.step(), step_alpha_.step(), step_gamma_.step()};
    return out;
  }

 private:
  double gamma() const { return std::exp(log_gamma_); }

  double log_prior() const {
    return log_normal(alpha_, hp_.sigma_alpha) + log_std_bivariate_normal(z_) +
           log_normal(log_gamma_, hp_.sigma_gamma);
  }

  // Sum over unordered pairs, using the cached pair distances.
  double pair_loglik(double alpha, double gamma) {
    if (hooks_.flat_likelihood) return 0.0;
    eta_ = alpha - gamma * pair_dist_;
    return alpha * edges_ - gamma * tie_dist_ - softplus_sum(eta_);
  }

  void refresh_pairs() {
    if (hooks_.flat_likelihood) return;
    for (Eigen::Index l = 1, off = 0; l < n_; off += l, ++l)
      pair_dist_.segment(off, l) = distances_to(z_.topRows(l), z_.row(l));
    tie_dist_ = (pair_ties_ * pair_dist_).sum();
  }

  // Likelihood terms involving respondent k placed at `pos`, excluding the
  // self pair (which is re-added or removed explicitly below).
  double node_loglik(Eigen::Index k, const Eigen::RowVector2d& pos) {
    const double g = gamma();
    node_eta_ = alpha_ - g * distances_to(z_, pos);
    const double self_eta = alpha_ - g * (pos - z_.row(k)).norm();
    return (y_.col(k).array() * node_eta_).sum() - softplus_sum(node_eta_) + softplus(self_eta);
  }

  void update_positions(bool counting) {
    const double step = step_z_.step();
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::RowVector2d current = z_.row(k);
      const Eigen::RowVector2d proposal(current(0) + step * normal_(rng_),
                                        current(1) + step * normal_(rng_));
      double log_ratio = 0.5 * (current.squaredNorm() - proposal.squaredNorm());
      if (!hooks_.flat_likelihood) log_ratio += node_loglik(k, proposal) - node_loglik(k, current);
      const bool ok = mh_accept(log_ratio, rng_);
      if (ok) z_.row(k) = proposal;
      step_z_.record(ok, counting);
    }
  }

  void update_alpha(bool counting) {
    const double proposal = alpha_ + step_alpha_.step() * normal_(rng_);
    const double ll = pair_loglik(proposal, gamma());
    const double log_ratio = ll - loglik_ + log_normal(proposal, hp_.sigma_alpha) -
                             log_normal(alpha_, hp_.sigma_alpha);
    const bool ok = mh_accept(log_ratio, rng_);
    if (ok) {
      alpha_ = proposal;
      loglik_ = ll;
    }
    step_alpha_.record(ok, counting);
  }

  void update_gamma(bool counting) {
    const double proposal = log_gamma_ + step_gamma_.step() * normal_(rng_);
    const double ll = pair_loglik(alpha_, std::exp(proposal));
    const double log_ratio = ll - loglik_ + log_normal(proposal, hp_.sigma_gamma) -
                             log_normal(log_gamma_, hp_.sigma_gamma);
    const bool ok = mh_accept(log_ratio, rng_);
    if (ok) {
      log_gamma_ = proposal;
      loglik_ = ll;
    }
    step_gamma_.record(ok, counting);
  }

  const Eigen::MatrixXd y_;
  const Hyperparams hp_;
  const McmcConfig cfg_;
  const SamplerHooks hooks_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  const Eigen::Index n_;

  LatentConfig z_;
  double alpha_ = 0.0;
  double log_gamma_ = 0.0;
  double loglik_ = 0.0;

  Eigen::ArrayXd pair_ties_;
  Eigen::ArrayXd pair_dist_;
  Eigen::ArrayXd eta_;
  Eigen::ArrayXd node_eta_;
  double edges_ = 0.0;
  double tie_dist_ = 0.0;

  AdaptiveStep step_z_;
  AdaptiveStep step_alpha_;
  AdaptiveStep step_gamma_;
};

}  // namespace

LsmDraws run_lsm_chain(const NetworkData& net, const Hyperparams& hp, const McmcConfig& cfg,
                       const SamplerHooks& hooks) {
  hp.validate();
  cfg.validate();
  if (net.size() < 2) throw InputError("network needs at least two respondents");
  return LsmChain(net, hp, cfg, hooks).run();
}

LatentConfig mean_configuration(const std::vector<LatentConfig>& configs) {
  if (configs.empty()) throw InputError("no configurations to average");
  LatentConfig acc = LatentConfig::Zero(configs.front().rows(), kLatentDim);
  for (const auto& c : configs) {
    if (c.rows() != acc.rows()) throw InputError("configurations differ in size");
    acc += c;
  }
  return acc / static_cast<double>(configs.size());
}

LatentConfig point_estimate_z(const LsmDraws& draws, bool aligned) {
  if (draws.z.empty()) throw InputError("no retained draws");
  if (aligned && !draws.aligned)
    throw std::logic_error("point_estimate_z: draws have not been Procrustes-aligned");
  return mean_configuration(draws.z);
}

}  // namespace lsinf
