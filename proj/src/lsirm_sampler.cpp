#include "lsinf/lsirm_sampler.hpp"

#include "lsinf/likelihood.hpp"
#include "lsinf/lsm_sampler.hpp"

namespace lsinf {

double gibbs_sigma2(const Eigen::VectorXd& theta, const Hyperparams& hp, Rng& rng) {
  const double shape = hp.a_sigma + 0.5 * static_cast<double>(theta.size());
  const double rate = hp.b_sigma + 0.5 * theta.squaredNorm();
  std::gamma_distribution<double> precision(shape, 1.0 / rate);
  return 1.0 / precision(rng);
}

namespace {

class LsirmChain {
 public:
  LsirmChain(const ItemResponseData& resp, const LatentConfig& zhat, const Hyperparams& hp,
             const McmcConfig& cfg, const SamplerHooks& hooks)
      : x_(resp.as_double()),
        zhat_(zhat),
        hp_(hp),
        cfg_(cfg),
        hooks_(hooks),
        rng_(make_stream(cfg.seed, 2)),
        n_(resp.respondents()),
        p_(resp.items()),
        step_w_(cfg.lsirm.w),
        step_beta_(cfg.lsirm.beta),
        step_theta_(cfg.lsirm.theta),
        step_delta_(cfg.lsirm.delta) {
    beta_ = Eigen::VectorXd::Zero(p_);
    theta_ = Eigen::VectorXd::Zero(n_);
    delta_ = hooks_.fix_delta ? hooks_.fixed_delta : 0.0;
    w_.resize(p_, kLatentDim);
    for (Eigen::Index i = 0; i < p_; ++i)
      for (int d = 0; d < kLatentDim; ++d) w_(i, d) = normal_(rng_);
    dist_.resize(n_, p_);
    for (Eigen::Index i = 0; i < p_; ++i) dist_.col(i) = distances_to(zhat_, w_.row(i));
  }

  LsirmDraws run() {
    if (!std::isfinite(full_loglik(delta_) + log_prior()))
      throw NumericalError("response model: non-finite log-posterior at initial state");

    LsirmDraws out;
    const auto keep = static_cast<Eigen::Index>(cfg_.retained());
    out.beta.resize(keep, p_);
    out.theta.resize(keep, n_);
    out.sigma2.resize(keep);
    out.delta.resize(keep);
    out.log_posterior.resize(keep);
    out.w.reserve(static_cast<std::size_t>(keep));

    Eigen::Index slot = 0;
    for (std::size_t t = 0; t < cfg_.total_iters; ++t) {
      const bool counting = t >= cfg_.burn_in;
      update_items(counting);
      update_beta(counting);
      update_theta(counting);
      sigma2_ = gibbs_sigma2(theta_, hp_, rng_);
      if (!hooks_.fix_delta) update_delta(counting);

      const bool adapting = cfg_.adapt && t < cfg_.burn_in;
      step_w_.end_iteration(t, adapting);
      step_beta_.end_iteration(t, adapting);
      step_theta_.end_iteration(t, adapting);
      step_delta_.end_iteration(t, adapting);

      if (cfg_.keeps(t)) {
        out.beta.row(slot) = beta_.transpose();
        out.theta.row(slot) = theta_.transpose();
        out.sigma2(slot) = sigma2_;
        out.delta(slot) = delta_;
        out.log_posterior(slot) = full_loglik(delta_) + log_prior();
        out.w.push_back(w_);
        ++slot;
      }
    }
    out.accept_w = step_w_.total();
    out.accept_beta = step_beta_.total();
    out.accept_theta = step_theta_.total();
    out.accept_delta = step_delta_.total();
    out.final_steps = {step_w_.step(), step_beta_.step(), step_theta_.step(), step_delta_.step()};
    out.zhat = zhat_;
    return out;
  }

 private:
  double log_prior() const {
    double lp = 0.0;
    const double sd_theta = std::sqrt(sigma2_);
    for (double b : beta_) lp += log_normal(b, hp_.sigma_beta);
    for (double t : theta_) lp += log_normal(t, sd_theta);
    lp += log_inv_gamma(sigma2_, hp_.a_sigma, hp_.b_sigma);
    lp += log_std_bivariate_normal(w_);
    lp += log_normal(delta_, hp_.sigma_delta);
    return lp;
  }

  // Log-likelihood of item column i given its distance column and easiness.
  double column_loglik(Eigen::Index i, double beta_i, const Eigen::ArrayXd& dist) {
    col_eta_ = beta_i + theta_.array() - delta_ * dist;
    return (x_.col(i).array() * col_eta_).sum() - softplus_sum(col_eta_);
  }

  double row_loglik(Eigen::Index k, double theta_k) {
    row_eta_ = beta_.array() + theta_k - delta_ * dist_.row(k).transpose().array();
    return (x_.row(k).transpose().array() * row_eta_).sum() - softplus_sum(row_eta_);
  }

  double full_loglik(double delta) {
    if (hooks_.flat_likelihood) return 0.0;
    full_eta_ = (theta_.replicate(1, p_).rowwise() + beta_.transpose()).array() -
                delta * dist_.array();
    return (x_.array() * full_eta_).sum() - softplus_sum(full_eta_);
  }

  void update_items(bool counting) {
    const double step = step_w_.step();
    for (Eigen::Index i = 0; i < p_; ++i) {
      const Eigen::RowVector2d current = w_.row(i);
      const Eigen::RowVector2d proposal(current(0) + step * normal_(rng_),
                                        current(1) + step * normal_(rng_));
      double log_ratio = 0.5 * (current.squaredNorm() - proposal.squaredNorm());
      Eigen::ArrayXd proposed_dist;
      if (!hooks_.flat_likelihood) {
        proposed_dist = distances_to(zhat_, proposal);
        log_ratio += column_loglik(i, beta_(i), proposed_dist) -
                     column_loglik(i, beta_(i), dist_.col(i).array());
      }
      const bool ok = mh_accept(log_ratio, rng_);
      if (ok) {
        w_.row(i) = proposal;
        dist_.col(i) = hooks_.flat_likelihood ? distances_to(zhat_, proposal) : proposed_dist;
      }
      step_w_.record(ok, counting);
    }
  }

  void update_beta(bool counting) {
    const double step = step_beta_.step();
    for (Eigen::Index i = 0; i < p_; ++i) {
      const double proposal = beta_(i) + step * normal_(rng_);
      double log_ratio =
          log_normal(proposal, hp_.sigma_beta) - log_normal(beta_(i), hp_.sigma_beta);
      if (!hooks_.flat_likelihood) {
        const Eigen::ArrayXd d = dist_.col(i).array();
        log_ratio += column_loglik(i, proposal, d) - column_loglik(i, beta_(i), d);
      }
      const bool ok = mh_accept(log_ratio, rng_);
      if (ok) beta_(i) = proposal;
      step_beta_.record(ok, counting);
    }
  }

  void update_theta(bool counting) {
    const double step = step_theta_.step();
    const double sd = std::sqrt(sigma2_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      const double proposal = theta_(k) + step * normal_(rng_);
      double log_ratio = log_normal(proposal, sd) - log_normal(theta_(k), sd);
      if (!hooks_.flat_likelihood) log_ratio += row_loglik(k, proposal) - row_loglik(k, theta_(k));
      const bool ok = mh_accept(log_ratio, rng_);
      if (ok) theta_(k) = proposal;
      step_theta_.record(ok, counting);
    }
  }

  void update_delta(bool counting) {
    const double proposal = delta_ + step_delta_.step() * normal_(rng_);
    double log_ratio =
        log_normal(proposal, hp_.sigma_delta) - log_normal(delta_, hp_.sigma_delta);
    if (!hooks_.flat_likelihood) log_ratio += full_loglik(proposal) - full_loglik(delta_);
    const bool ok = mh_accept(log_ratio, rng_);
    if (ok) delta_ = proposal;
    step_delta_.record(ok, counting);
  }

  const Eigen::MatrixXd x_;
  const LatentConfig zhat_;
  const Hyperparams hp_;
  const McmcConfig cfg_;
  const SamplerHooks hooks_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  const Eigen::Index n_;
  const Eigen::Index p_;

  Eigen::VectorXd beta_;
  Eigen::VectorXd theta_;
  double sigma2_ = 1.0;
  double delta_ = 0.0;
  LatentConfig w_;

  Eigen::MatrixXd dist_;
  Eigen::ArrayXd col_eta_;
  Eigen::ArrayXd row_eta_;
  Eigen::ArrayXXd full_eta_;

  AdaptiveStep step_w_;
  AdaptiveStep step_beta_;
  AdaptiveStep step_theta_;
  AdaptiveStep step_delta_;
};

}  // namespace

LsirmDraws run_adapted_lsirm_chain(const ItemResponseData& resp, const LatentConfig& zhat,
                                   const Hyperparams& hp, const McmcConfig& cfg,
                                   const SamplerHooks& hooks) {
  hp.validate();
  cfg.validate();
  if (zhat.rows() != resp.respondents())
    throw InputError("dimension mismatch: zhat has " + std::to_string(zhat.rows()) +
                     " rows, responses have " + std::to_string(resp.respondents()));
  if (!zhat.allFinite()) throw InputError("non-finite coordinates in zhat");
  return LsirmChain(resp, zhat, hp, cfg, hooks).run();
}

AdaptedLsirmParams posterior_mean(const LsirmDraws& draws) {
  if (draws.size() == 0) throw InputError("no retained draws");
  AdaptedLsirmParams mean;
  mean.beta = draws.beta.colwise().mean().transpose();
  mean.theta = draws.theta.colwise().mean().transpose();
  mean.sigma2 = draws.sigma2.mean();
  mean.delta = draws.delta.mean();
  mean.w = mean_configuration(draws.w);
  return mean;
}

Eigen::MatrixXd fit_statistic(const LatentConfig& zhat, const AdaptedLsirmParams& point) {
  const Eigen::Index n = zhat.rows();
  const Eigen::Index p = point.w.rows();
  if (point.theta.size() != n || point.beta.size() != p)
    throw InputError("dimension mismatch between zhat and point estimates");
  Eigen::MatrixXd prob(n, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::ArrayXd d = distances_to(zhat, point.w.row(i));
    for (Eigen::Index k = 0; k < n; ++k)
      prob(k, i) = response_probability(point.beta(i), point.theta(k), point.delta, d(k));
  }
  return prob;
}

}  // namespace lsinf
