#pragma once

// Log-likelihood and log-prior kernels for the network latent space model
// and the adapted latent space item response model. Everything here is a
// pure function of its arguments.

#include "lsinf/types.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <string>

namespace lsinf {

/// How ordered pairs of an undirected network enter the LSM likelihood.
/// `unordered` counts each tie once (k < l); `ordered` sums over k != l and
/// therefore counts every symmetric pair twice.
enum class PairCounting { unordered, ordered };

/// log(1 + exp(x)) without overflow.
template <std::floating_point Scalar>
Scalar softplus(Scalar x) {
  using std::exp;
  using std::log1p;
  return x > Scalar(0) ? x + log1p(exp(-x)) : log1p(exp(x));
}

/// Coefficient-wise softplus over an Eigen array expression.
template <typename Derived>
auto softplus(const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.max(Scalar(0)) + (-x.abs()).exp().log1p();
}

/// Sum of softplus over `x`. Each 1 + exp(-|x_i|) lies in (1, 2], so blocks
/// of 256 multiply without overflow and need one log per block instead of
/// one log1p per element. Absolute error is ~1e-14 per block.
template <typename Derived>
typename Derived::Scalar softplus_sum(const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Flat = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  constexpr Eigen::Index kBlock = 256;
  using std::log;
  const auto& values = x.derived().eval();
  const Eigen::Map<const Flat> flat(values.data(), values.size());
  Scalar total = flat.max(Scalar(0)).sum();
  for (Eigen::Index start = 0; start < flat.size(); start += kBlock) {
    const Eigen::Index len = std::min(kBlock, flat.size() - start);
    total += log(((-flat.segment(start, len).abs()).exp() + Scalar(1)).prod());
  }
  return total;
}

template <std::floating_point Scalar>
Scalar logistic(Scalar x) {
  using std::exp;
  return x >= Scalar(0) ? Scalar(1) / (Scalar(1) + exp(-x)) : exp(x) / (Scalar(1) + exp(x));
}

/// Bernoulli log-mass of `y` under success logit `eta`.
template <std::floating_point Scalar>
Scalar bernoulli_logit(Scalar y, Scalar eta) {
  return y * eta - softplus(eta);
}

/// Euclidean distances from every row of `points` to `x`.
template <typename Derived, typename Point>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> distances_to(
    const Eigen::MatrixBase<Derived>& points, const Eigen::MatrixBase<Point>& x) {
  return ((points.col(0).array() - x(0)).square() + (points.col(1).array() - x(1)).square()).sqrt();
}

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string("non-finite coordinates in ") + what);
}

}  // namespace detail

/// Sum of standard bivariate normal log-densities over the rows of `pos`.
template <typename Derived>
typename Derived::Scalar log_std_bivariate_normal(const Eigen::MatrixBase<Derived>& pos) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  const Scalar log_2pi = log(Scalar(2) * std::numbers::pi_v<Scalar>);
  return -Scalar(pos.rows()) * log_2pi - Scalar(0.5) * pos.squaredNorm();
}

/// Log-density of N(0, sd^2) at x.
template <std::floating_point Scalar>
Scalar log_normal(Scalar x, Scalar sd) {
  using std::log;
  const Scalar half_log_2pi = Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar>);
  return -log(sd) - half_log_2pi - x * x / (Scalar(2) * sd * sd);
}

/// Inverse-gamma log-density with shape `a` and rate (scale) `b`.
template <std::floating_point Scalar>
Scalar log_inv_gamma(Scalar x, Scalar a, Scalar b) {
  using std::lgamma;
  using std::log;
  return a * log(b) - lgamma(a) - (a + Scalar(1)) * log(x) - b / x;
}

/// Network log-likelihood: sum over pairs of y*eta - log(1 + exp eta),
/// eta = alpha - gamma * |z_k - z_l|.
template <typename DerivedY, typename DerivedZ>
typename DerivedZ::Scalar lsm_log_likelihood(const Eigen::MatrixBase<DerivedY>& y,
                                             const Eigen::MatrixBase<DerivedZ>& z,
                                             typename DerivedZ::Scalar alpha,
                                             typename DerivedZ::Scalar gamma,
                                             PairCounting counting = PairCounting::unordered) {
  using Scalar = typename DerivedZ::Scalar;
  if (y.rows() != y.cols() || y.rows() != z.rows())
    throw InputError("dimension mismatch: adjacency is " + std::to_string(y.rows()) + "x" +
                     std::to_string(y.cols()) + " but z has " + std::to_string(z.rows()) + " rows");
  detail::require_finite(z, "respondent positions");
  if (!(gamma >= Scalar(0))) throw InputError("gamma must be non-negative");

  Scalar total(0);
  for (Eigen::Index l = 1; l < z.rows(); ++l) {
    const auto d = distances_to(z.topRows(l), z.row(l));
    const Eigen::Array<Scalar, Eigen::Dynamic, 1> eta = alpha - gamma * d;
    const auto ties = y.col(l).head(l).template cast<Scalar>().array();
    total += (ties * eta).sum() - softplus(eta).sum();
  }
  return counting == PairCounting::ordered ? Scalar(2) * total : total;
}

inline double lsm_log_likelihood(const NetworkData& net, const LsmParams& params,
                                 PairCounting counting = PairCounting::unordered) {
  return lsm_log_likelihood(net.adjacency(), params.z, params.alpha, params.gamma, counting);
}

/// Response log-likelihood with respondent positions held at `zhat`:
/// eta_ki = beta_i + theta_k - delta * |zhat_k - w_i|.
template <typename DerivedX, typename DerivedZ, typename DerivedW, typename DerivedB,
          typename DerivedT>
typename DerivedZ::Scalar adapted_lsirm_log_likelihood(const Eigen::MatrixBase<DerivedX>& x,
                                                       const Eigen::MatrixBase<DerivedZ>& zhat,
                                                       const Eigen::MatrixBase<DerivedW>& w,
                                                       const Eigen::MatrixBase<DerivedB>& beta,
                                                       const Eigen::MatrixBase<DerivedT>& theta,
                                                       typename DerivedZ::Scalar delta) {
  using Scalar = typename DerivedZ::Scalar;
  if (zhat.rows() != x.rows() || theta.size() != x.rows() || w.rows() != x.cols() ||
      beta.size() != x.cols())
    throw InputError("dimension mismatch between responses (" + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + ") and model parameters");
  detail::require_finite(zhat, "respondent positions");
  detail::require_finite(w, "item positions");

  Scalar total(0);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const auto d = distances_to(zhat, w.row(i));
    const Eigen::Array<Scalar, Eigen::Dynamic, 1> eta = beta(i) + theta.array() - delta * d;
    total += (x.col(i).template cast<Scalar>().array() * eta).sum() - softplus(eta).sum();
  }
  return total;
}

inline double adapted_lsirm_log_likelihood(const ItemResponseData& resp, const LatentConfig& zhat,
                                           const AdaptedLsirmParams& params) {
  return adapted_lsirm_log_likelihood(resp.responses(), zhat, params.w, params.beta, params.theta,
                                      params.delta);
}

/// Log-prior of the network model; the gamma term is a normal density on
/// log(gamma), with no Jacobian, matching the sampler's log-scale walk.
inline double log_priors_lsm(const LsmParams& params, const Hyperparams& hp) {
  if (!(params.gamma > 0.0)) throw InputError("gamma must be positive");
  return log_normal(params.alpha, hp.sigma_alpha) + log_std_bivariate_normal(params.z) +
         log_normal(std::log(params.gamma), hp.sigma_gamma);
}

inline double log_priors_adapted(const AdaptedLsirmParams& params, const Hyperparams& hp) {
  if (!(params.sigma2 > 0.0)) throw InputError("sigma2 must be positive");
  const double sd_theta = std::sqrt(params.sigma2);
  double lp = 0.0;
  for (double b : params.beta) lp += log_normal(b, hp.sigma_beta);
  for (double t : params.theta) lp += log_normal(t, sd_theta);
  lp += log_inv_gamma(params.sigma2, hp.a_sigma, hp.b_sigma);
  lp += log_std_bivariate_normal(params.w);
  lp += log_normal(params.delta, hp.sigma_delta);
  return lp;
}

/// Probability of a positive response at respondent-item distance `dist`.
template <std::floating_point Scalar>
Scalar response_probability(Scalar beta_i, Scalar theta_k, Scalar delta, Scalar dist) {
  if (dist < Scalar(0)) throw InputError("negative distance");
  return logistic(beta_i + theta_k - delta * dist);
}

}  // namespace lsinf
