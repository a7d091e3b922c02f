#pragma once

// Linear network autocorrelation model y = rho W y + X b + e, e ~ N(0, s^2 I),
// fitted by maximum likelihood with (b, s^2) profiled out.

#include "lsinf/diagnostics.hpp"
#include "lsinf/types.hpp"

#include <complex>
#include <optional>

namespace lsinf {

/// Per-respondent count of positive responses.
Eigen::VectorXd behavior_counts(const ItemResponseData& resp);

struct LnamOptions {
  bool row_normalize = false;
  /// Fraction of the stability interval trimmed from each end of the search.
  double margin = 1e-6;
};

struct AutocorrFit {
  double rho = 0.0;
  double rho_se = 0.0;
  Interval rho_ci;  // 95%, from the observed information
  double sigma2 = 0.0;
  Eigen::VectorXd coefficients;  // empty without covariates
  double log_likelihood = 0.0;
  Interval stability;  // (1 / lambda_min, 1 / lambda_max)
  bool at_boundary = false;
};

/// Profile likelihood of rho for fixed (y, W, X). The log-determinant uses the
/// eigenvalues of W, computed once.
class LnamProblem {
 public:
  LnamProblem(const Eigen::VectorXd& y, const Eigen::MatrixXd& weights,
              const std::optional<Eigen::MatrixXd>& covariates = std::nullopt);

  Interval stability() const { return stability_; }

  /// log |det(I - rho W)|.
  double log_abs_det(double rho) const;

  /// Profile log-likelihood, including the -n/2 log(2 pi) - n/2 constant.
  double profile_log_likelihood(double rho) const;

  /// Second derivative of the profile log-likelihood.
  double profile_curvature(double rho) const;

  /// Residual variance and coefficients at `rho`.
  double sigma2(double rho) const;
  Eigen::VectorXd coefficients(double rho) const;

 private:
  double rss(double rho) const { return a_ - 2.0 * rho * b_ + rho * rho * c_; }

  Eigen::VectorXd y_;
  Eigen::VectorXd wy_;
  std::optional<Eigen::MatrixXd> x_;
  Eigen::VectorXcd eigenvalues_;
  Interval stability_;
  double a_ = 0.0;  // |M y|^2
  double b_ = 0.0;  // (M y).(M W y)
  double c_ = 0.0;  // |M W y|^2, M the residual projector of X
};

Eigen::MatrixXd row_normalized(const Eigen::MatrixXd& weights);

/// Maximum-likelihood fit. Throws InputError for an all-zero or malformed W.
AutocorrFit fit_lnam(const Eigen::VectorXd& y, const Eigen::MatrixXd& weights,
                     const std::optional<Eigen::MatrixXd>& covariates = std::nullopt,
                     const LnamOptions& options = {});

}  // namespace lsinf
