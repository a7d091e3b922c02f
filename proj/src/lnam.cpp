#include "lsinf/lnam.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace lsinf {
namespace {

constexpr double kZ975 = 1.959963984540054;

bool is_symmetric(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff() == 0.0; }

Eigen::VectorXd residualize(const std::optional<Eigen::MatrixXd>& x, const Eigen::VectorXd& v) {
  if (!x) return v;
  return v - *x * x->colPivHouseholderQr().solve(v);
}

}  // namespace

Eigen::VectorXd behavior_counts(const ItemResponseData& resp) {
  return resp.responses().cast<double>().rowwise().sum();
}

Eigen::MatrixXd row_normalized(const Eigen::MatrixXd& weights) {
  Eigen::MatrixXd out = weights;
  for (Eigen::Index k = 0; k < out.rows(); ++k) {
    const double s = out.row(k).sum();
    if (s != 0.0) out.row(k) /= s;
  }
  return out;
}

LnamProblem::LnamProblem(const Eigen::VectorXd& y, const Eigen::MatrixXd& weights,
                         const std::optional<Eigen::MatrixXd>& covariates)
    : y_(y), x_(covariates) {
  const Eigen::Index n = y.size();
  if (weights.rows() != n || weights.cols() != n)
    throw InputError("dimension mismatch: weight matrix must be " + std::to_string(n) + "x" +
                     std::to_string(n));
  if (weights.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw InputError("weight matrix must have a zero diagonal");
  if (weights.cwiseAbs().maxCoeff() == 0.0)
    throw InputError("weight matrix is all zero: rho is unidentified");
  if (x_ && x_->rows() != n) throw InputError("dimension mismatch: covariate rows");

  if (is_symmetric(weights)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(weights, Eigen::EigenvaluesOnly);
    eigenvalues_ = es.eigenvalues().cast<std::complex<double>>();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(weights, false);
    eigenvalues_ = es.eigenvalues();
  }
  const double lmin = eigenvalues_.real().minCoeff();
  const double lmax = eigenvalues_.real().maxCoeff();
  if (!(lmax > 0.0) || !(lmin < 0.0)) throw InputError("weight matrix spectrum does not bound rho");
  stability_ = {1.0 / lmin, 1.0 / lmax};

  wy_ = weights * y;
  const Eigen::VectorXd my = residualize(x_, y_);
  const Eigen::VectorXd mwy = residualize(x_, wy_);
  a_ = my.squaredNorm();
  b_ = my.dot(mwy);
  c_ = mwy.squaredNorm();
}

double LnamProblem::log_abs_det(double rho) const {
  double s = 0.0;
  for (const auto& l : eigenvalues_) s += std::log(std::abs(1.0 - rho * l));
  return s;
}

double LnamProblem::sigma2(double rho) const { return rss(rho) / static_cast<double>(y_.size()); }

Eigen::VectorXd LnamProblem::coefficients(double rho) const {
  if (!x_) return {};
  const Eigen::VectorXd target = y_ - rho * wy_;
  return x_->colPivHouseholderQr().solve(target);
}

double LnamProblem::profile_log_likelihood(double rho) const {
  const double n = static_cast<double>(y_.size());
  return log_abs_det(rho) - 0.5 * n * std::log(2.0 * std::numbers::pi) -
         0.5 * n * std::log(sigma2(rho)) - 0.5 * n;
}

double LnamProblem::profile_curvature(double rho) const {
  double det_term = 0.0;
  for (const auto& l : eigenvalues_) {
    const auto u = 1.0 - rho * l;
    det_term -= (l * l / (u * u)).real();
  }
  const double n = static_cast<double>(y_.size());
  const double r = rss(rho);
  const double dr = -2.0 * b_ + 2.0 * rho * c_;
  const double ddr = 2.0 * c_;
  return det_term - 0.5 * n * (ddr * r - dr * dr) / (r * r);
}

AutocorrFit fit_lnam(const Eigen::VectorXd& y, const Eigen::MatrixXd& weights,
                     const std::optional<Eigen::MatrixXd>& covariates, const LnamOptions& options) {
  const Eigen::MatrixXd w = options.row_normalize ? row_normalized(weights) : weights;
  const LnamProblem problem(y, w, covariates);

  const Interval stab = problem.stability();
  const double trim = options.margin * stab.width();
  const double lo = stab.lower + trim;
  const double hi = stab.upper - trim;
  const auto f = [&](double rho) { return problem.profile_log_likelihood(rho); };

  // Coarse scan to bracket the maximum, then golden-section refinement.
  constexpr int kGrid = 400;
  const double h = (hi - lo) / kGrid;
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = f(lo + i * h);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + std::max(best - 1, 0) * h;
  double b = lo + std::min(best + 1, kGrid) * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-12 * (hi - lo)) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  AutocorrFit fit;
  fit.rho = 0.5 * (a + b);
  fit.stability = stab;
  fit.at_boundary = fit.rho - lo < h || hi - fit.rho < h;
  fit.sigma2 = problem.sigma2(fit.rho);
  fit.coefficients = problem.coefficients(fit.rho);
  fit.log_likelihood = problem.profile_log_likelihood(fit.rho);
  const double info = -problem.profile_curvature(fit.rho);
  if (!(info > 0.0)) throw NumericalError("lnam: non-positive observed information at rho-hat");
  fit.rho_se = 1.0 / std::sqrt(info);
  fit.rho_ci = {fit.rho - kZ975 * fit.rho_se, fit.rho + kZ975 * fit.rho_se};
  return fit;
}

}  // namespace lsinf
