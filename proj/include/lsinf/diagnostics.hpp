#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lsinf {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
  double width() const { return upper - lower; }
};

enum class RhatVariant {
  classic,  // whole chains
  split,    // each chain cut into two halves first
};

/// Potential scale reduction factor of equal-length scalar chains.
///
/// With m chains of length n, W the mean within-chain variance and B / n
/// the variance of the chain means (both with unbiased denominators):
///   V = (n - 1) / n * W + B / n,   R = sqrt(V / W).
/// Identical chains give B = 0 and R = sqrt((n - 1) / n) <= 1.
double gelman_rubin(const std::vector<Eigen::VectorXd>& chains,
                    RhatVariant variant = RhatVariant::classic);

/// Shortest interval spanning ceil(mass * N) order statistics; ties go to
/// the left-most window. Needs N >= ceil(1 / (1 - mass)).
Interval hpd_interval(Eigen::VectorXd samples, double mass = 0.95);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  Interval hpd;
  std::optional<double> rhat;  // only with two or more chains
};

struct ChainSummary {
  std::vector<ParameterSummary> parameters;
  std::vector<std::pair<std::string, double>> acceptance;

  const ParameterSummary* find(const std::string& name) const;
};

/// Pooled mean, SD and HPD over all chains, plus R-hat when chains >= 2.
ParameterSummary summarize(std::string name, const std::vector<Eigen::VectorXd>& chains,
                           double mass = 0.95, RhatVariant variant = RhatVariant::classic);

}  // namespace lsinf
