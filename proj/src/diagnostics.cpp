#include "lsinf/diagnostics.hpp"

#include "lsinf/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsinf {
namespace {

std::vector<Eigen::VectorXd> split_halves(const std::vector<Eigen::VectorXd>& chains) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& c : chains) {
    const Eigen::Index half = c.size() / 2;
    out.emplace_back(c.head(half));
    out.emplace_back(c.tail(half));
  }
  return out;
}

}  // namespace

double gelman_rubin(const std::vector<Eigen::VectorXd>& chains, RhatVariant variant) {
  if (chains.size() < 2) throw InputError("gelman_rubin needs at least two chains");
  if (variant == RhatVariant::split) return gelman_rubin(split_halves(chains));

  const Eigen::Index n = chains.front().size();
  if (n < 2) throw InputError("gelman_rubin needs chains of length >= 2");
  for (const auto& c : chains)
    if (c.size() != n) throw InputError("gelman_rubin needs equal-length chains");

  const auto m = static_cast<Eigen::Index>(chains.size());
  Eigen::VectorXd means(m);
  Eigen::VectorXd vars(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& c = chains[static_cast<std::size_t>(j)];
    means(j) = c.mean();
    vars(j) = (c.array() - means(j)).square().sum() / static_cast<double>(n - 1);
  }
  const double within = vars.mean();
  const double between =
      static_cast<double>(n) * (means.array() - means.mean()).square().sum() / static_cast<double>(m - 1);
  const double nn = static_cast<double>(n);
  const double pooled = (nn - 1.0) / nn * within + between / nn;
  if (within == 0.0)
    return between == 0.0 ? std::sqrt((nn - 1.0) / nn) : std::numeric_limits<double>::infinity();
  return std::sqrt(pooled / within);
}

Interval hpd_interval(Eigen::VectorXd samples, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw InputError("hpd mass must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(samples.size());
  const auto needed = static_cast<std::size_t>(std::ceil(1.0 / (1.0 - mass) - 1e-9));
  if (n < needed || n == 0)
    throw InputError("hpd_interval: " + std::to_string(n) + " samples, need at least " +
                     std::to_string(needed));
  std::sort(samples.data(), samples.data() + samples.size());

  // Window of k order statistics; the small slack keeps 0.6 * 5 at 3.
  auto k = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);
  std::size_t best = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + k <= n; ++i) {
    const double width = samples(static_cast<Eigen::Index>(i + k - 1)) - samples(static_cast<Eigen::Index>(i));
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {samples(static_cast<Eigen::Index>(best)), samples(static_cast<Eigen::Index>(best + k - 1))};
}

const ParameterSummary* ChainSummary::find(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return &p;
  return nullptr;
}

ParameterSummary summarize(std::string name, const std::vector<Eigen::VectorXd>& chains,
                           double mass, RhatVariant variant) {
  if (chains.empty()) throw InputError("summarize: no chains");
  Eigen::Index total = 0;
  for (const auto& c : chains) total += c.size();
  Eigen::VectorXd pooled(total);
  Eigen::Index off = 0;
  for (const auto& c : chains) {
    pooled.segment(off, c.size()) = c;
    off += c.size();
  }

  ParameterSummary s;
  s.name = std::move(name);
  s.mean = pooled.mean();
  s.sd = total > 1 ? std::sqrt((pooled.array() - s.mean).square().sum() / static_cast<double>(total - 1))
                   : 0.0;
  s.hpd = hpd_interval(pooled, mass);
  if (chains.size() >= 2) s.rhat = gelman_rubin(chains, variant);
  return s;
}

}  // namespace lsinf
