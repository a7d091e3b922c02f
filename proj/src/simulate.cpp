#include "lsinf/simulate.hpp"

#include "lsinf/likelihood.hpp"

#include <cmath>
#include <vector>

namespace lsinf {
namespace {

struct Cluster {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
};

Eigen::Matrix2d isotropic(double sd) { return sd * sd * Eigen::Matrix2d::Identity(); }

Eigen::Matrix2d correlated(double sd, double rho) {
  Eigen::Matrix2d c;
  c << 1.0, rho, rho, 1.0;
  return sd * sd * c;
}

const Eigen::Vector2d kMu1(0.0, 1.0);
const Eigen::Vector2d kMu2(1.0, -1.0);
const Eigen::Vector2d kMu3(-1.0, -1.0);
const Eigen::Vector2d kOrigin(0.0, 0.0);

std::vector<Cluster> person_clusters(int count) {
  std::vector<Cluster> out{{kMu1, isotropic(0.2)}, {kMu2, isotropic(0.2)}, {kMu3, isotropic(0.2)}};
  if (count == 4) out.push_back({kOrigin, isotropic(0.2)});
  return out;
}

std::vector<Cluster> item_clusters(int count) {
  std::vector<Cluster> out{{kMu1, isotropic(0.1)},
                           {kMu2, correlated(0.1, -0.9)},
                           {kMu3, correlated(0.1, 0.9)}};
  if (count == 4) out.push_back({kOrigin, isotropic(0.1)});
  return out;
}

std::vector<Cluster> two_cluster_network() {
  return {{Eigen::Vector2d(0.0, 1.0), isotropic(0.2)}, {Eigen::Vector2d(0.0, -1.0), isotropic(0.2)}};
}

// Members are assigned to clusters in equal consecutive index blocks.
void draw_mixture(const std::vector<Cluster>& clusters, Eigen::Index count, Rng& rng,
                  LatentConfig& pos, Eigen::VectorXi& label) {
  const auto g = static_cast<Eigen::Index>(clusters.size());
  if (count % g != 0) throw InputError("cluster sizes must divide evenly");
  const Eigen::Index block = count / g;
  pos.resize(count, kLatentDim);
  label.resize(count);
  std::normal_distribution<double> normal;
  for (Eigen::Index c = 0; c < g; ++c) {
    const auto& cl = clusters[static_cast<std::size_t>(c)];
    const Eigen::Matrix2d chol = cl.cov.llt().matrixL();
    for (Eigen::Index r = c * block; r < (c + 1) * block; ++r) {
      const Eigen::Vector2d e(normal(rng), normal(rng));
      pos.row(r) = (cl.mean + chol * e).transpose();
      label(r) = static_cast<int>(c);
    }
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  if (text == "1.1") return Scenario::s1_1;
  if (text == "1.2") return Scenario::s1_2;
  if (text == "1.3") return Scenario::s1_3;
  if (text == "2") return Scenario::s2;
  if (text == "3") return Scenario::s3;
  throw InputError("unknown scenario '" + std::string(text) + "' (expected 1.1, 1.2, 1.3, 2 or 3)");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::s1_1: return "1.1";
    case Scenario::s1_2: return "1.2";
    case Scenario::s1_3: return "1.3";
    case Scenario::s2: return "2";
    case Scenario::s3: return "3";
  }
  return "?";
}

ScenarioSpec ScenarioSpec::make(Scenario id, std::uint64_t seed, std::optional<double> lambda) {
  ScenarioSpec spec;
  spec.id = id;
  spec.seed = seed;
  spec.lambda = lambda;
  spec.n = id == Scenario::s1_2 ? 400 : 300;
  spec.p = id == Scenario::s1_3 ? 40 : 30;
  spec.validate();
  return spec;
}

void ScenarioSpec::validate() const {
  const Eigen::Index want_n = id == Scenario::s1_2 ? 400 : 300;
  const Eigen::Index want_p = id == Scenario::s1_3 ? 40 : 30;
  if (n != want_n || p != want_p)
    throw InputError("scenario " + to_string(id) + " requires n=" + std::to_string(want_n) +
                     ", p=" + std::to_string(want_p));
  if (id == Scenario::s3) {
    if (!lambda) throw InputError("scenario 3 requires lambda");
    bool known = false;
    for (double l : kScenario3Lambdas) known = known || std::abs(*lambda - l) < 1e-12;
    if (!known) throw InputError("invalid lambda " + std::to_string(*lambda));
  } else if (lambda) {
    throw InputError("lambda applies to scenario 3 only");
  }
}

ScenarioLatents generate_latents(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng = make_stream(spec.seed, 10);
  ScenarioLatents out;
  switch (spec.id) {
    case Scenario::s1_1:
    case Scenario::s1_3:
    case Scenario::s3:
      draw_mixture(person_clusters(3), spec.n, rng, out.z_social, out.social_cluster);
      break;
    case Scenario::s1_2:
      draw_mixture(person_clusters(4), spec.n, rng, out.z_social, out.social_cluster);
      break;
    case Scenario::s2:
      draw_mixture(two_cluster_network(), spec.n, rng, out.z_social, out.social_cluster);
      break;
  }
  draw_mixture(item_clusters(spec.id == Scenario::s1_3 ? 4 : 3), spec.p, rng, out.w,
               out.item_cluster);

  if (spec.id == Scenario::s2) {
    draw_mixture(person_clusters(3), spec.n, rng, out.z_item_side, out.item_side_cluster);
  } else {
    const double scale = spec.id == Scenario::s3 ? *spec.lambda : 1.0;
    out.z_item_side = scale * out.z_social;
    out.item_side_cluster = out.social_cluster;
  }
  return out;
}

NetworkData sample_network(const LatentConfig& z, double alpha, double gamma, Rng& rng) {
  const Eigen::Index n = z.rows();
  BinaryMatrix y = BinaryMatrix::Zero(n, n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = k + 1; l < n; ++l) {
      const double prob = logistic(alpha - gamma * (z.row(k) - z.row(l)).norm());
      if (unif(rng) < prob) y(k, l) = y(l, k) = 1;
    }
  return NetworkData(std::move(y));
}

ItemResponseData sample_responses(const LatentConfig& z, const LatentConfig& w,
                                  const Eigen::VectorXd& beta, const Eigen::VectorXd& theta,
                                  double delta, Rng& rng) {
  const Eigen::Index n = z.rows();
  const Eigen::Index p = w.rows();
  BinaryMatrix x(n, p);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < p; ++i) {
      const double prob = logistic(beta(i) + theta(k) - delta * (z.row(k) - w.row(i)).norm());
      x(k, i) = unif(rng) < prob ? 1 : 0;
    }
  return ItemResponseData(std::move(x));
}

GeneratedPair generate_pair(const ScenarioSpec& spec) {
  GeneratedPair out;
  out.truth.latents = generate_latents(spec);

  Rng scalars = make_stream(spec.seed, 11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  out.truth.alpha = unif(scalars);
  out.truth.beta.resize(spec.p);
  for (auto& b : out.truth.beta) b = unif(scalars);
  out.truth.theta.resize(spec.n);
  for (auto& t : out.truth.theta) t = unif(scalars);

  Rng net_rng = make_stream(spec.seed, 12);
  out.net = sample_network(out.truth.latents.z_social, out.truth.alpha, out.truth.gamma, net_rng);

  Rng resp_rng = make_stream(spec.seed, 13);
  out.resp = sample_responses(out.truth.latents.z_item_side, out.truth.latents.w, out.truth.beta,
                              out.truth.theta, out.truth.delta, resp_rng);
  return out;
}

Eigen::MatrixXd true_response_probabilities(const GroundTruth& truth) {
  const auto& z = truth.latents.z_item_side;
  const auto& w = truth.latents.w;
  Eigen::MatrixXd prob(z.rows(), w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index k = 0; k < z.rows(); ++k)
      prob(k, i) = logistic(truth.beta(i) + truth.theta(k) - truth.delta * (z.row(k) - w.row(i)).norm());
  return prob;
}

}  // namespace lsinf
