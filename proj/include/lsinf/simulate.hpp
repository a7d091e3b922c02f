#pragma once

// Synthetic paired (network, item response) datasets drawn from Gaussian
// mixture latent geometries with gamma = delta = 1.

#include "lsinf/mcmc.hpp"
#include "lsinf/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lsinf {

enum class Scenario {
  s1_1,  // 3 person clusters, 3 item clusters, shared person geometry
  s1_2,  // adds a fourth person cluster at the origin (n = 400)
  s1_3,  // adds a fourth item cluster at the origin (p = 40)
  s2,    // 2-cluster network geometry vs 3-cluster response geometry
  s3,    // response-side persons are the network positions scaled by lambda
};

inline constexpr std::array<double, 8> kScenario3Lambdas{0.01, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0};

Scenario parse_scenario(std::string_view text);
std::string to_string(Scenario s);

struct ScenarioSpec {
  Scenario id = Scenario::s1_1;
  Eigen::Index n = 300;
  Eigen::Index p = 30;
  std::optional<double> lambda;
  std::uint64_t seed = 1;

  /// Scenario with the standard sizes for `id`. Lambda is required for s3 only.
  static ScenarioSpec make(Scenario id, std::uint64_t seed, std::optional<double> lambda = {});
  void validate() const;
};

struct ScenarioLatents {
  LatentConfig z_social;     // generates the network
  LatentConfig z_item_side;  // respondent positions that generate the responses
  LatentConfig w;            // item positions
  Eigen::VectorXi social_cluster;
  Eigen::VectorXi item_side_cluster;
  Eigen::VectorXi item_cluster;
};

struct GroundTruth {
  double alpha = 0.0;
  double gamma = 1.0;
  double delta = 1.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd theta;
  ScenarioLatents latents;
};

struct GeneratedPair {
  NetworkData net;
  ItemResponseData resp;
  GroundTruth truth;
};

ScenarioLatents generate_latents(const ScenarioSpec& spec);
GeneratedPair generate_pair(const ScenarioSpec& spec);

/// Independent Bernoulli ties with P(y_kl = 1) = logistic(alpha - gamma |z_k - z_l|).
NetworkData sample_network(const LatentConfig& z, double alpha, double gamma, Rng& rng);

/// Bernoulli responses with P(x_ki = 1) = logistic(beta_i + theta_k - delta |z_k - w_i|).
ItemResponseData sample_responses(const LatentConfig& z, const LatentConfig& w,
                                  const Eigen::VectorXd& beta, const Eigen::VectorXd& theta,
                                  double delta, Rng& rng);

/// Generating response probabilities of every cell.
Eigen::MatrixXd true_response_probabilities(const GroundTruth& truth);

}  // namespace lsinf
