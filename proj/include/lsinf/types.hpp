#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lsinf {

/// Bad input: malformed files, dimension mismatches, out-of-domain values.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Latent dimension. Fixed at two throughout.
inline constexpr int kLatentDim = 2;

template <typename Scalar>
using Positions = Eigen::Matrix<Scalar, Eigen::Dynamic, kLatentDim>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// m x 2 coordinates of respondents or items in the latent space.
using LatentConfig = Positions<double>;

/// Undirected binary peer network without self-ties.
class NetworkData {
 public:
  NetworkData() = default;

  /// Validates symmetry, zero diagonal and 0/1 entries.
  explicit NetworkData(BinaryMatrix adjacency);

  Eigen::Index size() const { return adjacency_.rows(); }
  const BinaryMatrix& adjacency() const { return adjacency_; }
  bool tie(Eigen::Index k, Eigen::Index l) const { return adjacency_(k, l) != 0; }
  std::size_t edge_count() const;

  /// Adjacency as doubles, for kernels that mix it into arithmetic.
  Eigen::MatrixXd as_double() const { return adjacency_.cast<double>(); }

  friend bool operator==(const NetworkData& a, const NetworkData& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  BinaryMatrix adjacency_;
};

/// n x p binary item responses; rows are respondents.
class ItemResponseData {
 public:
  ItemResponseData() = default;
  explicit ItemResponseData(BinaryMatrix responses);

  Eigen::Index respondents() const { return responses_.rows(); }
  Eigen::Index items() const { return responses_.cols(); }
  const BinaryMatrix& responses() const { return responses_; }
  Eigen::MatrixXd as_double() const { return responses_.cast<double>(); }

  friend bool operator==(const ItemResponseData& a, const ItemResponseData& b) {
    return a.responses_ == b.responses_;
  }

 private:
  BinaryMatrix responses_;
};

struct LsmParams {
  double alpha = 0.0;
  double gamma = 1.0;
  LatentConfig z;
};

struct AdaptedLsirmParams {
  Eigen::VectorXd beta;
  Eigen::VectorXd theta;
  double sigma2 = 1.0;
  double delta = 0.0;
  LatentConfig w;
};

struct Hyperparams {
  double sigma_alpha = 2.5;
  double sigma_beta = 2.5;
  double sigma_gamma = 1.0;  // SD of log(gamma)
  double sigma_delta = 1.0;
  double a_sigma = 0.001;
  double b_sigma = 0.001;

  /// Throws InputError unless every field is strictly positive.
  void validate() const;
};

void require_matching(const NetworkData& net, const ItemResponseData& resp);

}  // namespace lsinf
