#include "lsinf/types.hpp"

#include <string>

namespace lsinf {

NetworkData::NetworkData(BinaryMatrix adjacency) : adjacency_(std::move(adjacency)) {
  const Eigen::Index n = adjacency_.rows();
  if (adjacency_.cols() != n)
    throw InputError("adjacency must be square, got " + std::to_string(n) + "x" +
                     std::to_string(adjacency_.cols()));
  for (Eigen::Index k = 0; k < n; ++k) {
    if (adjacency_(k, k) != 0) throw InputError("self-tie at respondent " + std::to_string(k));
    for (Eigen::Index l = k + 1; l < n; ++l) {
      if (adjacency_(k, l) > 1) throw InputError("adjacency entries must be 0 or 1");
      if (adjacency_(k, l) != adjacency_(l, k))
        throw InputError("adjacency is not symmetric at (" + std::to_string(k) + "," +
                         std::to_string(l) + ")");
    }
  }
}

std::size_t NetworkData::edge_count() const {
  return static_cast<std::size_t>(adjacency_.cast<long>().sum() / 2);
}

ItemResponseData::ItemResponseData(BinaryMatrix responses) : responses_(std::move(responses)) {
  if ((responses_.array() > 1).any()) throw InputError("responses must be 0 or 1");
}

void Hyperparams::validate() const {
  const bool ok = sigma_alpha > 0 && sigma_beta > 0 && sigma_gamma > 0 && sigma_delta > 0 &&
                  a_sigma > 0 && b_sigma > 0;
  if (!ok) throw InputError("hyperparameters must all be strictly positive");
}

void require_matching(const NetworkData& net, const ItemResponseData& resp) {
  if (net.size() != resp.respondents())
    throw InputError("dimension mismatch: network has " + std::to_string(net.size()) +
                     " respondents, responses have " + std::to_string(resp.respondents()));
}

}  // namespace lsinf
