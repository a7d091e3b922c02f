#pragma once

// Static SVG latent-space maps.

#include "lsinf/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lsinf {

struct LatentMap {
  std::string title;
  LatentConfig respondents;
  /// Cluster label per respondent; empty draws every point in one neutral color.
  Eigen::VectorXi respondent_groups;
  /// Optional item positions, drawn as text labels.
  LatentConfig items;
  std::vector<std::string> item_labels;
};

void write_svg(std::ostream& out, const LatentMap& map);

}  // namespace lsinf
