#include "lsinf/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>

namespace lsinf {
namespace {

constexpr double kSize = 560.0;
constexpr double kPad = 40.0;
constexpr std::array<const char*, 6> kPalette{"#1b9e77", "#d95f02", "#7570b3",
                                              "#e7298a", "#66a61e", "#e6ab02"};
constexpr const char* kNeutral = "#4d4d4d";

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const LatentMap& map) {
  if (map.respondents.rows() == 0 && map.items.rows() == 0)
    throw InputError("latent map has nothing to draw");
  if (map.respondent_groups.size() != 0 && map.respondent_groups.size() != map.respondents.rows())
    throw InputError("latent map: one group label per respondent expected");

  // Common square extent so distances are not distorted.
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const LatentConfig* pts : {&map.respondents, &map.items}) {
    if (pts->rows() == 0) continue;
    const double a = pts->minCoeff(), b = pts->maxCoeff();
    lo = first ? a : std::min(lo, a);
    hi = first ? b : std::max(hi, b);
    first = false;
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double scale = (kSize - 2 * kPad) / (hi - lo);
  auto px = [&](double x) { return coord(kPad + (x - lo) * scale); };
  auto py = [&](double y) { return coord(kSize - kPad - (y - lo) * scale); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kSize / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << escape(map.title) << "</text>\n";
  out << "<line x1=\"" << px(0) << "\" y1=\"" << kPad << "\" x2=\"" << px(0) << "\" y2=\""
      << kSize - kPad << "\" stroke=\"#cccccc\"/>\n";
  out << "<line x1=\"" << kPad << "\" y1=\"" << py(0) << "\" x2=\"" << kSize - kPad << "\" y2=\""
      << py(0) << "\" stroke=\"#cccccc\"/>\n";

  for (Eigen::Index k = 0; k < map.respondents.rows(); ++k) {
    const char* color = kNeutral;
    if (map.respondent_groups.size() != 0)
      color = kPalette[static_cast<std::size_t>(map.respondent_groups(k)) % kPalette.size()];
    out << "<circle cx=\"" << px(map.respondents(k, 0)) << "\" cy=\"" << py(map.respondents(k, 1))
        << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
  }
  for (Eigen::Index i = 0; i < map.items.rows(); ++i) {
    const std::string label = static_cast<std::size_t>(i) < map.item_labels.size()
                                  ? map.item_labels[static_cast<std::size_t>(i)]
                                  : std::to_string(i + 1);
    out << "<text x=\"" << px(map.items(i, 0)) << "\" y=\"" << py(map.items(i, 1))
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
           "font-weight=\"bold\" fill=\"#b2182b\">"
        << escape(label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace lsinf
