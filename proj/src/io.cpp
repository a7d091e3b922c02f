#include "lsinf/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lsinf {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_long(const std::string& text, long& value) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

InputError line_error(std::size_t line, const std::string& what) {
  return InputError("line " + std::to_string(line) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

LoadedNetwork load_network(std::istream& in) {
  long nodes = -1;
  long base = -1;
  std::vector<std::pair<long, long>> edges;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_columns = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        long value = 0;
        if (key != "nodes" && key != "index_base") continue;
        if (!parse_long(tok.substr(eq + 1), value))
          throw line_error(line_no, "bad header value '" + tok + "'");
        (key == "nodes" ? nodes : base) = value;
      }
      continue;
    }
    const auto cells = split_commas(line);
    if (!seen_columns && edges.empty() && cells.size() == 2 && cells[0] == "source" &&
        cells[1] == "target") {
      seen_columns = true;
      continue;
    }
    long s = 0;
    long t = 0;
    if (cells.size() != 2 || !parse_long(cells[0], s) || !parse_long(cells[1], t))
      throw line_error(line_no, "expected 'source,target' integers, got '" + line + "'");
    edges.emplace_back(s, t);
  }
  if (nodes <= 0) throw InputError("edge list header must declare nodes=<n> (n > 0)");
  if (base != 0 && base != 1) throw InputError("edge list header must declare index_base=0 or 1");

  LoadedNetwork out;
  BinaryMatrix adj = BinaryMatrix::Zero(nodes, nodes);
  for (const auto& [s, t] : edges) {
    const long k = s - base;
    const long l = t - base;
    if (k < 0 || k >= nodes || l < 0 || l >= nodes)
      throw InputError("respondent id out of range in edge (" + std::to_string(s) + "," +
                       std::to_string(t) + ")");
    if (k == l) {
      ++out.self_loops_dropped;
      continue;
    }
    adj(k, l) = adj(l, k) = 1;
  }
  out.net = NetworkData(std::move(adj));
  return out;
}

LoadedNetwork load_network(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_network(in);
}

void write_network(std::ostream& out, const NetworkData& net, int index_base) {
  out << "# nodes=" << net.size() << " index_base=" << index_base << "\n";
  out << "source,target\n";
  for (Eigen::Index k = 0; k < net.size(); ++k)
    for (Eigen::Index l = k + 1; l < net.size(); ++l)
      if (net.tie(k, l)) out << k + index_base << ',' << l + index_base << '\n';
}

ItemResponseData load_responses(std::istream& in, std::vector<std::string>* item_ids) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t items = 0;
  std::vector<std::vector<std::uint8_t>> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (items == 0) {
      items = cells.size();
      if (item_ids) *item_ids = cells;
      continue;
    }
    if (cells.size() != items)
      throw line_error(line_no, "expected " + std::to_string(items) + " values, got " +
                                    std::to_string(cells.size()));
    std::vector<std::uint8_t> row;
    row.reserve(items);
    for (const auto& c : cells) {
      if (c == "0") {
        row.push_back(0);
      } else if (c == "1") {
        row.push_back(1);
      } else if (c.empty() || c == "NA" || c == "na" || c == "." || c == "?") {
        throw line_error(line_no, "missing value");
      } else {
        throw line_error(line_no, "response '" + c + "' is not 0 or 1");
      }
    }
    rows.push_back(std::move(row));
  }
  if (items == 0) throw InputError("response file has no header row");
  BinaryMatrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(items));
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t i = 0; i < items; ++i)
      x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][i];
  return ItemResponseData(std::move(x));
}

ItemResponseData load_responses(const std::filesystem::path& path,
                                std::vector<std::string>* item_ids) {
  auto in = open_input(path);
  return load_responses(in, item_ids);
}

void write_responses(std::ostream& out, const ItemResponseData& resp) {
  for (Eigen::Index i = 0; i < resp.items(); ++i) out << (i ? "," : "") << "item_" << i + 1;
  out << '\n';
  for (Eigen::Index k = 0; k < resp.respondents(); ++k) {
    for (Eigen::Index i = 0; i < resp.items(); ++i)
      out << (i ? "," : "") << static_cast<int>(resp.responses()(k, i));
    out << '\n';
  }
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_lsm_scalars(std::ostream& out, const std::vector<LsmDraws>& chains) {
  out << "chain,draw,alpha,gamma,log_posterior\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& d = chains[c];
    for (Eigen::Index t = 0; t < d.alpha.size(); ++t)
      out << c << ',' << t << ',' << format_number(d.alpha(t)) << ',' << format_number(d.gamma(t))
          << ',' << format_number(d.log_posterior(t)) << '\n';
  }
}

void write_lsirm_scalars(std::ostream& out, const std::vector<LsirmDraws>& chains) {
  out << "chain,draw,delta,sigma2,log_posterior\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& d = chains[c];
    for (Eigen::Index t = 0; t < d.delta.size(); ++t)
      out << c << ',' << t << ',' << format_number(d.delta(t)) << ',' << format_number(d.sigma2(t))
          << ',' << format_number(d.log_posterior(t)) << '\n';
  }
}

void write_latent_draws(std::ostream& out, const std::vector<const std::vector<LatentConfig>*>& chains) {
  out << "chain,draw,entity,dim,value\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& draws = *chains[c];
    for (std::size_t t = 0; t < draws.size(); ++t)
      for (Eigen::Index e = 0; e < draws[t].rows(); ++e)
        for (int d = 0; d < kLatentDim; ++d)
          out << c << ',' << t << ',' << e + 1 << ',' << d + 1 << ','
              << format_number(draws[t](e, d)) << '\n';
  }
}

void write_vector_draws(std::ostream& out, const std::vector<const Eigen::MatrixXd*>& chains) {
  out << "chain,draw,index,value\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& m = *chains[c];
    for (Eigen::Index t = 0; t < m.rows(); ++t)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << c << ',' << t << ',' << j + 1 << ',' << format_number(m(t, j)) << '\n';
  }
}

void SummaryReport::add(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = std::move(value);
      return;
    }
  entries_.emplace_back(key, std::move(value));
}

bool SummaryReport::contains(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return true;
  return false;
}

const std::string& SummaryReport::at(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return e.second;
  throw InputError("summary has no key '" + key + "'");
}

double SummaryReport::number(const std::string& key) const {
  const std::string& text = at(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InputError("summary key '" + key + "' is not numeric");
  return v;
}

void SummaryReport::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

SummaryReport SummaryReport::read(std::istream& in) {
  SummaryReport r;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw line_error(line_no, "expected key=value");
    r.add(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return r;
}

}  // namespace lsinf
