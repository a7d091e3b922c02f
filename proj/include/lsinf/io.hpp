#pragma once

// File formats.
//
// Edge list:
//   # nodes=<n> index_base=<0|1>
//   source,target
//   1,2
//   ...
// Directed nominations are OR-symmetrized; self-loops are dropped and counted.
//
// Response matrix: a header row of item ids, then one row of 0/1 values per
// respondent. Missing values are rejected.
//
// Summary: one `key=value` per line, keys in insertion order.

#include "lsinf/lsirm_sampler.hpp"
#include "lsinf/lsm_sampler.hpp"
#include "lsinf/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lsinf {

struct LoadedNetwork {
  NetworkData net;
  std::size_t self_loops_dropped = 0;
};

LoadedNetwork load_network(std::istream& in);
LoadedNetwork load_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const NetworkData& net, int index_base = 1);

/// The header cells are copied to `item_ids` when given.
ItemResponseData load_responses(std::istream& in, std::vector<std::string>* item_ids = nullptr);
ItemResponseData load_responses(const std::filesystem::path& path,
                                std::vector<std::string>* item_ids = nullptr);
void write_responses(std::ostream& out, const ItemResponseData& resp);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_number(double x);

/// chain,draw,alpha,gamma,log_posterior
void write_lsm_scalars(std::ostream& out, const std::vector<LsmDraws>& chains);
/// chain,draw,delta,sigma2,log_posterior
void write_lsirm_scalars(std::ostream& out, const std::vector<LsirmDraws>& chains);
/// chain,draw,entity,dim,value (long format)
void write_latent_draws(std::ostream& out, const std::vector<const std::vector<LatentConfig>*>& chains);
/// chain,draw,index,value for a draws x entities matrix per chain
void write_vector_draws(std::ostream& out, const std::vector<const Eigen::MatrixXd*>& chains);

class SummaryReport {
 public:
  void add(const std::string& key, double value) { add(key, format_number(value)); }
  void add(const std::string& key, std::string value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  /// Value for `key`; throws InputError if absent.
  const std::string& at(const std::string& key) const;
  double number(const std::string& key) const;
  bool contains(const std::string& key) const;

  void write(std::ostream& out) const;
  static SummaryReport read(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace lsinf
