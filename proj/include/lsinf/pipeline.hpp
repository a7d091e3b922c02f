#pragma once

// Two-step estimation: network model -> aligned point estimate of Z ->
// adapted item response model with Z fixed -> diagnostics and baseline.

#include "lsinf/diagnostics.hpp"
#include "lsinf/io.hpp"
#include "lsinf/lnam.hpp"
#include "lsinf/lsirm_sampler.hpp"
#include "lsinf/lsm_sampler.hpp"
#include "lsinf/simulate.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lsinf {

struct RunConfig {
  // Exactly one data source: both paths, or a scenario.
  std::optional<std::filesystem::path> network_path;
  std::optional<std::filesystem::path> responses_path;
  std::optional<ScenarioSpec> scenario;

  McmcConfig step1;
  McmcConfig step2;
  Hyperparams hp;
  int chains = 1;
  std::filesystem::path out_dir = "lsinf_out";
  bool emit_plots = false;
  bool write_draws = true;
  RhatVariant rhat = RhatVariant::classic;
  LnamOptions lnam;

  /// Schedule used for real data: 60000 / 10000 / 5.
  static McmcConfig real_data_schedule();
  /// Schedule used for simulated data: 30000 / 5000 / 5.
  static McmcConfig simulation_schedule();

  void validate() const;
};

/// Seed of chain `c`; chain 0 uses the base seed.
std::uint64_t chain_seed(std::uint64_t base, int chain);

struct FitResult {
  std::vector<LsmDraws> step1;   // aligned to one common reference
  LatentConfig zhat;             // pooled posterior mean of the aligned z draws
  std::vector<LsirmDraws> step2; // aligned to one common item reference
  AdaptedLsirmParams posterior;  // pooled posterior means
  AutocorrFit lnam;
  SummaryReport summary;
};

/// Runs both steps and the baseline in memory. Chains run concurrently.
FitResult fit_pair(const NetworkData& net, const ItemResponseData& resp, const RunConfig& cfg);

struct PipelineOutput {
  FitResult fit;
  std::optional<GroundTruth> truth;
  std::vector<std::filesystem::path> artifacts;
};

/// Loads or generates the data, fits, and writes to `cfg.out_dir`:
/// summary.txt first, then draw tables, then (optionally) SVG maps.
PipelineOutput run_pipeline(const RunConfig& cfg);

/// Writes the simulated pair as network.csv / responses.csv / truth.txt.
std::vector<std::filesystem::path> write_generated_pair(const GeneratedPair& pair,
                                                        const std::filesystem::path& dir);

// Exit codes shared by the command-line tools.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInternal = 4;

struct ErrorRecord {
  std::string kind;  // "input", "numerical", "internal"
  std::string message;
  int exit_code = kExitInternal;
};

/// Classifies the active exception. Call only inside a catch block.
ErrorRecord classify_current_exception();

/// One-line JSON object: {"error":kind,"message":...,"exit_code":n}.
std::string to_json(const ErrorRecord& err);

}  // namespace lsinf
