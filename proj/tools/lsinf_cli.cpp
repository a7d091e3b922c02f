// Command-line front end: fit, simulate, replicate, sweep, lnam.

#include "lsinf/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace lsinf;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int chains = 1;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> burn;
  std::optional<std::size_t> thin;
  std::string out = "lsinf_out";
  bool emit_plots = false;
  bool no_draws = false;
  bool split_rhat = false;
  bool row_normalize = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
  app->add_option("--chains", c.chains, "Chains per step")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--iters", c.iters, "Total iterations per chain");
  app->add_option("--burn", c.burn, "Burn-in iterations");
  app->add_option("--thin", c.thin, "Keep every thin-th post-burn-in draw");
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_flag("--emit-plots", c.emit_plots, "Write SVG latent-space maps");
  app->add_flag("--no-draws", c.no_draws, "Skip the per-draw tables");
  app->add_flag("--split-rhat", c.split_rhat, "Use split chains for R-hat");
  app->add_flag("--row-normalize", c.row_normalize, "Row-normalize W for the lnam baseline");
}

RunConfig make_config(const Common& c, McmcConfig schedule) {
  RunConfig cfg;
  if (c.iters) schedule.total_iters = *c.iters;
  if (c.burn) schedule.burn_in = *c.burn;
  if (c.thin) schedule.thin = *c.thin;
  schedule.seed = c.seed;
  cfg.step1 = schedule;
  cfg.step2 = schedule;
  cfg.chains = c.chains;
  cfg.out_dir = c.out;
  cfg.emit_plots = c.emit_plots;
  cfg.write_draws = !c.no_draws;
  cfg.rhat = c.split_rhat ? RhatVariant::split : RhatVariant::classic;
  cfg.lnam.row_normalize = c.row_normalize;
  return cfg;
}

ScenarioSpec make_spec(const std::string& scenario, std::optional<double> lambda,
                       std::uint64_t seed) {
  const Scenario id = parse_scenario(scenario);
  if (id == Scenario::s3 && !lambda) lambda = 1.0;
  if (id != Scenario::s3 && lambda) throw InputError("--lambda applies to scenario 3 only");
  return ScenarioSpec::make(id, seed, lambda);
}

std::string rep_name(int r) {
  std::string s = std::to_string(r + 1);
  return "rep_" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

std::string lambda_name(double lambda) { return "lambda_" + format_number(lambda); }

void print_summary(const SummaryReport& s) {
  for (const char* key : {"delta.mean", "delta.hpd_low", "delta.hpd_high", "gamma.mean",
                          "rhat.delta", "rhat.gamma", "lnam.rho"})
    if (s.contains(key)) std::cout << key << '=' << s.at(key) << '\n';
}

const char* kReplicateHeader =
    "replicate,seed,delta_mean,delta_hpd_low,delta_hpd_high,gamma_mean,lnam_rho,p_diff_mean\n";

void replicate_row(std::ostream& out, int r, std::uint64_t seed, const SummaryReport& s) {
  out << r + 1 << ',' << seed << ',' << s.at("delta.mean") << ',' << s.at("delta.hpd_low") << ','
      << s.at("delta.hpd_high") << ',' << s.at("gamma.mean") << ',' << s.at("lnam.rho") << ','
      << s.at("fit.p_diff_mean") << '\n';
}

struct ReplicateStats {
  Eigen::VectorXd delta;
  int hpd_excludes_zero = 0;
};

ReplicateStats run_replicates(const Common& c, const std::string& scenario,
                              std::optional<double> lambda, int replicates,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream table(dir / "replicates.csv");
  if (!table) throw InputError("cannot write " + (dir / "replicates.csv").string());
  table << kReplicateHeader;
  ReplicateStats stats;
  stats.delta.resize(replicates);
  for (int r = 0; r < replicates; ++r) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(r);
    Common rc = c;
    rc.seed = seed;
    rc.out = (dir / rep_name(r)).string();
    RunConfig cfg = make_config(rc, RunConfig::simulation_schedule());
    cfg.scenario = make_spec(scenario, lambda, seed);
    const auto result = run_pipeline(cfg);
    const auto& s = result.fit.summary;
    replicate_row(table, r, seed, s);
    table.flush();
    stats.delta(r) = s.number("delta.mean");
    if (s.number("delta.hpd_low") > 0.0 || s.number("delta.hpd_high") < 0.0) ++stats.hpd_excludes_zero;
    std::cerr << "replicate " << r + 1 << '/' << replicates << " delta.mean=" << s.at("delta.mean")
              << " gamma.mean=" << s.at("gamma.mean") << '\n';
  }
  return stats;
}

int report_error(const ErrorRecord& err, const std::string& out_dir) {
  const std::string json = to_json(err);
  std::cerr << json << '\n';
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!ec) {
    std::ofstream f(std::filesystem::path(out_dir) / "error.json");
    if (f) f << json << '\n';
  }
  return err.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step latent space estimation of social influence"};
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");
  app.require_subcommand(1);

  Common common;
  std::string network, responses, scenario = "1.1";
  std::optional<double> lambda;
  int replicates = 1;
  std::vector<double> lambdas(kScenario3Lambdas.begin(), kScenario3Lambdas.end());

  auto* fit = app.add_subcommand("fit", "Fit both steps to a network file and a response file");
  add_common(fit, common);
  fit->add_option("--network", network, "Edge list")->required()->check(CLI::ExistingFile);
  fit->add_option("--responses", responses, "Response matrix")->required()->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "Generate scenario datasets only");
  add_common(simulate, common);
  simulate->add_option("--scenario", scenario, "1.1, 1.2, 1.3, 2 or 3")->capture_default_str();
  simulate->add_option("--lambda", lambda, "Scenario 3 scale");
  simulate->add_option("--replicates", replicates)->check(CLI::PositiveNumber)->capture_default_str();

  auto* replicate = app.add_subcommand("replicate", "Generate and fit replicates of a scenario");
  add_common(replicate, common);
  replicate->add_option("--scenario", scenario, "1.1, 1.2, 1.3, 2 or 3")->capture_default_str();
  replicate->add_option("--lambda", lambda, "Scenario 3 scale");
  replicate->add_option("--replicates", replicates)->check(CLI::PositiveNumber)->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Scenario 3 over a grid of lambda values");
  add_common(sweep, common);
  sweep->add_option("--lambda", lambdas, "Lambda values")->capture_default_str();
  sweep->add_option("--replicates", replicates)->check(CLI::PositiveNumber)->capture_default_str();

  auto* lnam = app.add_subcommand("lnam", "Network autocorrelation baseline only");
  add_common(lnam, common);
  lnam->add_option("--network", network, "Edge list")->check(CLI::ExistingFile);
  lnam->add_option("--responses", responses, "Response matrix")->check(CLI::ExistingFile);
  lnam->add_option("--scenario", scenario, "Scenario to generate when no files are given");
  lnam->add_option("--lambda", lambda, "Scenario 3 scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit) {
      RunConfig cfg = make_config(common, RunConfig::real_data_schedule());
      cfg.network_path = network;
      cfg.responses_path = responses;
      const auto result = run_pipeline(cfg);
      print_summary(result.fit.summary);
    } else if (*simulate) {
      for (int r = 0; r < replicates; ++r) {
        const std::uint64_t seed = common.seed + static_cast<std::uint64_t>(r);
        const auto pair = generate_pair(make_spec(scenario, lambda, seed));
        const auto dir = replicates == 1 ? std::filesystem::path(common.out)
                                         : std::filesystem::path(common.out) / rep_name(r);
        for (const auto& p : write_generated_pair(pair, dir)) std::cout << p.string() << '\n';
      }
    } else if (*replicate) {
      const auto stats = run_replicates(common, scenario, lambda, replicates, common.out);
      std::cout << "replicates=" << replicates << '\n'
                << "delta.mean_of_means=" << format_number(stats.delta.mean()) << '\n'
                << "delta.min=" << format_number(stats.delta.minCoeff()) << '\n'
                << "delta.max=" << format_number(stats.delta.maxCoeff()) << '\n'
                << "delta.hpd_excludes_zero=" << stats.hpd_excludes_zero << '\n';
    } else if (*sweep) {
      std::filesystem::create_directories(common.out);
      std::ofstream table(std::filesystem::path(common.out) / "sweep.csv");
      if (!table) throw InputError("cannot write sweep.csv");
      table << "lambda,replicates,delta_mean,delta_min,delta_max,hpd_excludes_zero\n";
      for (double l : lambdas) {
        const auto dir = std::filesystem::path(common.out) / lambda_name(l);
        const auto stats = run_replicates(common, "3", l, replicates, dir);
        const std::string row = format_number(l) + ',' + std::to_string(replicates) + ',' +
                                format_number(stats.delta.mean()) + ',' +
                                format_number(stats.delta.minCoeff()) + ',' +
                                format_number(stats.delta.maxCoeff()) + ',' +
                                std::to_string(stats.hpd_excludes_zero);
        table << row << '\n';
        table.flush();
        std::cout << row << '\n';
      }
    } else if (*lnam) {
      NetworkData net;
      ItemResponseData resp;
      if (!network.empty() || !responses.empty()) {
        if (network.empty() || responses.empty())
          throw InputError("lnam needs both --network and --responses");
        net = load_network(std::filesystem::path(network)).net;
        resp = load_responses(std::filesystem::path(responses));
      } else {
        auto pair = generate_pair(make_spec(scenario, lambda, common.seed));
        net = std::move(pair.net);
        resp = std::move(pair.resp);
      }
      require_matching(net, resp);
      LnamOptions opts;
      opts.row_normalize = common.row_normalize;
      const auto f = fit_lnam(behavior_counts(resp), net.as_double(), std::nullopt, opts);
      SummaryReport s;
      s.add("lnam.rho", f.rho);
      s.add("lnam.rho_se", f.rho_se);
      s.add("lnam.ci_low", f.rho_ci.lower);
      s.add("lnam.ci_high", f.rho_ci.upper);
      s.add("lnam.sigma2", f.sigma2);
      s.add("lnam.log_likelihood", f.log_likelihood);
      s.add("lnam.stability_low", f.stability.lower);
      s.add("lnam.stability_high", f.stability.upper);
      s.add("lnam.at_boundary", f.at_boundary ? "true" : "false");
      s.write(std::cout);
    }
  } catch (...) {
    return report_error(classify_current_exception(), common.out);
  }
  return kExitOk;
}
