// Acceptance run: one PASS/FAIL line per criterion.
//
// The fits use the simulation schedule 30000 / 5000 / thin 5 unless
// LSINF_ACCEPTANCE_SCHEDULE=reduced selects 6000 / 1000 / thin 5.

#include "lsinf/alignment.hpp"
#include "lsinf/diagnostics.hpp"
#include "lsinf/likelihood.hpp"
#include "lsinf/lnam.hpp"
#include "lsinf/lsirm_sampler.hpp"
#include "lsinf/lsm_sampler.hpp"
#include "lsinf/pipeline.hpp"
#include "lsinf/simulate.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lsinf;
namespace fs = std::filesystem;

namespace {

struct Schedule {
  std::string name;
  McmcConfig mcmc;
};

Schedule pick_schedule() {
  Schedule s{"full", RunConfig::simulation_schedule()};
  if (const char* env = std::getenv("LSINF_ACCEPTANCE_SCHEDULE"); env && std::string(env) == "reduced") {
    s.name = "reduced";
    s.mcmc.total_iters = 6000;
    s.mcmc.burn_in = 1000;
    s.mcmc.thin = 5;
  }
  return s;
}

const Schedule kSchedule = pick_schedule();
const auto kStart = std::chrono::steady_clock::now();

void progress(const std::string& what) {
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - kStart).count();
  std::fprintf(stderr, "[%7.1fs] %s\n", secs, what.c_str());
}

std::string fmt(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::vector<std::pair<int, Verdict>> g_results;

void report(int id, const Verdict& v) {
  progress("criterion " + std::to_string(id) + (v.pass ? " passed" : " failed"));
  g_results.emplace_back(id, v);
}

RunConfig fit_config(std::uint64_t seed, int chains = 1) {
  RunConfig cfg;
  cfg.step1 = kSchedule.mcmc;
  cfg.step2 = kSchedule.mcmc;
  cfg.step1.seed = seed;
  cfg.step2.seed = seed;
  cfg.chains = chains;
  return cfg;
}

struct ReplicateFit {
  double delta_mean = 0.0;
  Interval delta_hpd;
  double gamma_mean = 0.0;
  Eigen::MatrixXd p_diff;  // generating minus fitted response probabilities
};

ReplicateFit fit_replicate(const ScenarioSpec& spec) {
  const auto pair = generate_pair(spec);
  const auto fit = fit_pair(pair.net, pair.resp, fit_config(spec.seed));
  ReplicateFit r;
  r.delta_mean = fit.summary.number("delta.mean");
  r.delta_hpd = {fit.summary.number("delta.hpd_low"), fit.summary.number("delta.hpd_high")};
  r.gamma_mean = fit.summary.number("gamma.mean");
  r.p_diff = true_response_probabilities(pair.truth) - fit_statistic(fit.zhat, fit.posterior);
  progress("scenario " + to_string(spec.id) + (spec.lambda ? " lambda=" + fmt(*spec.lambda, 2) : "") +
           " seed " + std::to_string(spec.seed) + ": delta " + fmt(r.delta_mean) + " (" +
           fmt(r.delta_hpd.lower) + ", " + fmt(r.delta_hpd.upper) + "), gamma " + fmt(r.gamma_mean));
  return r;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// 1 and 2: Scenario 1.1 delta and gamma recovery over 10 replicates.
void scenario_1_1_recovery() {
  std::vector<ReplicateFit> reps;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    reps.push_back(fit_replicate(ScenarioSpec::make(Scenario::s1_1, seed)));

  Eigen::VectorXd delta(10), gamma(10);
  int excludes_zero = 0;
  for (int i = 0; i < 10; ++i) {
    delta(i) = reps[i].delta_mean;
    gamma(i) = reps[i].gamma_mean;
    excludes_zero += !reps[i].delta_hpd.contains(0.0);
  }
  Verdict c1;
  c1.require(delta.mean() >= 0.90 && delta.mean() <= 1.20,
             "mean of delta means " + fmt(delta.mean()) + " in [0.90, 1.20] (min " + fmt(delta.minCoeff()) +
                 ", max " + fmt(delta.maxCoeff()) + ")");
  c1.require(excludes_zero == 10, std::to_string(excludes_zero) + "/10 HPDs exclude 0");
  c1.detail += "; schedule " + kSchedule.name;
  report(1, c1);

  Verdict c2;
  c2.require(gamma.minCoeff() >= 0.8 && gamma.maxCoeff() <= 1.2,
             "gamma means in [" + fmt(gamma.minCoeff()) + ", " + fmt(gamma.maxCoeff()) + "] within [0.8, 1.2]");
  report(2, c2);
}

// 3 and 5: Scenario 3 lambda sweep, and model fit at lambda = 1.
void scenario_3_sweep() {
  const std::vector<double> lambdas{0.01, 0.2, 0.6, 1.0};
  std::vector<double> means;
  int hpd_total = 0, hpd_excludes = 0;
  std::vector<double> cells_at_one;
  for (double lambda : lambdas) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = fit_replicate(ScenarioSpec::make(Scenario::s3, seed, lambda));
      sum += r.delta_mean;
      ++hpd_total;
      hpd_excludes += !r.delta_hpd.contains(0.0);
      if (lambda == 1.0) cells_at_one.insert(cells_at_one.end(), r.p_diff.data(), r.p_diff.data() + r.p_diff.size());
    }
    means.push_back(sum / 5.0);
  }

  Verdict c3;
  bool increasing = true;
  std::string trend;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i > 0) increasing = increasing && means[i] > means[i - 1];
    trend += (i ? ", " : "") + fmt(means[i]);
  }
  c3.require(increasing, "means (" + trend + ") strictly increasing in lambda");
  c3.require(means[2] >= 0.60 && means[2] <= 0.82, "lambda=0.6 mean " + fmt(means[2]) + " in [0.60, 0.82]");
  c3.require(hpd_excludes == hpd_total,
             std::to_string(hpd_excludes) + "/" + std::to_string(hpd_total) + " HPDs exclude 0");
  report(3, c3);

  double mean = 0.0;
  for (double c : cells_at_one) mean += c;
  mean /= static_cast<double>(cells_at_one.size());
  const double q1 = quantile(cells_at_one, 0.25);
  const double q3 = quantile(cells_at_one, 0.75);
  Verdict c5;
  c5.require(mean >= -0.05 && mean <= 0.03, "pooled mean p - p_hat " + fmt(mean, 4) + " in [-0.05, 0.03]");
  c5.require(q1 <= 0.0 && q3 >= 0.0, "IQR (" + fmt(q1, 4) + ", " + fmt(q3, 4) + ") brackets 0");
  report(5, c5);
}

// 4: the autocorrelation baseline on Scenarios 1.1, 1.2, 1.3 and 2.
void baseline_flatness() {
  Verdict c4;
  std::vector<double> means;
  std::string listing;
  for (auto s : {Scenario::s1_1, Scenario::s1_2, Scenario::s1_3, Scenario::s2}) {
    double sum = 0.0;
    double lo = 1e9, hi = -1e9;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto pair = generate_pair(ScenarioSpec::make(s, seed));
      const double rho = fit_lnam(behavior_counts(pair.resp), pair.net.as_double()).rho;
      sum += rho;
      lo = std::min(lo, rho);
      hi = std::max(hi, rho);
    }
    means.push_back(sum / 10.0);
    listing += (listing.empty() ? "" : ", ") + to_string(s) + ": " + fmt(means.back(), 4) + " [" + fmt(lo, 4) +
               ", " + fmt(hi, 4) + "]";
  }
  const auto [mn, mx] = std::minmax_element(means.begin(), means.end());
  c4.require(*mn >= 0.005 && *mx <= 0.03, "replicate-mean rho (" + listing + ") in [0.005, 0.03]");
  c4.require(*mx - *mn < 0.01, "spread " + fmt(*mx - *mn, 4) + " < 0.01");
  report(4, c4);
}

// 6: likelihood kernels against brute-force evaluators.
void oracle_equivalence() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nrm;
  auto config = [&](Eigen::Index rows) {
    LatentConfig z(rows, 2);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = nrm(rng);
    return z;
  };

  double worst_lsm = 0.0;
  for (Eigen::Index n = 2; n <= 4; ++n) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index l = k + 1; l < n; ++l) pairs.emplace_back(k, l);
    const LatentConfig z = config(n);
    for (double alpha : {-1.3, 0.0, 0.8})
      for (double gamma : {0.0, 0.5, 2.0})
        for (int mask = 0; mask < (1 << pairs.size()); ++mask) {
          BinaryMatrix y = BinaryMatrix::Zero(n, n);
          for (std::size_t e = 0; e < pairs.size(); ++e)
            if (mask >> e & 1) y(pairs[e].first, pairs[e].second) = y(pairs[e].second, pairs[e].first) = 1;
          const double got = lsm_log_likelihood(NetworkData(y), LsmParams{alpha, gamma, z});
          worst_lsm = std::max(worst_lsm, std::abs(got - oracle::lsm(y.cast<int>(), z, alpha, gamma)));
        }
  }

  double worst_adapted = 0.0, worst_rasch = 0.0;
  for (Eigen::Index n = 1; n <= 4; ++n)
    for (Eigen::Index p = 1; p <= 2; ++p) {
      const LatentConfig zhat = config(n);
      AdaptedLsirmParams par;
      par.w = config(p);
      par.beta = Eigen::VectorXd::LinSpaced(p, 0.4, -0.7);
      par.theta = Eigen::VectorXd::LinSpaced(n, -0.2, 1.1);
      for (double delta : {-1.0, 0.0, 1.5})
        for (int mask = 0; mask < (1 << (n * p)); ++mask) {
          BinaryMatrix x(n, p);
          for (Eigen::Index c = 0; c < n * p; ++c) x(c / p, c % p) = mask >> c & 1;
          par.delta = delta;
          const double got = adapted_lsirm_log_likelihood(ItemResponseData(x), zhat, par);
          worst_adapted = std::max(
              worst_adapted, std::abs(got - oracle::adapted(x.cast<int>(), zhat, par.w, par.beta, par.theta, delta)));
          if (delta == 0.0)
            worst_rasch = std::max(worst_rasch, std::abs(got - oracle::rasch(x.cast<int>(), par.beta, par.theta)));
        }
    }

  Verdict c6;
  c6.require(worst_lsm <= 1e-12, "network kernel max error " + fmt(worst_lsm * 1e12, 3) + "e-12");
  c6.require(worst_adapted <= 1e-12, "response kernel max error " + fmt(worst_adapted * 1e12, 3) + "e-12");
  c6.require(worst_rasch <= 1e-12, "Rasch reduction max error " + fmt(worst_rasch * 1e12, 3) + "e-12");
  report(6, c6);
}

// 7: invariances of the likelihoods, Procrustes, and HPD minimality.
void invariance_suite() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nrm;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  auto config = [&](Eigen::Index rows, double sd) {
    LatentConfig z(rows, 2);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = sd * nrm(rng);
    return z;
  };
  auto rotation = [](double phi) {
    Eigen::Matrix2d q;
    q << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return q;
  };

  const auto pair = generate_pair(ScenarioSpec::make(Scenario::s1_1, 7));
  const auto& t = pair.truth;
  const LsmParams lsm{t.alpha, 1.0, t.latents.z_social};
  const AdaptedLsirmParams item{t.beta, t.theta, 1.0, 1.0, t.latents.w};
  const double base_net = lsm_log_likelihood(pair.net, lsm);
  const double base_item = adapted_lsirm_log_likelihood(pair.resp, t.latents.z_item_side, item);
  double worst_lik = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RigidMotion<double> m;
    m.rotation = rotation(angle(rng));
    if (trial % 2) m.rotation.col(1) *= -1.0;
    m.translation << 5 * nrm(rng), 5 * nrm(rng);
    LsmParams moved = lsm;
    moved.z = m.apply(lsm.z);
    AdaptedLsirmParams moved_item = item;
    moved_item.w = m.apply(item.w);
    worst_lik = std::max({worst_lik, std::abs(lsm_log_likelihood(pair.net, moved) - base_net),
                          std::abs(adapted_lsirm_log_likelihood(pair.resp, m.apply(t.latents.z_item_side),
                                                                moved_item) - base_item)});
  }

  double worst_dist = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const LatentConfig target = config(20, 3.0);
    const auto r = procrustes_align(target, config(20, 1.0));
    for (Eigen::Index k = 0; k < 20; ++k)
      worst_dist = std::max(worst_dist, (distances_to(r.aligned, r.aligned.row(k)) -
                                         distances_to(target, target.row(k))).abs().maxCoeff());
  }

  int hpd_checked = 0, hpd_agree = 0;
  std::uniform_int_distribution<int> size(20, 1000);
  std::gamma_distribution<double> g(2.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = size(rng);
    Eigen::VectorXd s(n);
    for (auto& x : s) x = trial % 3 ? g(rng) : std::round(4 * g(rng)) / 4;
    for (double mass : {0.5, 0.8, 0.95}) {
      if (n < std::ceil(1.0 / (1.0 - mass))) continue;
      const Interval got = hpd_interval(s, mass);
      const auto want = oracle::hpd_bruteforce(std::vector<double>(s.data(), s.data() + n), mass);
      ++hpd_checked;
      hpd_agree += got.lower == want.first && got.upper == want.second;
    }
  }

  Verdict c7;
  c7.require(worst_lik <= 1e-10, "likelihood change under rigid motions " + fmt(worst_lik * 1e10, 3) + "e-10");
  c7.require(worst_dist <= 1e-10, "Procrustes distance change " + fmt(worst_dist * 1e10, 3) + "e-10");
  c7.require(hpd_agree == hpd_checked,
             "HPD equals brute force in " + std::to_string(hpd_agree) + "/" + std::to_string(hpd_checked) +
                 " cases (N <= 1000)");
  report(7, c7);
}

// 8: prior recovery under a constant likelihood, and the Gibbs step.
void sampler_correctness() {
  SamplerHooks flat;
  flat.flat_likelihood = true;

  McmcConfig lsm_cfg;
  lsm_cfg.total_iters = 5000 * 40 + 2000;
  lsm_cfg.burn_in = 2000;
  lsm_cfg.thin = 40;
  lsm_cfg.seed = 2024;
  const auto lsm = run_lsm_chain(NetworkData(BinaryMatrix::Zero(3, 3)), Hyperparams{}, lsm_cfg, flat);
  const std::vector<double> alpha(lsm.alpha.data(), lsm.alpha.data() + lsm.alpha.size());
  const double p_alpha = oracle::ks_pvalue(alpha, [](double x) { return oracle::normal_cdf(x, 2.5); });

  McmcConfig item_cfg = lsm_cfg;
  item_cfg.total_iters = 5000 * 30 + 2000;
  item_cfg.thin = 30;
  item_cfg.seed = 99;
  const auto item = run_adapted_lsirm_chain(ItemResponseData(BinaryMatrix::Zero(2, 1)), LatentConfig::Zero(2, 2),
                                            Hyperparams{}, item_cfg, flat);
  const std::vector<double> delta(item.delta.data(), item.delta.data() + item.delta.size());
  const double p_delta = oracle::ks_pvalue(delta, [](double x) { return oracle::normal_cdf(x, 1.0); });

  // Inv-Gamma(11.5, 3.5): 20 thetas of 0.5 under a = 1.5, b = 1.
  Hyperparams hp;
  hp.a_sigma = 1.5;
  hp.b_sigma = 1.0;
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(20, 0.5);
  const double a = 11.5, b = 3.5;
  Rng rng = make_stream(8, 0);
  const int draws = 1000000;
  Eigen::VectorXd s(draws);
  for (int i = 0; i < draws; ++i) s(i) = gibbs_sigma2(theta, hp, rng);
  const double mean = s.mean();
  const double var = (s.array() - mean).square().sum() / (draws - 1);
  const double want_mean = b / (a - 1);
  const double want_var = b * b / ((a - 1) * (a - 1) * (a - 2));

  Verdict c8;
  c8.require(lsm.size() == 5000 && p_alpha > 0.01, "KS alpha p=" + fmt(p_alpha) + " at 5000 draws");
  c8.require(item.size() == 5000 && p_delta > 0.01, "KS delta p=" + fmt(p_delta) + " at 5000 draws");
  c8.require(std::abs(mean / want_mean - 1) < 0.01 && std::abs(var / want_var - 1) < 0.01,
             "Gibbs sigma2 mean/var relative error " + fmt(100 * std::abs(mean / want_mean - 1), 2) + "% / " +
                 fmt(100 * std::abs(var / want_var - 1), 2) + "% at 1e6 draws");
  report(8, c8);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9: reproducibility and two-chain convergence on Scenario 1.1.
void reproducibility() {
  const auto root = fs::temp_directory_path() / "lsinf_acceptance";
  fs::remove_all(root);
  SummaryReport summary;
  for (const char* run : {"a", "b"}) {
    RunConfig cfg = fit_config(1, 2);
    cfg.scenario = ScenarioSpec::make(Scenario::s1_1, 1);
    cfg.out_dir = root / run;
    summary = run_pipeline(cfg).fit.summary;
    progress(std::string("reproducibility run ") + run + " done");
  }
  int identical = 0, tables = 0;
  for (const char* name : {"step1_draws.csv", "step1_latent.csv", "step2_draws.csv", "step2_latent.csv",
                           "step2_beta.csv", "step2_theta.csv"}) {
    ++tables;
    const auto a = slurp(root / "a" / name);
    identical += !a.empty() && a == slurp(root / "b" / name);
  }
  const double rhat_delta = summary.number("rhat.delta");
  const double rhat_gamma = summary.number("rhat.gamma");
  fs::remove_all(root);

  Verdict c9;
  c9.require(identical == tables,
             std::to_string(identical) + "/" + std::to_string(tables) + " draw tables byte-identical");
  c9.require(rhat_delta < 1.1 && rhat_gamma < 1.1,
             "R-hat delta " + fmt(rhat_delta) + ", gamma " + fmt(rhat_gamma) + " < 1.1");
  report(9, c9);
}

}  // namespace

int main() {
  std::printf("schedule: %s (%zu iterations, %zu burn-in, thin %zu)\n", kSchedule.name.c_str(),
              kSchedule.mcmc.total_iters, kSchedule.mcmc.burn_in, kSchedule.mcmc.thin);
  std::fflush(stdout);
  try {
    oracle_equivalence();
    invariance_suite();
    sampler_correctness();
    baseline_flatness();
    scenario_1_1_recovery();
    scenario_3_sweep();
    reproducibility();
  } catch (const std::exception& e) {
    std::printf("aborted: %s\n", e.what());
    return 1;
  }

  std::sort(g_results.begin(), g_results.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  int failed = 0;
  for (const auto& [id, v] : g_results) {
    std::printf("criterion %d: %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
