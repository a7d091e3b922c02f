#include "lsinf/pipeline.hpp"

#include "lsinf/alignment.hpp"
#include "lsinf/plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <new>

namespace lsinf {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out.precision(17);
  return out;
}

template <typename Fn>
auto run_chains(int chains, Fn fn) {
  using Result = decltype(fn(0));
  std::vector<std::future<Result>> pending;
  for (int c = 0; c < chains; ++c) pending.push_back(std::async(std::launch::async, fn, c));
  std::vector<Result> out;
  out.reserve(pending.size());
  // get() in chain order so an exception from chain 0 wins over later ones.
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

template <typename Draws>
std::pair<std::size_t, std::size_t> best_draw(const std::vector<Draws>& chains) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < chains.size(); ++c) {
    Eigen::Index i = 0;
    const double v = chains[c].log_posterior.maxCoeff(&i);
    if (v > top) {
      top = v;
      best = {c, static_cast<std::size_t>(i)};
    }
  }
  return best;
}

template <typename Draws, typename Get>
std::vector<Eigen::VectorXd> collect(const std::vector<Draws>& chains, Get get) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& d : chains) out.push_back(get(d));
  return out;
}

Acceptance pooled(const std::vector<Acceptance>& parts) {
  Acceptance a;
  for (const auto& p : parts) {
    a.accepted += p.accepted;
    a.proposed += p.proposed;
  }
  return a;
}

void add_parameter(SummaryReport& report, const ParameterSummary& s) {
  report.add(s.name + ".mean", s.mean);
  report.add(s.name + ".sd", s.sd);
  report.add(s.name + ".hpd_low", s.hpd.lower);
  report.add(s.name + ".hpd_high", s.hpd.upper);
}

// Linear-interpolation sample quantile.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

void write_matrix(std::ostream& out, const LatentConfig& m, const char* entity) {
  out << entity << ",dim1,dim2\n";
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    out << k + 1 << ',' << format_number(m(k, 0)) << ',' << format_number(m(k, 1)) << '\n';
}

}  // namespace

McmcConfig RunConfig::real_data_schedule() {
  McmcConfig c;
  c.total_iters = 60000;
  c.burn_in = 10000;
  c.thin = 5;
  return c;
}

McmcConfig RunConfig::simulation_schedule() {
  McmcConfig c;
  c.total_iters = 30000;
  c.burn_in = 5000;
  c.thin = 5;
  return c;
}

void RunConfig::validate() const {
  const bool paths = network_path.has_value() || responses_path.has_value();
  if (paths && scenario) throw InputError("give either data files or a scenario, not both");
  if (!paths && !scenario) throw InputError("no data: give --network and --responses, or --scenario");
  if (paths && !(network_path && responses_path))
    throw InputError("real-data mode needs both a network file and a response file");
  if (chains < 1) throw InputError("chains must be >= 1");
  if (scenario) scenario->validate();
  step1.validate();
  step2.validate();
  hp.validate();
}

std::uint64_t chain_seed(std::uint64_t base, int chain) {
  return base + 7919u * static_cast<std::uint64_t>(chain);
}

FitResult fit_pair(const NetworkData& net, const ItemResponseData& resp, const RunConfig& cfg) {
  require_matching(net, resp);
  if (cfg.chains < 1) throw InputError("chains must be >= 1");
  FitResult fit;

  // Step 1.
  fit.step1 = run_chains(cfg.chains, [&](int c) {
    McmcConfig mc = cfg.step1;
    mc.seed = chain_seed(cfg.step1.seed, c);
    return run_lsm_chain(net, cfg.hp, mc);
  });
  const auto [rc, ri] = best_draw(fit.step1);
  const LatentConfig z_reference = fit.step1[rc].z[ri];
  std::vector<LatentConfig> pooled_z;
  for (auto& d : fit.step1) {
    align_lsm_draws(d, z_reference);
    pooled_z.insert(pooled_z.end(), d.z.begin(), d.z.end());
  }
  fit.zhat = mean_configuration(pooled_z);
  pooled_z.clear();

  // Step 2, every chain conditioned on the same zhat.
  fit.step2 = run_chains(cfg.chains, [&](int c) {
    McmcConfig mc = cfg.step2;
    mc.seed = chain_seed(cfg.step2.seed, c);
    return run_adapted_lsirm_chain(resp, fit.zhat, cfg.hp, mc);
  });
  const auto [sc, si] = best_draw(fit.step2);
  const LatentConfig w_reference = fit.step2[sc].w[si];
  std::vector<LatentConfig> pooled_w;
  for (auto& d : fit.step2) {
    align_lsirm_draws(d, w_reference);
    pooled_w.insert(pooled_w.end(), d.w.begin(), d.w.end());
  }

  auto stack_rows = [&](auto get) {
    Eigen::Index rows = 0;
    for (const auto& d : fit.step2) rows += get(d).rows();
    Eigen::MatrixXd m(rows, get(fit.step2.front()).cols());
    Eigen::Index at = 0;
    for (const auto& d : fit.step2) {
      m.middleRows(at, get(d).rows()) = get(d);
      at += get(d).rows();
    }
    return m;
  };
  fit.posterior.beta = stack_rows([](const LsirmDraws& d) -> const Eigen::MatrixXd& { return d.beta; })
                           .colwise()
                           .mean()
                           .transpose();
  fit.posterior.theta =
      stack_rows([](const LsirmDraws& d) -> const Eigen::MatrixXd& { return d.theta; })
          .colwise()
          .mean()
          .transpose();
  fit.posterior.w = mean_configuration(pooled_w);

  const double mass = 0.95;
  auto alpha = summarize("alpha", collect(fit.step1, [](const LsmDraws& d) { return d.alpha; }),
                         mass, cfg.rhat);
  auto gamma = summarize("gamma", collect(fit.step1, [](const LsmDraws& d) { return d.gamma; }),
                         mass, cfg.rhat);
  auto delta = summarize("delta", collect(fit.step2, [](const LsirmDraws& d) { return d.delta; }),
                         mass, cfg.rhat);
  auto sigma2 = summarize(
      "sigma2", collect(fit.step2, [](const LsirmDraws& d) { return d.sigma2; }), mass, cfg.rhat);
  fit.posterior.delta = delta.mean;
  fit.posterior.sigma2 = sigma2.mean;

  fit.lnam = fit_lnam(behavior_counts(resp), net.as_double(), std::nullopt, cfg.lnam);

  SummaryReport& r = fit.summary;
  r.add("data.n", static_cast<double>(net.size()));
  r.add("data.p", static_cast<double>(resp.items()));
  r.add("data.edges", static_cast<double>(net.edge_count()));
  r.add("mcmc.chains", static_cast<double>(cfg.chains));
  r.add("mcmc.step1.iters", static_cast<double>(cfg.step1.total_iters));
  r.add("mcmc.step1.burn", static_cast<double>(cfg.step1.burn_in));
  r.add("mcmc.step1.thin", static_cast<double>(cfg.step1.thin));
  r.add("mcmc.step2.iters", static_cast<double>(cfg.step2.total_iters));
  r.add("mcmc.step2.burn", static_cast<double>(cfg.step2.burn_in));
  r.add("mcmc.step2.thin", static_cast<double>(cfg.step2.thin));
  r.add("mcmc.seed", std::to_string(cfg.step1.seed));
  r.add("mcmc.retained_per_chain", static_cast<double>(cfg.step2.retained()));
  for (const auto* s : {&delta, &gamma, &alpha, &sigma2}) add_parameter(r, *s);
  for (const auto* s : {&delta, &gamma, &alpha, &sigma2})
    if (s->rhat) r.add("rhat." + s->name, *s->rhat);

  auto acc1 = [&](auto member) {
    std::vector<Acceptance> v;
    for (const auto& d : fit.step1) v.push_back(d.*member);
    return pooled(v).rate();
  };
  auto acc2 = [&](auto member) {
    std::vector<Acceptance> v;
    for (const auto& d : fit.step2) v.push_back(d.*member);
    return pooled(v).rate();
  };
  r.add("accept.z", acc1(&LsmDraws::accept_z));
  r.add("accept.alpha", acc1(&LsmDraws::accept_alpha));
  r.add("accept.gamma", acc1(&LsmDraws::accept_gamma));
  r.add("accept.w", acc2(&LsirmDraws::accept_w));
  r.add("accept.beta", acc2(&LsirmDraws::accept_beta));
  r.add("accept.theta", acc2(&LsirmDraws::accept_theta));
  r.add("accept.delta", acc2(&LsirmDraws::accept_delta));

  r.add("lnam.rho", fit.lnam.rho);
  r.add("lnam.rho_se", fit.lnam.rho_se);
  r.add("lnam.ci_low", fit.lnam.rho_ci.lower);
  r.add("lnam.ci_high", fit.lnam.rho_ci.upper);
  r.add("lnam.sigma2", fit.lnam.sigma2);
  r.add("lnam.log_likelihood", fit.lnam.log_likelihood);
  r.add("lnam.stability_low", fit.lnam.stability.lower);
  r.add("lnam.stability_high", fit.lnam.stability.upper);
  r.add("lnam.at_boundary", fit.lnam.at_boundary ? "true" : "false");
  r.add("lnam.weights", cfg.lnam.row_normalize ? "row_normalized" : "raw");
  return fit;
}

std::vector<std::filesystem::path> write_generated_pair(const GeneratedPair& pair,
                                                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  {
    auto out = open_output(dir / "network.csv");
    write_network(out, pair.net);
    written.push_back(dir / "network.csv");
  }
  {
    auto out = open_output(dir / "responses.csv");
    write_responses(out, pair.resp);
    written.push_back(dir / "responses.csv");
  }
  {
    SummaryReport truth;
    truth.add("alpha", pair.truth.alpha);
    truth.add("gamma", pair.truth.gamma);
    truth.add("delta", pair.truth.delta);
    for (Eigen::Index i = 0; i < pair.truth.beta.size(); ++i)
      truth.add("beta." + std::to_string(i + 1), pair.truth.beta(i));
    for (Eigen::Index k = 0; k < pair.truth.theta.size(); ++k)
      truth.add("theta." + std::to_string(k + 1), pair.truth.theta(k));
    auto out = open_output(dir / "truth.txt");
    truth.write(out);
    written.push_back(dir / "truth.txt");
  }
  {
    auto out = open_output(dir / "truth_latents.csv");
    out << "set,entity,cluster,dim1,dim2\n";
    const auto& l = pair.truth.latents;
    auto dump = [&](const char* set, const LatentConfig& m, const Eigen::VectorXi& g) {
      for (Eigen::Index k = 0; k < m.rows(); ++k)
        out << set << ',' << k + 1 << ',' << g(k) + 1 << ',' << format_number(m(k, 0)) << ','
            << format_number(m(k, 1)) << '\n';
    };
    dump("z_social", l.z_social, l.social_cluster);
    dump("z_item_side", l.z_item_side, l.item_side_cluster);
    dump("w", l.w, l.item_cluster);
    written.push_back(dir / "truth_latents.csv");
  }
  return written;
}

PipelineOutput run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  PipelineOutput result;

  NetworkData net;
  ItemResponseData resp;
  std::vector<std::string> item_ids;
  std::size_t self_loops = 0;
  if (cfg.scenario) {
    GeneratedPair pair = generate_pair(*cfg.scenario);
    net = std::move(pair.net);
    resp = std::move(pair.resp);
    result.truth = std::move(pair.truth);
  } else {
    auto loaded = load_network(*cfg.network_path);
    net = std::move(loaded.net);
    self_loops = loaded.self_loops_dropped;
    resp = load_responses(*cfg.responses_path, &item_ids);
  }

  result.fit = fit_pair(net, resp, cfg);
  SummaryReport& summary = result.fit.summary;
  if (cfg.scenario) {
    summary.add("scenario", to_string(cfg.scenario->id));
    if (cfg.scenario->lambda) summary.add("scenario.lambda", *cfg.scenario->lambda);
    summary.add("truth.gamma", result.truth->gamma);
    summary.add("truth.delta", result.truth->delta);
    const Eigen::MatrixXd diff =
        true_response_probabilities(*result.truth) - fit_statistic(result.fit.zhat, result.fit.posterior);
    std::vector<double> cells(diff.data(), diff.data() + diff.size());
    summary.add("fit.p_diff_mean", diff.mean());
    summary.add("fit.p_diff_min", diff.minCoeff());
    summary.add("fit.p_diff_q1", quantile(cells, 0.25));
    summary.add("fit.p_diff_median", quantile(cells, 0.5));
    summary.add("fit.p_diff_q3", quantile(cells, 0.75));
    summary.add("fit.p_diff_max", diff.maxCoeff());
  } else {
    summary.add("data.self_loops_dropped", static_cast<double>(self_loops));
  }

  const auto& dir = cfg.out_dir;
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "summary.txt");
    summary.write(out);
    out.close();
    if (!out) throw InputError("failed writing summary.txt");
    result.artifacts.push_back(dir / "summary.txt");
  }

  const FitResult& fit = result.fit;
  if (cfg.write_draws) {
    auto emit = [&](const char* name, auto writer) {
      auto out = open_output(dir / name);
      writer(out);
      result.artifacts.push_back(dir / name);
    };
    emit("step1_draws.csv", [&](std::ostream& o) { write_lsm_scalars(o, fit.step1); });
    emit("step1_latent.csv", [&](std::ostream& o) {
      std::vector<const std::vector<LatentConfig>*> v;
      for (const auto& d : fit.step1) v.push_back(&d.z);
      write_latent_draws(o, v);
    });
    emit("step2_draws.csv", [&](std::ostream& o) { write_lsirm_scalars(o, fit.step2); });
    emit("step2_latent.csv", [&](std::ostream& o) {
      std::vector<const std::vector<LatentConfig>*> v;
      for (const auto& d : fit.step2) v.push_back(&d.w);
      write_latent_draws(o, v);
    });
    emit("step2_beta.csv", [&](std::ostream& o) {
      std::vector<const Eigen::MatrixXd*> v;
      for (const auto& d : fit.step2) v.push_back(&d.beta);
      write_vector_draws(o, v);
    });
    emit("step2_theta.csv", [&](std::ostream& o) {
      std::vector<const Eigen::MatrixXd*> v;
      for (const auto& d : fit.step2) v.push_back(&d.theta);
      write_vector_draws(o, v);
    });
    emit("zhat.csv", [&](std::ostream& o) { write_matrix(o, fit.zhat, "respondent"); });
    emit("what.csv", [&](std::ostream& o) { write_matrix(o, fit.posterior.w, "item"); });
  }

  if (cfg.emit_plots) {
    // Plots go to a temporary name first; a failure leaves no partial file.
    auto plot = [&](const char* name, const LatentMap& map) {
      const auto final_path = dir / name;
      const auto tmp_path = dir / (std::string(name) + ".tmp");
      {
        auto out = open_output(tmp_path);
        write_svg(out, map);
      }
      std::filesystem::rename(tmp_path, final_path);
      result.artifacts.push_back(final_path);
    };
    LatentMap step1;
    step1.title = "Respondent latent positions (network model)";
    step1.respondents = fit.zhat;
    if (result.truth) step1.respondent_groups = result.truth->latents.social_cluster;
    plot("step1_map.svg", step1);

    LatentMap step2;
    step2.title = "Respondents and items (adapted item response model)";
    step2.respondents = fit.zhat;
    if (result.truth) step2.respondent_groups = result.truth->latents.item_side_cluster;
    step2.items = fit.posterior.w;
    step2.item_labels = item_ids;
    plot("step2_map.svg", step2);
  }
  return result;
}

ErrorRecord classify_current_exception() {
  try {
    throw;
  } catch (const InputError& e) {
    return {"input", e.what(), kExitInput};
  } catch (const NumericalError& e) {
    return {"numerical", e.what(), kExitNumerical};
  } catch (const std::filesystem::filesystem_error& e) {
    return {"input", e.what(), kExitInput};
  } catch (const std::exception& e) {
    return {"internal", e.what(), kExitInternal};
  } catch (...) {
    return {"internal", "unknown error", kExitInternal};
  }
}

std::string to_json(const ErrorRecord& err) {
  nlohmann::json j;
  j["error"] = err.kind;
  j["message"] = err.message;
  j["exit_code"] = err.exit_code;
  return j.dump();
}

}  // namespace lsinf
