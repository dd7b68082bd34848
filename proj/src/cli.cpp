#include "mobw/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobw/datasets.hpp"
#include "mobw/experiments.hpp"
#include "mobw/io.hpp"
#include "mobw/likelihood.hpp"
#include "mobw/stats.hpp"

namespace mobw {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path p = fs::path(dir) / name;
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open for writing: " + p.string());
  return f;
}

double get_cfg(const std::map<std::string, std::string>& kv,
               const std::string& key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stod(it->second);
}

MobwParams params_from_config(const std::map<std::string, std::string>& kv,
                              const MobwParams& base) {
  MobwParams p = base;
  p.alpha = get_cfg(kv, "alpha", p.alpha);
  p.lambda0 = get_cfg(kv, "lambda0", p.lambda0);
  p.lambda1 = get_cfg(kv, "lambda1", p.lambda1);
  p.lambda2 = get_cfg(kv, "lambda2", p.lambda2);
  return p;
}

std::vector<int> parse_removals(const std::string& text, int m) {
  std::vector<int> r;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) r.push_back(std::stoi(tok));
  if (static_cast<int>(r.size()) != m) {
    throw std::runtime_error("--removals must list exactly m integers");
  }
  return r;
}

void print_fit_summary(const FitResult& fit, std::ostream& os) {
  const char* names[4] = {"lambda0", "lambda1", "lambda2", "alpha"};
  const double est[4] = {fit.estimates.lambda0, fit.estimates.lambda1,
                         fit.estimates.lambda2, fit.estimates.alpha};
  os << "parameter  estimate      " << 100 * (1 - fit.gamma)
     << "% interval            width\n";
  for (int i = 0; i < 4; ++i) {
    os << names[i] << (i < 3 ? "    " : "      ") << est[i];
    if (fit.acis[i].valid) {
      os << "      (" << fit.acis[i].lower << ", " << fit.acis[i].upper << ")  "
         << fit.acis[i].upper - fit.acis[i].lower;
    } else {
      os << "      (suppressed: boundary estimate)";
    }
    os << '\n';
  }
  os << "iterations " << fit.iterations << ", converged "
     << (fit.converged ? "yes" : "no") << ", fisher condition "
     << fit.fisher_condition << '\n';
}

int cmd_simulate(int n, int m, const std::string& scheme, double T, double q,
                 std::uint64_t seed, const MobwParams& params,
                 const std::string& removals_text, const std::string& out_dir) {
  CensoringPlan plan;
  plan.n = n;
  plan.m = m;
  plan.T = T;
  plan.removals = removals_text.empty()
                      ? expand_scheme(parse_scheme(scheme), n, m)
                      : parse_removals(removals_text, m);
  RngStream rng(seed);
  CensoredSample s = generate_at2phcs(params, plan, rng);
  if (q > 0.0) s = mask_causes(s, q, rng);
  s.seed = seed;
  if (out_dir.empty()) {
    write_censored_csv(s, std::cout);
  } else {
    auto f = open_out(out_dir, "sample.csv");
    write_censored_csv(s, f);
    std::cout << (fs::path(out_dir) / "sample.csv").string() << '\n';
  }
  return 0;
}

int cmd_fit(const std::string& data, double gamma, const std::string& out_dir) {
  const CensoredSample s = read_censored_csv_file(data);
  FitConfig cfg;
  cfg.gamma = gamma;
  const FitResult fit = fit_mle(s, cfg);
  const std::string json = fit_result_to_json(fit);
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "fit.json");
    f << json << '\n';
  }
  print_fit_summary(fit, std::cout);
  return 0;
}

int cmd_bayes(const std::string& data, int M, int burn, std::uint64_t seed,
              double gamma, const std::string& loss_name, double p,
              const std::string& hpd_window, double hyper,
              const std::string& out_dir) {
  const CensoredSample s = read_censored_csv_file(data);
  const PriorSpec prior = PriorSpec::diffuse(hyper);
  RngStream rng(seed);
  const PosteriorDraws draws = run_gibbs(s, prior, M, burn, rng);

  LossSpec loss;
  if (loss_name == "self") {
    loss = {LossSpec::Kind::kSquaredError, 0.0};
  } else if (loss_name == "linex") {
    loss = {LossSpec::Kind::kLinex, p};
  } else {
    throw CLI::ValidationError("--loss must be self or linex");
  }
  const HpdWindow window = hpd_window == "paper" ? HpdWindow::kWide
                                                 : HpdWindow::kStandard;

  nlohmann::json j;
  const char* names[4] = {"alpha", "lambda0", "lambda1", "lambda2"};
  std::vector<double> coord(draws.draws.size());
  for (int k = 0; k < 4; ++k) {
    j["estimates"][names[k]] = bayes_estimate(draws, loss, k);
    for (std::size_t i = 0; i < draws.draws.size(); ++i) {
      coord[i] = draws.draws[i][k];
    }
    const auto [lo, hi] = hpd_interval(coord, gamma, window);
    j["hpd"][names[k]] = {lo, hi};
  }
  j["G"] = gelman_G(draws);
  j["M"] = M;
  j["burn_in"] = burn;
  j["seed"] = seed;
  j["loss"] = loss_name;
  if (loss_name == "linex") j["p"] = p;

  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "bayes.json");
    f << j.dump(2) << '\n';
    auto g = open_out(out_dir, "draws.csv");
    write_draws_csv(draws, g);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_dir,
              int threads) {
  const auto kv = read_config_file(config_path);
  StudyConfig cfg;
  cfg.truth = params_from_config(kv, cfg.truth);
  cfg.q = get_cfg(kv, "q", cfg.q);
  cfg.replications = static_cast<int>(get_cfg(kv, "replications", cfg.replications));
  cfg.gamma = get_cfg(kv, "gamma", cfg.gamma);
  cfg.mcmc_draws = static_cast<int>(get_cfg(kv, "mcmc_draws", cfg.mcmc_draws));
  cfg.burn_in = static_cast<int>(get_cfg(kv, "burn_in", cfg.burn_in));
  cfg.linex_p = get_cfg(kv, "linex_p", cfg.linex_p);
  cfg.hyper = get_cfg(kv, "hyper", cfg.hyper);
  cfg.seed = static_cast<std::uint64_t>(get_cfg(kv, "seed", 1));
  cfg.threads = threads;

  // cells = n,m,scheme,T ; one per line index: cell.1 = 50,30,I,0.5
  for (int i = 1;; ++i) {
    const auto it = kv.find("cell." + std::to_string(i));
    if (it == kv.end()) break;
    std::stringstream ss(it->second);
    std::string n_s, m_s, sch, t_s;
    std::getline(ss, n_s, ',');
    std::getline(ss, m_s, ',');
    std::getline(ss, sch, ',');
    std::getline(ss, t_s, ',');
    cfg.cells.push_back({std::stoi(n_s), std::stoi(m_s), parse_scheme(sch),
                         std::stod(t_s)});
  }
  if (cfg.cells.empty()) {
    throw std::runtime_error("study config: no cell.<i> entries");
  }

  const MetricTable table = run_study(cfg);
  if (out_dir.empty()) {
    table.write_csv(std::cout);
  } else {
    auto f = open_out(out_dir, "study.csv");
    table.write_csv(f);
    std::cout << (fs::path(out_dir) / "study.csv").string() << '\n';
  }
  return 0;
}

int cmd_optimal(const std::vector<std::string>& files,
                const std::string& out_dir) {
  std::vector<OptimalityCriteria> crit;
  for (const std::string& f : files) {
    const CensoredSample s = read_censored_csv_file(f);
    const FitResult fit = fit_mle(s);
    crit.push_back(optimality_criteria(fit.fisher));
  }
  const OptimalityRanking rank = rank_plans(crit);

  std::ostringstream csv;
  csv << "plan,criterion_I_trace_inv,criterion_II_det_inv,criterion_III_trace,"
         "best_I,best_II,best_III\n";
  for (std::size_t i = 0; i < crit.size(); ++i) {
    csv << files[i] << ',' << crit[i].trace_inverse << ',' << crit[i].det_inverse
        << ',' << crit[i].trace << ',' << (rank.best_trace_inverse == i)
        << ',' << (rank.best_det_inverse == i) << ',' << (rank.best_trace == i)
        << '\n';
  }
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "optimal.csv");
    f << csv.str();
  }
  std::cout << csv.str();
  return 0;
}

int cmd_gof(const std::string& data, const std::string& out_dir) {
  const BivariateDataset d = read_bivariate_csv_file(data);
  std::vector<double> y1, y2, ymin;
  for (const auto& [a, b] : d.pairs) {
    y1.push_back(a);
    y2.push_back(b);
    ymin.push_back(std::min(a, b));
  }
  const char* names[3] = {"y1", "y2", "min"};
  const std::vector<double>* samples[3] = {&y1, &y2, &ymin};
  std::cout << "margin,D,p,shape,rate\n";
  for (int i = 0; i < 3; ++i) {
    const KsResult r = ks_gof(*samples[i]);
    std::cout << names[i] << ',' << r.D << ',' << r.p_value << ',' << r.shape
              << ',' << r.rate << '\n';
    if (!out_dir.empty()) {
      // Plot-ready point set: sorted sample, empirical CDF and fitted CDF.
      auto f = open_out(out_dir, std::string("ecdf_") + names[i] + ".csv");
      std::vector<double> xs = *samples[i];
      std::sort(xs.begin(), xs.end());
      f << "y,ecdf,fitted_cdf\n";
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double F = -std::expm1(-r.rate * std::pow(xs[k], r.shape));
        f << format_double(xs[k]) << ',' << (k + 1.0) / xs.size() << ','
          << format_double(F) << '\n';
      }
    }
  }
  return 0;
}

int cmd_convert(const std::string& data, double normalize, int n, int m,
                double T, const std::string& scheme,
                const std::string& removals_text, std::uint64_t seed,
                bool to_bivariate, const std::string& out_dir) {
  if (to_bivariate) {
    // Reverse direction, defined for simultaneous-failure rows only.
    const CensoredSample s = read_censored_csv_file(data);
    BivariateDataset d;
    for (int i = 0; i < s.m(); ++i) {
      if (s.causes[i] != 0) {
        throw std::runtime_error(
            "convert --to-bivariate: defined only when every cause is 0");
      }
      d.pairs.emplace_back(s.times[i], s.times[i]);
    }
    if (out_dir.empty()) {
      write_bivariate_csv(d, std::cout);
    } else {
      auto f = open_out(out_dir, "bivariate.csv");
      write_bivariate_csv(d, f);
    }
    return 0;
  }

  BivariateDataset d = read_bivariate_csv_file(data);
  if (normalize > 0.0 && normalize != 1.0) {
    for (auto& [a, b] : d.pairs) {
      a /= normalize;
      b /= normalize;
    }
    d.normalizer *= normalize;
  }
  std::vector<CompetingRisksObs> cr = to_competing_risks(d);
  std::stable_sort(cr.begin(), cr.end(),
                   [](const CompetingRisksObs& a, const CompetingRisksObs& b) {
                     return a.y < b.y;
                   });

  const int total = static_cast<int>(cr.size());
  CensoredSample s;
  if (m <= 0 || m >= total) {
    // No censoring requested: complete sample (n = m, no removals, T = inf).
    std::vector<double> times;
    std::vector<int> causes;
    for (const auto& o : cr) {
      times.push_back(o.y);
      causes.push_back(o.cause);
    }
    s = make_censored_sample(total, std::numeric_limits<double>::infinity(),
                             std::move(times), std::move(causes),
                             std::vector<int>(total, 0));
  } else {
    if (n <= 0) n = total;
    if (n != total) {
      throw std::runtime_error("convert: n must equal the number of data rows");
    }
    std::vector<int> plan_removals =
        removals_text.empty() ? expand_scheme(parse_scheme(scheme), n, m)
                              : parse_removals(removals_text, m);
    if (!(T > 0.0)) T = std::numeric_limits<double>::infinity();

    // Replay the experiment on the recorded lifetimes: at each failure the
    // planned number of random survivors leaves the test (suspended once the
    // failure time reaches T).
    RngStream rng(seed);
    std::vector<bool> gone(cr.size(), false);
    std::vector<double> times;
    std::vector<int> causes, applied;
    int alive = total;
    std::size_t cursor = 0;
    for (int i = 0; i < m; ++i) {
      while (gone[cursor]) ++cursor;
      const auto& obs = cr[cursor];
      gone[cursor] = true;
      --alive;
      times.push_back(obs.y);
      causes.push_back(obs.cause);
      int r = obs.y < T ? plan_removals[i] : 0;
      r = std::min(r, alive - (m - 1 - i));
      std::vector<std::size_t> survivors;
      for (std::size_t k = cursor + 1; k < cr.size(); ++k) {
        if (!gone[k]) survivors.push_back(k);
      }
      for (int j = 0; j < r; ++j) {
        const std::size_t pick = rng.uniform_below(survivors.size());
        gone[survivors[pick]] = true;
        survivors.erase(survivors.begin() + static_cast<long>(pick));
        --alive;
      }
      applied.push_back(r);
    }
    s = make_censored_sample(n, T, std::move(times), std::move(causes),
                             std::move(applied));
    s.seed = seed;
  }

  if (out_dir.empty()) {
    write_censored_csv(s, std::cout);
  } else {
    auto f = open_out(out_dir, "competing_risks.csv");
    write_censored_csv(s, f);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Competing-risks lifetime analysis under adaptive progressive "
               "hybrid censoring (bivariate Weibull dependence)"};
  app.require_subcommand(1);

  std::string data, config, out_dir, scheme = "I", loss = "self",
              hpd_window = "standard", removals;
  std::vector<std::string> data_list;
  std::uint64_t seed = 1;
  double gamma = 0.05, q = 0.0, T = 0.0, p = 0.5, hyper = 0.001,
         normalize = 1.0;
  int n = 0, m = 0, M = 10000, burn = 1000, threads = 0;
  bool to_bivariate = false;
  MobwParams params{1.0, 0.5, 1.0, 1.5};

  auto* sim = app.add_subcommand("simulate", "generate a censored sample");
  sim->add_option("--n", n)->required();
  sim->add_option("--m", m)->required();
  sim->add_option("--scheme", scheme);
  sim->add_option("--removals", removals, "explicit comma-separated plan");
  sim->add_option("--T", T)->required();
  sim->add_option("--q", q);
  sim->add_option("--seed", seed);
  sim->add_option("--alpha", params.alpha);
  sim->add_option("--lambda0", params.lambda0);
  sim->add_option("--lambda1", params.lambda1);
  sim->add_option("--lambda2", params.lambda2);
  sim->add_option("--out", out_dir);

  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit + intervals");
  fit->add_option("--data", data)->required();
  fit->add_option("--gamma", gamma);
  fit->add_option("--out", out_dir);

  auto* bay = app.add_subcommand("bayes", "posterior sampling and estimates");
  bay->add_option("--data", data)->required();
  bay->add_option("--M", M);
  bay->add_option("--burn", burn);
  bay->add_option("--seed", seed);
  bay->add_option("--gamma", gamma);
  bay->add_option("--loss", loss);
  bay->add_option("--p", p);
  bay->add_option("--hpd-window", hpd_window);
  bay->add_option("--hyper", hyper);
  bay->add_option("--out", out_dir);

  auto* study = app.add_subcommand("study", "Monte Carlo performance study");
  study->add_option("--config", config)->required();
  study->add_option("--threads", threads);
  study->add_option("--out", out_dir);

  auto* opt = app.add_subcommand("optimal", "rank censoring plans");
  opt->add_option("--data", data_list)->required()->expected(-1);
  opt->add_option("--out", out_dir);

  auto* gof = app.add_subcommand("gof", "marginal Weibull goodness of fit");
  gof->add_option("--data", data)->required();
  gof->add_option("--out", out_dir);

  auto* conv = app.add_subcommand("convert",
                                  "bivariate -> competing risks -> censored");
  conv->add_option("--data", data)->required();
  conv->add_option("--normalize", normalize);
  conv->add_option("--n", n);
  conv->add_option("--m", m);
  conv->add_option("--T", T);
  conv->add_option("--scheme", scheme);
  conv->add_option("--removals", removals);
  conv->add_option("--seed", seed);
  conv->add_flag("--to-bivariate", to_bivariate);
  conv->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(n, m, scheme, T, q, seed, params, removals, out_dir);
    }
    if (fit->parsed()) return cmd_fit(data, gamma, out_dir);
    if (bay->parsed()) {
      return cmd_bayes(data, M, burn, seed, gamma, loss, p, hpd_window, hyper,
                       out_dir);
    }
    if (study->parsed()) return cmd_study(config, out_dir, threads);
    if (opt->parsed()) return cmd_optimal(data_list, out_dir);
    if (gof->parsed()) return cmd_gof(data, out_dir);
    if (conv->parsed()) {
      return cmd_convert(data, normalize, n, m, T, scheme, removals, seed,
                         to_bivariate, out_dir);
    }
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace mobw
