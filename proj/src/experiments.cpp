#include "mobw/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mobw/likelihood.hpp"

namespace mobw {

Scheme parse_scheme(const std::string& id) {
  if (id == "I" || id == "i" || id == "1") return Scheme::kI;
  if (id == "II" || id == "ii" || id == "2") return Scheme::kII;
  if (id == "III" || id == "iii" || id == "3") return Scheme::kIII;
  throw std::invalid_argument("unknown scheme '" + id + "' (expected I|II|III)");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kI: return "I";
    case Scheme::kII: return "II";
    default: return "III";
  }
}

std::vector<int> expand_scheme(Scheme id, int n, int m) {
  if (m < 1 || m > n) throw std::invalid_argument("expand_scheme: need 1<=m<=n");
  std::vector<int> r(m, 0);
  switch (id) {
    case Scheme::kI:
      r[m - 1] = n - m;
      break;
    case Scheme::kII:
      r[0] = n - m;
      break;
    case Scheme::kIII:
      if (n - m > m) {
        throw std::invalid_argument(
            "expand_scheme: scheme III needs n - m <= m");
      }
      for (int i = 2 * m - n; i < m; ++i) r[i] = 1;  // slots 2m-n+1..m, 1-based
      break;
  }
  return r;
}

namespace {

struct RepRecord {
  bool valid = false;
  std::array<double, 4> est_mle{}, est_self{}, est_linex{};
  std::array<double, 4> aci_lo{}, aci_hi{};
  std::array<bool, 4> aci_ok{};
  std::array<double, 4> hpd_lo{}, hpd_hi{};
  std::array<double, 4> hpd_wide_lo{}, hpd_wide_hi{};
  double G = 0.0;
};

RepRecord run_one(const StudyConfig& cfg, const StudyCell& cell,
                  const CensoringPlan& plan, std::uint64_t stream_id) {
  RngStream rng(cfg.seed, stream_id);
  RepRecord rec;

  CensoredSample sample = generate_at2phcs(cfg.truth, plan, rng);
  sample = mask_causes(sample, cfg.q, rng);
  if (count_causes(sample).m012() == 0) return rec;  // excluded

  FitResult fit;
  try {
    fit = fit_mle(sample);
  } catch (const std::exception&) {
    return rec;  // counted as excluded, reported in the table
  }
  rec.est_mle = {fit.estimates.lambda0, fit.estimates.lambda1,
                 fit.estimates.lambda2, fit.estimates.alpha};
  for (int k = 0; k < 4; ++k) {
    rec.aci_ok[k] = fit.acis[k].valid;
    rec.aci_lo[k] = fit.acis[k].lower;
    rec.aci_hi[k] = fit.acis[k].upper;
  }

  const PriorSpec prior = PriorSpec::diffuse(cfg.hyper);
  const PosteriorDraws draws =
      run_gibbs(sample, prior, cfg.mcmc_draws, cfg.burn_in, rng);
  const LossSpec self{LossSpec::Kind::kSquaredError, 0.0};
  const LossSpec linex{LossSpec::Kind::kLinex, cfg.linex_p};
  // draws are ordered (alpha, l0, l1, l2); study metrics use (l0,l1,l2,alpha).
  static constexpr int kCoord[4] = {1, 2, 3, 0};
  std::vector<double> coord(draws.draws.size());
  for (int k = 0; k < 4; ++k) {
    rec.est_self[k] = bayes_estimate(draws, self, kCoord[k]);
    rec.est_linex[k] = bayes_estimate(draws, linex, kCoord[k]);
    for (std::size_t i = 0; i < draws.draws.size(); ++i) {
      coord[i] = draws.draws[i][kCoord[k]];
    }
    const auto [lo, hi] = hpd_interval(coord, cfg.gamma, HpdWindow::kStandard);
    rec.hpd_lo[k] = lo;
    rec.hpd_hi[k] = hi;
    const auto [wlo, whi] = hpd_interval(coord, cfg.gamma, HpdWindow::kWide);
    rec.hpd_wide_lo[k] = wlo;
    rec.hpd_wide_hi[k] = whi;
  }
  rec.G = gelman_G(draws);
  rec.valid = true;
  return rec;
}

}  // namespace

MetricTable run_study(const StudyConfig& cfg) {
  cfg.truth.validate();
  if (cfg.replications < 1) {
    throw std::invalid_argument("run_study: replications must be >= 1");
  }
  MetricTable table;
  table.q = cfg.q;

  const std::array<double, 4> truth = {cfg.truth.lambda0, cfg.truth.lambda1,
                                       cfg.truth.lambda2, cfg.truth.alpha};

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;

  for (std::size_t ci = 0; ci < cfg.cells.size(); ++ci) {
    const StudyCell& cell = cfg.cells[ci];
    CensoringPlan plan{cell.n, cell.m, expand_scheme(cell.scheme, cell.n, cell.m),
                       cell.T};
    plan.validate();

    std::vector<RepRecord> reps(cfg.replications);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= cfg.replications) return;
        const std::uint64_t stream_id =
            (static_cast<std::uint64_t>(ci) << 32) | static_cast<std::uint64_t>(r);
        reps[r] = run_one(cfg, cell, plan, stream_id);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    CellMetrics m;
    for (const RepRecord& rec : reps) {
      if (!rec.valid) {
        ++m.excluded;
        continue;
      }
      ++m.valid;
      for (int k = 0; k < 4; ++k) {
        const double t = truth[k];
        m.ab_mle[k] += std::fabs(rec.est_mle[k] - t);
        m.ab_self[k] += std::fabs(rec.est_self[k] - t);
        m.ab_linex[k] += std::fabs(rec.est_linex[k] - t);
        m.mse_mle[k] += (rec.est_mle[k] - t) * (rec.est_mle[k] - t);
        m.mse_self[k] += (rec.est_self[k] - t) * (rec.est_self[k] - t);
        m.mse_linex[k] += (rec.est_linex[k] - t) * (rec.est_linex[k] - t);
        if (rec.aci_ok[k]) {
          ++m.aci_count[k];
          m.aw_aci[k] += rec.aci_hi[k] - rec.aci_lo[k];
          m.cp_aci[k] += rec.aci_lo[k] <= t && t <= rec.aci_hi[k] ? 1.0 : 0.0;
        }
        m.aw_hpd[k] += rec.hpd_hi[k] - rec.hpd_lo[k];
        m.cp_hpd[k] += rec.hpd_lo[k] <= t && t <= rec.hpd_hi[k] ? 1.0 : 0.0;
        m.aw_hpd_wide[k] += rec.hpd_wide_hi[k] - rec.hpd_wide_lo[k];
        m.cp_hpd_wide[k] +=
            rec.hpd_wide_lo[k] <= t && t <= rec.hpd_wide_hi[k] ? 1.0 : 0.0;
      }
      m.mean_G += rec.G;
    }
    if (m.valid > 0) {
      const double nv = static_cast<double>(m.valid);
      for (int k = 0; k < 4; ++k) {
        m.ab_mle[k] /= nv;
        m.ab_self[k] /= nv;
        m.ab_linex[k] /= nv;
        m.mse_mle[k] /= nv;
        m.mse_self[k] /= nv;
        m.mse_linex[k] /= nv;
        m.aw_hpd[k] /= nv;
        m.cp_hpd[k] /= nv;
        m.aw_hpd_wide[k] /= nv;
        m.cp_hpd_wide[k] /= nv;
        if (m.aci_count[k] > 0) {
          m.aw_aci[k] /= static_cast<double>(m.aci_count[k]);
          m.cp_aci[k] /= static_cast<double>(m.aci_count[k]);
        }
      }
      m.mean_G /= nv;
    }
    table.rows.emplace_back(cell, m);
  }
  return table;
}

void MetricTable::write_csv(std::ostream& os) const {
  os << "n,m,scheme,T,q,metric,estimator,lambda0,lambda1,lambda2,alpha\n";
  auto row = [&](const StudyCell& c, const char* metric, const char* est,
                 const std::array<double, 4>& v) {
    os << c.n << ',' << c.m << ',' << scheme_name(c.scheme) << ',' << c.T << ','
       << q << ',' << metric << ',' << est << ',' << v[0] << ',' << v[1] << ','
       << v[2] << ',' << v[3] << '\n';
  };
  for (const auto& [cell, m] : rows) {
    row(cell, "AB", "MLE", m.ab_mle);
    row(cell, "AB", "SELF", m.ab_self);
    row(cell, "AB", "LINEX", m.ab_linex);
    row(cell, "MSE", "MLE", m.mse_mle);
    row(cell, "MSE", "SELF", m.mse_self);
    row(cell, "MSE", "LINEX", m.mse_linex);
    row(cell, "AW", "ACI", m.aw_aci);
    row(cell, "CP", "ACI", m.cp_aci);
    row(cell, "AW", "HPD", m.aw_hpd);
    row(cell, "CP", "HPD", m.cp_hpd);
    row(cell, "AW", "HPD_wide", m.aw_hpd_wide);
    row(cell, "CP", "HPD_wide", m.cp_hpd_wide);
    row(cell, "G", "MCMC", {m.mean_G, m.mean_G, m.mean_G, m.mean_G});
    row(cell, "counts", "valid/excluded",
        {static_cast<double>(m.valid), static_cast<double>(m.excluded), 0.0,
         0.0});
  }
}

OptimalityCriteria optimality_criteria(const Mat4& fisher) {
  OptimalityCriteria c;
  double det = 0.0;
  const Mat4 inv = inverse(fisher, &det);
  if (det == 0.0 || !std::isfinite(det)) {
    throw std::runtime_error("optimality_criteria: singular Fisher matrix");
  }
  c.trace_inverse = inv.trace();
  c.det_inverse = 1.0 / det;
  c.trace = fisher.trace();
  return c;
}

OptimalityRanking rank_plans(const std::vector<OptimalityCriteria>& criteria) {
  if (criteria.empty()) {
    throw std::invalid_argument("rank_plans: no criteria");
  }
  OptimalityRanking r;
  for (std::size_t i = 1; i < criteria.size(); ++i) {
    if (criteria[i].trace_inverse < criteria[r.best_trace_inverse].trace_inverse) {
      r.best_trace_inverse = i;
    }
    if (criteria[i].det_inverse < criteria[r.best_det_inverse].det_inverse) {
      r.best_det_inverse = i;
    }
    if (criteria[i].trace > criteria[r.best_trace].trace) {
      r.best_trace = i;
    }
  }
  return r;
}

}  // namespace mobw
