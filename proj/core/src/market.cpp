#include "ceq/market.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "ceq/regression.hpp"

namespace ceq {

ScheduleCache::ScheduleCache(const MultiDynamics& dyn, const TimeGrid& grid) {
  const int m = dyn.derived().m;
  const size_t K = grid.size();
  cum_nu_hyp.assign(m, std::vector<double>(K, 0.0));
  for (int j = 0; j < m; ++j)
    for (size_t k = 1; k < K; ++k)
      cum_nu_hyp[j][k] = cum_nu_hyp[j][k - 1] +
          dyn.int_nu_hyp(j, grid.points[k - 1], grid.points[k]);
  log_beta_m.resize(K);
  for (size_t k = 0; k < K; ++k) log_beta_m[k] = dyn.log_beta_m(grid.points[k]);
}

namespace {

ValuationTrack run_one(const MultiDynamics& dyn, const ScheduleCache& cache,
                       const PathBundle& path) {
  const DerivedParams& d = dyn.derived();
  const int m = d.m;
  const TimeGrid& grid = *path.grid;
  const size_t K = grid.size();

  ValuationTrack tr;
  tr.grid = path.grid;
  tr.path_index = path.index;
  tr.gamma_tilde.assign(m, std::vector<double>(K));
  tr.s_price.assign(m, std::vector<double>(K));

  // Snap arrivals to the first grid point at or after the arrival time.
  std::vector<std::vector<int>> arrivals_at(K);
  for (int i = 0; i < m; ++i)
    for (double a : path.arrivals[i]) {
      const size_t k = grid.snap_at_or_after(a);
      if (k < K) arrivals_at[k].push_back(i);
    }

  size_t theta = 0;
  std::vector<double> carried(m);
  for (int i = 0; i < m; ++i) carried[i] = path.y[i][0];
  std::vector<double> log_anchor(m);  // log g*_i(theta)
  auto reanchor = [&](size_t k) {
    double lg = 0.0;
    for (int j = 0; j < m; ++j) lg += d.kappa[j + 1] * std::log(carried[j]);
    for (int i = 0; i < m; ++i)
      log_anchor[i] = std::log(d.k_multi[i]) + cache.log_beta_m[k] + lg;
  };
  reanchor(0);

  std::vector<double> y_cut(m);
  for (size_t k = 0; k < K; ++k) {
    // Decay integrals since the anchor.
    double dec_agg = 0.0;
    for (int j = 0; j < m; ++j)
      dec_agg += dyn.agg_coeff(j) * (cache.cum_nu_hyp[j][k] - cache.cum_nu_hyp[j][theta]);
    const double beta_drift =
        (cache.log_beta_m[k] - cache.log_beta_m[theta]) / (1.0 - d.kappa[0]);
    for (int i = 0; i < m; ++i) {
      double dec_i = 0.0;
      for (int j = 0; j < m; ++j)
        dec_i += dyn.cutoff_weight(i, j) *
                 (cache.cum_nu_hyp[j][k] - cache.cum_nu_hyp[j][theta]);
      y_cut[i] = std::exp(std::log(carried[i]) - dec_i - beta_drift);
      tr.gamma_tilde[i][k] = std::exp(log_anchor[i] - dec_agg);
      tr.s_price[i][k] = tr.gamma_tilde[i][k];
    }

    const bool terminal = (k == K - 1);
    std::vector<int> J;
    std::vector<double> vals;
    if (terminal) {
      // Mandatory disclosure of every Y_1.
      for (int i = 0; i < m; ++i) {
        J.push_back(i);
        vals.push_back(path.y[i][k]);
      }
    } else {
      for (int i : arrivals_at[k])
        if (path.y[i][k] >= y_cut[i]) {  // at-cutoff observations disclose
          J.push_back(i);
          vals.push_back(path.y[i][k]);
        }
      std::sort(J.begin(), J.end());
      J.erase(std::unique(J.begin(), J.end()), J.end());
      vals.clear();
      for (int i : J) vals.push_back(path.y[i][k]);
    }
    if (!J.empty()) {
      for (size_t q = 0; q < J.size(); ++q) carried[J[q]] = vals[q];
      for (int i = 0; i < m; ++i)
        if (std::find(J.begin(), J.end(), i) == J.end()) carried[i] = y_cut[i];
      theta = k;
      reanchor(k);
      for (int i = 0; i < m; ++i) tr.s_price[i][k] = std::exp(log_anchor[i]);
      tr.events.push_back(DisclosureEvent{grid.points[k], J, vals});
    }
  }
  return tr;
}

}  // namespace

std::vector<ValuationTrack> run_disclosure_game(const ModelSpec& spec,
                                                const std::vector<PathBundle>& paths,
                                                Convention conv, NuForm form,
                                                int threads) {
  if (paths.empty()) return {};
  const TimeGrid& grid = *paths[0].grid;
  for (const auto& p : paths)
    if (p.grid != &grid) throw std::invalid_argument("run_disclosure_game: grid mismatch");
  MultiDynamics dyn(derive(spec), spec.lambda, conv, form);
  ScheduleCache cache(dyn, grid);

  std::vector<ValuationTrack> out(paths.size());
  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(paths.size())));
  if (nthreads == 1) {
    for (size_t j = 0; j < paths.size(); ++j) out[j] = run_one(dyn, cache, paths[j]);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < nthreads; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        const size_t j = next.fetch_add(1);
        if (j >= paths.size()) return;
        out[j] = run_one(dyn, cache, paths[j]);
      }
    });
  for (auto& th : pool) th.join();
  return out;
}

MartingaleReport martingale_report(const std::vector<ValuationTrack>& tracks,
                                   double t, double s, int agent) {
  if (tracks.empty()) throw std::invalid_argument("martingale_report: no tracks");
  if (!(t < s)) throw std::invalid_argument("martingale_report: need t < s");
  const TimeGrid& grid = *tracks[0].grid;
  const size_t kt = grid.snap_at_or_after(t);
  const size_t ks = grid.snap_at_or_after(s);
  MartingaleReport rep;
  rep.t = grid.points[kt];
  rep.s = grid.points[ks];
  double sum = 0.0, sumsq = 0.0;
  long n = 0;
  double s_t = 0.0;
  for (const auto& tr : tracks) {
    bool silent = true;
    for (const auto& ev : tr.events)
      if (ev.t <= grid.points[kt] && ev.t < 1.0) { silent = false; break; }
    if (!silent) continue;
    const double v = tr.s_price[agent][ks];
    sum += v;
    sumsq += v * v;
    s_t = tr.s_price[agent][kt];
    ++n;
  }
  if (n < 100) throw std::runtime_error("martingale_report: fewer than 100 qualifying paths");
  rep.n = n;
  rep.s_t = s_t;
  rep.mean_s_s = sum / n;
  const double var = std::max(0.0, sumsq / n - rep.mean_s_s * rep.mean_s_s);
  rep.se = std::sqrt(var / n);
  rep.diff = rep.mean_s_s - rep.s_t;
  return rep;
}

void dump_tracks_csv(const std::vector<ValuationTrack>& tracks, const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + file);
  std::fprintf(fp, "path,t,agent,gamma_tilde,s_price\n");
  for (const auto& tr : tracks)
    for (size_t i = 0; i < tr.gamma_tilde.size(); ++i)
      for (size_t k = 0; k < tr.grid->size(); ++k)
        std::fprintf(fp, "%llu,%.17g,%zu,%.17g,%.17g\n",
                     (unsigned long long)tr.path_index, tr.grid->points[k], i + 1,
                     tr.gamma_tilde[i][k], tr.s_price[i][k]);
  std::fclose(fp);
}

void dump_events_csv(const std::vector<ValuationTrack>& tracks, const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + file);
  std::fprintf(fp, "path,t,agents,values\n");
  for (const auto& tr : tracks)
    for (const auto& ev : tr.events) {
      std::fprintf(fp, "%llu,%.17g,", (unsigned long long)tr.path_index, ev.t);
      for (size_t q = 0; q < ev.agents.size(); ++q)
        std::fprintf(fp, "%s%d", q ? ";" : "", ev.agents[q] + 1);
      std::fprintf(fp, ",");
      for (size_t q = 0; q < ev.values.size(); ++q)
        std::fprintf(fp, "%s%.17g", q ? ";" : "", ev.values[q]);
      std::fprintf(fp, "\n");
    }
  std::fclose(fp);
}

}  // namespace ceq
