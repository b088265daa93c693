// Full disclosure game along simulated paths: censor schedules applied to
// private arrivals, the resulting public event log, valuation tracks
// gamma~_t^i (predictable, left limits) and price tracks S_t^i (optional,
// right-continuous).
#pragma once

#include <string>
#include <vector>

#include "ceq/censor_multi.hpp"
#include "ceq/paths.hpp"

namespace ceq {

struct DisclosureEvent {
  double t = 0.0;
  std::vector<int> agents;      // disclosing set J_t (0-based), non-empty
  std::vector<double> values;   // disclosed observations, aligned with agents
};

struct ValuationTrack {
  const TimeGrid* grid = nullptr;
  uint64_t path_index = 0;
  std::vector<std::vector<double>> gamma_tilde;  // [agent][k], left limit at t_k
  std::vector<std::vector<double>> s_price;      // [agent][k], right value at t_k
  std::vector<DisclosureEvent> events;           // voluntary events plus t=1 close
};

// Deterministic per-grid cache of the inter-disclosure integrals.
struct ScheduleCache {
  std::vector<std::vector<double>> cum_nu_hyp;  // [agent][k]: int_0^{t_k} nu_jhyp
  std::vector<double> log_beta_m;               // [k]
  ScheduleCache(const MultiDynamics& dyn, const TimeGrid& grid);
};

std::vector<ValuationTrack> run_disclosure_game(const ModelSpec& spec,
                                                const std::vector<PathBundle>& paths,
                                                Convention conv = Convention::kProof,
                                                NuForm form = NuForm::kThinned,
                                                int threads = 0);

struct MartingaleReport {
  double t = 0.0, s = 0.0;
  double s_t = 0.0;        // common S_t of the conditioning class
  double mean_s_s = 0.0;   // MC average of S_s over the class
  double se = 0.0;
  long n = 0;
  double diff = 0.0;       // mean_s_s - s_t
};

// E[S_s | public history up to t] vs S_t, on the class of paths with no
// disclosure up to t (agent 0). Throws if fewer than 100 paths qualify.
MartingaleReport martingale_report(const std::vector<ValuationTrack>& tracks,
                                   double t, double s, int agent = 0);

void dump_tracks_csv(const std::vector<ValuationTrack>& tracks, const std::string& file);
void dump_events_csv(const std::vector<ValuationTrack>& tracks, const std::string& file);

}  // namespace ceq
