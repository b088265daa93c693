// Exact-in-law simulation of (W, X, M, Z, Y) trajectories on a time grid and
// of the private Poisson observation arrivals. Path j is fully determined by
// (seed, j); generation is embarrassingly parallel by path index.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ceq/params.hpp"

namespace ceq {

struct TimeGrid {
  std::vector<double> points;  // strictly increasing, first 0, last 1

  static TimeGrid uniform(int steps);  // steps+1 points
  size_t size() const { return points.size(); }
  void validate() const;
  // Smallest index k with points[k] >= t (arrival snapping).
  size_t snap_at_or_after(double t) const;
};

struct PathBundle {
  const TimeGrid* grid = nullptr;
  std::vector<double> x;                        // X at grid points
  std::vector<std::vector<double>> m_noise;     // [agent][k]
  std::vector<std::vector<double>> z;           // z = f * x^alpha
  std::vector<std::vector<double>> y;           // y = z * m
  std::vector<std::vector<double>> arrivals;    // per-agent sorted times in (0,1)
  uint64_t seed = 0;
  uint64_t index = 0;
};

// Sorted arrival times in (0,1) of an inhomogeneous Poisson process with the
// given piecewise-constant intensity (exact per-piece gap sampling).
std::vector<double> sample_arrivals(const IntensityTable& lambda, Xoshiro256& rng);

std::vector<PathBundle> simulate_paths(const ModelSpec& spec, const TimeGrid& grid,
                                       uint64_t seed, int count, int threads = 0);

// Single-path variant used by parallel consumers.
PathBundle simulate_one_path(const ModelSpec& spec, const TimeGrid& grid,
                             uint64_t seed, uint64_t index);

// CSV dumps: one row per (path, time) and one row per (path, agent, arrival).
void dump_paths_csv(const std::vector<PathBundle>& paths, const std::string& file);
void dump_arrivals_csv(const std::vector<PathBundle>& paths, const std::string& file);

}  // namespace ceq
