#include "ceq/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "ceq/rng.hpp"

namespace ceq {

TimeGrid TimeGrid::uniform(int steps) {
  if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  TimeGrid g;
  g.points.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) g.points[k] = static_cast<double>(k) / steps;
  g.points.back() = 1.0;
  return g;
}

void TimeGrid::validate() const {
  if (points.size() < 2 || points.front() != 0.0 || points.back() != 1.0)
    throw std::invalid_argument("TimeGrid: need points from 0 to 1");
  for (size_t k = 0; k + 1 < points.size(); ++k)
    if (!(points[k] < points[k + 1]))
      throw std::invalid_argument("TimeGrid: points must be strictly increasing");
}

size_t TimeGrid::snap_at_or_after(double t) const {
  auto it = std::lower_bound(points.begin(), points.end(), t);
  return static_cast<size_t>(it - points.begin());
}

std::vector<double> sample_arrivals(const IntensityTable& lambda, Xoshiro256& rng) {
  std::vector<double> out;
  // Piecewise-constant intensity: exponential gaps within each piece are exact.
  for (size_t p = 0; p < lambda.rates.size(); ++p) {
    const double rate = lambda.rates[p];
    if (rate <= 0.0) continue;
    double t = lambda.breaks[p];
    const double end = lambda.breaks[p + 1];
    for (;;) {
      t += rng.exponential(rate);
      if (t >= end) break;
      if (t > 0.0 && t < 1.0) out.push_back(t);
    }
  }
  return out;
}

namespace {

// Stream ids: 0 -> X; 1..m -> M^i; m+1..2m -> arrivals of agent i.
constexpr uint64_t kArrivalStreamBase = 1;

}  // namespace

PathBundle simulate_one_path(const ModelSpec& spec, const TimeGrid& grid,
                             uint64_t seed, uint64_t index) {
  const size_t K = grid.size();
  const int m = spec.m;
  PathBundle b;
  b.grid = &grid;
  b.seed = seed;
  b.index = index;
  b.x.resize(K);
  b.m_noise.assign(m, std::vector<double>(K));
  b.z.assign(m, std::vector<double>(K));
  b.y.assign(m, std::vector<double>(K));
  b.arrivals.resize(m);

  {
    Xoshiro256 rx = make_stream(seed, index, 0);
    double lx = std::log(spec.x0);
    b.x[0] = spec.x0;
    for (size_t k = 1; k < K; ++k) {
      const double h = grid.points[k] - grid.points[k - 1];
      lx += spec.sigma0 * std::sqrt(h) * rx.normal() - 0.5 * spec.sigma0 * spec.sigma0 * h;
      b.x[k] = std::exp(lx);
    }
  }
  for (int i = 0; i < m; ++i) {
    Xoshiro256 ri = make_stream(seed, index, 1 + static_cast<uint64_t>(i));
    const double sm = spec.sigmaM[i];
    double lm = std::log(spec.m0[i]);
    b.m_noise[i][0] = spec.m0[i];
    for (size_t k = 1; k < K; ++k) {
      const double h = grid.points[k] - grid.points[k - 1];
      lm += sm * std::sqrt(h) * ri.normal() - 0.5 * sm * sm * h;
      b.m_noise[i][k] = std::exp(lm);
    }
    for (size_t k = 0; k < K; ++k) {
      b.z[i][k] = spec.f[i] * std::pow(b.x[k], spec.alpha[i]);
      b.y[i][k] = b.z[i][k] * b.m_noise[i][k];
    }
    Xoshiro256 ra = make_stream(seed, index,
                                kArrivalStreamBase + static_cast<uint64_t>(m + i));
    b.arrivals[i] = sample_arrivals(spec.lambda[i], ra);
  }
  return b;
}

std::vector<PathBundle> simulate_paths(const ModelSpec& spec, const TimeGrid& grid,
                                       uint64_t seed, int count, int threads) {
  spec.validate();
  grid.validate();
  if (count < 1) throw std::invalid_argument("simulate_paths: count must be >= 1");
  std::vector<PathBundle> out(count);
  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, count));
  if (nthreads == 1) {
    for (int j = 0; j < count; ++j) out[j] = simulate_one_path(spec, grid, seed, j);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < nthreads; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int j = next.fetch_add(1);
        if (j >= count) return;
        out[j] = simulate_one_path(spec, grid, seed, j);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

void dump_paths_csv(const std::vector<PathBundle>& paths, const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + file);
  const int m = paths.empty() ? 0 : static_cast<int>(paths[0].m_noise.size());
  std::fprintf(fp, "path,t,x");
  for (int i = 1; i <= m; ++i) std::fprintf(fp, ",m_%d", i);
  for (int i = 1; i <= m; ++i) std::fprintf(fp, ",z_%d", i);
  for (int i = 1; i <= m; ++i) std::fprintf(fp, ",y_%d", i);
  std::fprintf(fp, "\n");
  for (const auto& b : paths) {
    for (size_t k = 0; k < b.grid->size(); ++k) {
      std::fprintf(fp, "%llu,%.17g,%.17g", (unsigned long long)b.index,
                   b.grid->points[k], b.x[k]);
      for (int i = 0; i < m; ++i) std::fprintf(fp, ",%.17g", b.m_noise[i][k]);
      for (int i = 0; i < m; ++i) std::fprintf(fp, ",%.17g", b.z[i][k]);
      for (int i = 0; i < m; ++i) std::fprintf(fp, ",%.17g", b.y[i][k]);
      std::fprintf(fp, "\n");
    }
  }
  std::fclose(fp);
}

void dump_arrivals_csv(const std::vector<PathBundle>& paths, const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot write " + file);
  std::fprintf(fp, "path,agent,time\n");
  for (const auto& b : paths)
    for (size_t i = 0; i < b.arrivals.size(); ++i)
      for (double t : b.arrivals[i])
        std::fprintf(fp, "%llu,%zu,%.17g\n", (unsigned long long)b.index, i + 1, t);
  std::fclose(fp);
}

}  // namespace ceq
