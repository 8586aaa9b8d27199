#include "stochwave/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace stochwave {

EnsembleResult run_ensemble(const Problem& problem, const TimeSpec& ts, const EnsembleSpec& es,
                            double lambda) {
  if (es.n_paths == 0) throw ConfigError("mc.n_paths must be >= 1");
  ts.validate();
  const TimeGrid tg = resolve_time(ts, problem.grid(), problem.model().c);

  EnsembleResult out;
  out.records.resize(es.n_paths);
  unsigned workers = es.max_workers ? es.max_workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, es.n_paths));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < es.n_paths; i = next++) {
      try {
        out.records[i] = run_path(problem, ts, path_seed(es.master_seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = es.n_paths;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> axis;
  for (long k : checkpoint_steps(tg, ts.record_every)) axis.push_back(tg.time(k));
  out.stats = ensemble_stats(out.records, std::move(axis), lambda);
  return out;
}

ExplosionSummary explosion_summary(const std::vector<PathRecord>& records, const EnsembleStats& stats,
                                   std::optional<double> T0, double margin) {
  ExplosionSummary s;
  s.T0 = T0;
  s.margin = margin;
  std::vector<double> t_blow;
  for (const PathRecord& rec : records) {
    if (rec.blown_up && rec.t_blow) t_blow.push_back(*rec.t_blow);
  }
  std::sort(t_blow.begin(), t_blow.end());
  s.n_blown = t_blow.size();
  s.frac_blown_final = stats.frac_blown.empty() ? 0.0 : stats.frac_blown.back();
  if (t_blow.empty()) return s;
  s.t_blow_min = t_blow.front();
  s.t_blow_max = t_blow.back();
  const std::size_t n = t_blow.size();
  s.t_blow_median = n % 2 ? t_blow[n / 2] : 0.5 * (t_blow[n / 2 - 1] + t_blow[n / 2]);
  s.within_bound = T0 ? *s.t_blow_max <= *T0 * (1.0 + margin) : false;
  return s;
}

}  // namespace stochwave
