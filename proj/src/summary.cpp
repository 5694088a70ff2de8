#include "lesopt/summary.hpp"

#include <algorithm>
#include <cmath>

namespace lesopt {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile: q in [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - lo;
  return values[lo] + frac * (values[hi] - values[lo]);
}

SummaryTable summarize_records(const std::string& task, const std::string& algo,
                               const std::vector<std::vector<RunRecord>>& per_seed) {
  std::vector<const std::vector<RunRecord>*> streams;
  for (const auto& s : per_seed)
    if (!s.empty()) streams.push_back(&s);
  if (streams.empty()) throw std::invalid_argument("summarize: no completed seeds");

  SummaryTable table;
  table.task = task;
  table.algo = algo;

  int max_iter = 0;
  for (const auto* s : streams) max_iter = std::max(max_iter, s->back().iteration);

  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> best;
    for (const auto* s : streams) {
      // Last record at or before this iteration; stopped seeds carry forward.
      const RunRecord* last = nullptr;
      for (const auto& r : *s) {
        if (r.iteration > it) break;
        last = &r;
      }
      if (last) best.push_back(last->best_y);
    }
    if (best.empty()) continue;
    SummaryRow row;
    row.iteration = it;
    row.p25 = percentile(best, 0.25);
    row.median = percentile(best, 0.50);
    row.p75 = percentile(best, 0.75);
    table.rows.push_back(row);
  }

  std::vector<int> stop_iters;
  for (const auto* s : streams) {
    for (const auto& r : *s)
      if (r.stopped) {
        stop_iters.push_back(r.iteration);
        break;
      }
  }
  if (!stop_iters.empty()) {
    std::sort(stop_iters.begin(), stop_iters.end());
    const size_t n = streams.size();
    // Walk the stop times until half the seeds are covered.
    if (2 * stop_iters.size() >= n) {
      const size_t need = (n + 1) / 2;
      table.median_stop_iteration = stop_iters[need - 1];
    }
  }
  return table;
}

SummaryTable summarize(const std::string& task, const std::string& algo,
                       const std::vector<SeedRunResult>& results) {
  std::vector<std::vector<RunRecord>> per_seed;
  for (const auto& r : results)
    if (!r.failed) per_seed.push_back(r.records);
  return summarize_records(task, algo, per_seed);
}

}  // namespace lesopt
