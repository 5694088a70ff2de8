#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lesopt/experiment.hpp"

namespace lesopt {

// q-quantile with linear interpolation between order statistics: the value at
// fractional position (n - 1) * q of the sorted sample.
double percentile(std::vector<double> values, double q);

struct SummaryRow {
  int iteration = 0;
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
};

struct SummaryTable {
  std::string task;
  std::string algo;
  std::vector<SummaryRow> rows;
  // Smallest iteration by which at least half of the seeds had stopped.
  std::optional<int> median_stop_iteration;
};

// Percentiles of best-so-far per iteration over completed seeds. Seeds that
// stopped early carry their final best value forward.
SummaryTable summarize(const std::string& task, const std::string& algo,
                       const std::vector<SeedRunResult>& results);

// Same, from parsed record streams grouped per seed.
SummaryTable summarize_records(const std::string& task, const std::string& algo,
                               const std::vector<std::vector<RunRecord>>& per_seed);

}  // namespace lesopt
