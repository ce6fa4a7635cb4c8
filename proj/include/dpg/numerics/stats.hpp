#pragma once

#include <dpg/core.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace dpg {

// Welford accumulator; variance() is the population variance.
struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double sum_sq_dev = 0.0;

  void add(double x);
  double variance() const { return count > 0 ? sum_sq_dev / static_cast<double>(count) : 0.0; }
  double stddev() const;

  friend bool operator==(const RunningStats&, const RunningStats&) = default;
};

RunningStats running_stats_update(RunningStats stats, double x);

// Chan et al. parallel combination.
RunningStats merge(const RunningStats& a, const RunningStats& b);

class ZeroNormError : public InvalidArgument {
 public:
  ZeroNormError(const std::string& what, Index index) : InvalidArgument(what), index_(index) {}
  Index index() const { return index_; }

 private:
  Index index_;
};

struct IntervalEstimate {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Mean with a 95% percentile-bootstrap interval. The interval is widened to
// contain the mean if resampling put it outside.
IntervalEstimate bootstrap_mean(std::span<const double> samples, int resamples,
                                std::uint64_t seed);

double cosine_similarity(const ParamVector& a, const ParamVector& b);

struct CosineStats : IntervalEstimate {
  Index pair_count = 0;
};

// Mean cosine similarity over all unordered pairs with a bootstrap interval
// over the pair set. Invariant under permutation of `vectors`.
CosineStats pairwise_cosine_stats(std::span<const ParamVector> vectors,
                                  int bootstrap_resamples = 1000,
                                  std::uint64_t seed = 0);

}  // namespace dpg
