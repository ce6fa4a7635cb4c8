#include <dpg/numerics/stats.hpp>

#include <algorithm>
#include <cmath>

namespace dpg {

void RunningStats::add(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("RunningStats: non-finite sample");
  count += 1;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  sum_sq_dev += delta * (x - mean);
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

RunningStats running_stats_update(RunningStats stats, double x) {
  stats.add(x);
  return stats;
}

RunningStats merge(const RunningStats& a, const RunningStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  RunningStats out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * nb / n;
  out.sum_sq_dev = a.sum_sq_dev + b.sum_sq_dev + delta * delta * na * nb / n;
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

IntervalEstimate bootstrap_mean(std::span<const double> samples, int resamples,
                                std::uint64_t seed) {
  if (samples.empty()) throw InvalidArgument("bootstrap_mean: no samples");
  if (resamples < 1) throw InvalidArgument("bootstrap_mean: resamples must be >= 1");
  // Sorting first makes the result independent of sample order.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  IntervalEstimate est;
  double total = 0.0;
  for (double v : sorted) total += v;
  est.mean = total / static_cast<double>(sorted.size());

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sorted.size() - 1);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) s += sorted[pick(rng)];
    m = s / static_cast<double>(sorted.size());
  }
  std::sort(means.begin(), means.end());
  est.ci_low = std::min(quantile_sorted(means, 0.025), est.mean);
  est.ci_high = std::max(quantile_sorted(means, 0.975), est.mean);
  return est;
}

double cosine_similarity(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine_similarity: shape mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0) throw ZeroNormError("cosine_similarity: zero-norm vector", 0);
  if (nb == 0.0) throw ZeroNormError("cosine_similarity: zero-norm vector", 1);
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

CosineStats pairwise_cosine_stats(std::span<const ParamVector> vectors, int bootstrap_resamples,
                                  std::uint64_t seed) {
  if (vectors.size() < 2) throw InvalidArgument("pairwise_cosine_stats: need at least two vectors");
  std::vector<ParamVector> unit;
  unit.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != vectors[0].size()) {
      throw InvalidArgument("pairwise_cosine_stats: vectors differ in shape");
    }
    const double n = vectors[i].norm();
    if (n == 0.0) {
      throw ZeroNormError("pairwise_cosine_stats: zero-norm vector at index " + std::to_string(i),
                          static_cast<Index>(i));
    }
    unit.push_back(vectors[i] / n);
  }
  std::vector<double> cosines;
  cosines.reserve(unit.size() * (unit.size() - 1) / 2);
  for (std::size_t i = 0; i < unit.size(); ++i)
    for (std::size_t j = i + 1; j < unit.size(); ++j)
      cosines.push_back(std::clamp(unit[i].dot(unit[j]), -1.0, 1.0));
  CosineStats out;
  static_cast<IntervalEstimate&>(out) = bootstrap_mean(cosines, bootstrap_resamples, seed);
  out.pair_count = static_cast<Index>(cosines.size());
  return out;
}

}  // namespace dpg
