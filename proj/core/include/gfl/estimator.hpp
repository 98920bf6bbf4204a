#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gfl {

/// Statistical return type of every Monte Carlo quantity.
struct EstimatorResult {
  double mean = 0;
  double variance = 0;  // variance of the underlying samples, not of the mean
  double se = 0;        // standard error of `mean`
  std::size_t n = 0;
};

inline double combined_se(const EstimatorResult& a, const EstimatorResult& b) {
  return std::sqrt(a.se * a.se + b.se * b.se);
}

/// Mean and naive SE for independent samples (e.g. per-chain means).
inline EstimatorResult summarize(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("summarize: no samples");
  double m = 0;
  for (double x : xs) m += x;
  m /= static_cast<double>(n);
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  v = n > 1 ? v / static_cast<double>(n - 1) : 0.0;
  return {m, v, n > 1 ? std::sqrt(v / static_cast<double>(n)) : 0.0, n};
}

/// Batch-means SE for a correlated in-chain series.
inline EstimatorResult batch_means(const std::vector<double>& series, std::size_t n_batches = 32) {
  const std::size_t n = series.size();
  if (n == 0) throw std::invalid_argument("batch_means: empty series");
  n_batches = std::max<std::size_t>(2, std::min(n_batches, n));
  const std::size_t bs = n / n_batches;
  std::vector<double> bm;
  bm.reserve(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) s += series[i];
    bm.push_back(s / static_cast<double>(bs));
  }
  EstimatorResult r = summarize(bm);
  // report the sample variance of the raw series, SE from batch means
  double m = 0;
  for (double x : series) m += x;
  m /= static_cast<double>(n);
  double v = 0;
  for (double x : series) v += (x - m) * (x - m);
  r.mean = m;
  r.variance = n > 1 ? v / static_cast<double>(n - 1) : 0.0;
  r.n = n;
  return r;
}

/// Variance of a correlated series, SE via batch means of centered squares.
inline EstimatorResult variance_estimate(const std::vector<double>& series,
                                         std::size_t n_batches = 32) {
  const std::size_t n = series.size();
  if (n < 2) throw std::invalid_argument("variance_estimate: need >= 2 samples");
  double m = 0;
  for (double x : series) m += x;
  m /= static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (series[i] - m) * (series[i] - m);
  EstimatorResult r = batch_means(sq, n_batches);
  // r.mean is the biased variance; keep it (bias O(1/n) << SE at our sizes)
  return r;
}

}  // namespace gfl
