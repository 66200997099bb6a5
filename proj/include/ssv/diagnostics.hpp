#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ssv {

/// Sample autocorrelation with the biased (1/n) normalization, lags
/// 0..max_lag, and the white-noise 95% band +-1.96/sqrt(n).
struct AcfResult {
  std::vector<double> values;  // values[0] == 1 exactly
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Throws ssv::domain_error if the series is constant or max_lag >= n.
AcfResult acf(std::span<const double> x, std::size_t max_lag);

/// One-sided periodogram of the mean-removed series: power[k] = |X_k|^2 / n
/// at frequency k/n cycles per sample, k = 0..floor(n/2). Requires n >= 8.
struct Periodogram {
  std::vector<double> frequency;
  std::vector<double> power;
};

Periodogram periodogram(std::span<const double> x);

/// Augmented Dickey-Fuller unit-root test with drift and no trend. The lag
/// order is chosen by AIC over 0..max_lags (all candidates scored on the
/// common sample implied by max_lags, then the winner is refit on its own
/// full sample). Critical values follow the MacKinnon (2010) response
/// surface for the constant-only case. Pass max_lags < 0 to use the
/// ceil(12*(n/100)^(1/4)) default.
struct AdfResult {
  double statistic = 0.0;
  int lags_used = 0;
  bool reject_1 = false;
  bool reject_5 = false;
  bool reject_10 = false;
  double cv_1 = 0.0;
  double cv_5 = 0.0;
  double cv_10 = 0.0;
};

AdfResult adf_test(std::span<const double> x, int max_lags = -1);

/// Equal-width histogram over [min, max]; every bin is [lo, hi) except the
/// last, which is [lo, hi] so the maximum is counted. A zero-width range
/// degenerates to one tiny bin around the common value. density integrates
/// to 1.
struct Histogram {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<std::size_t> counts;
  std::vector<double> density;
};

Histogram histogram(std::span<const double> x, std::size_t n_bins);

// CSV writers (no manifest line; callers prepend provenance comments).
void serialize_acf(const AcfResult& r, std::ostream& out);          // lag,acf,ci_lo,ci_hi
void serialize_periodogram(const Periodogram& p, std::ostream& out);  // frequency,power
void serialize_histogram(const Histogram& h, std::ostream& out);  // bin_lo,bin_hi,count,density

}  // namespace ssv
