#include "ssv/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <vector>

#include "ssv/common.hpp"
#include "ssv/simd/kernels.hpp"

namespace ssv {

// ---- autocorrelation -------------------------------------------------------

AcfResult acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n < 2) throw domain_error("acf requires at least 2 observations");
  if (max_lag >= n) throw domain_error("acf requires max_lag < n");

  const double mean = simd::sum(x) / static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = x[i] - mean;

  const double denom = simd::dot(c, c);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw domain_error("acf is undefined for a constant series");
  }

  AcfResult r;
  r.values.resize(max_lag + 1);
  const std::span<const double> cs(c);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    // Biased estimator: both numerator and denominator carry 1/n, which
    // cancels in the ratio.
    r.values[k] = simd::dot(cs.first(n - k), cs.subspan(k)) / denom;
  }
  const double band = 1.96 / std::sqrt(static_cast<double>(n));
  r.ci_lo = -band;
  r.ci_hi = band;
  return r;
}

// ---- periodogram -----------------------------------------------------------

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Periodogram periodogram(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 8) throw domain_error("periodogram requires at least 8 samples");
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw domain_error("periodogram input too long");
  }

  const double mean = simd::sum(x) / static_cast<double>(n);
  const std::size_t n_out = n / 2 + 1;

  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n_out);
  if (in == nullptr || out == nullptr) {
    fftw_free(in);
    fftw_free(out);
    throw domain_error("periodogram: allocation failed");
  }

  fftw_plan plan;
  {
    // FFTW planning and destruction mutate global planner state and are
    // not thread-safe; execution of a private plan is.
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    fftw_free(in);
    fftw_free(out);
    throw domain_error("periodogram: FFTW plan creation failed");
  }

  for (std::size_t i = 0; i < n; ++i) in[i] = x[i] - mean;
  fftw_execute(plan);

  Periodogram p;
  p.frequency.resize(n_out);
  p.power.resize(n_out);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n_out; ++k) {
    const double re = out[k][0];
    const double im = out[k][1];
    p.frequency[k] = static_cast<double>(k) * inv_n;
    p.power[k] = (re * re + im * im) * inv_n;
  }

  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return p;
}

// ---- augmented Dickey-Fuller ------------------------------------------------

namespace {

// MacKinnon (2010) response-surface coefficients for the constant, no-trend
// case: cv = b0 + b1/T + b2/T^2 + b3/T^3.
constexpr double kAdfCv[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},  // 1%
    {-2.86154, -2.8903, -4.234, -40.040},   // 5%
    {-2.56677, -1.5384, -2.809, 0.0},       // 10%
};

double mackinnon_cv(int level, double t_obs) {
  const double* b = kAdfCv[level];
  return b[0] + b[1] / t_obs + b[2] / (t_obs * t_obs) +
         b[3] / (t_obs * t_obs * t_obs);
}

// Dense symmetric helpers for the small normal-equation systems (k <= ~40).
// Returns false when the matrix is numerically singular.
bool cholesky_lower(const std::vector<double>& g, int k,
                    std::vector<double>& l) {
  l.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[static_cast<std::size_t>(i) * k + j];
      for (int m = 0; m < j; ++m) {
        s -= l[static_cast<std::size_t>(i) * k + m] *
             l[static_cast<std::size_t>(j) * k + m];
      }
      if (i == j) {
        const double scale = std::max(g[static_cast<std::size_t>(i) * k + i],
                                      1e-300);
        if (!(s > 1e-12 * scale)) return false;
        l[static_cast<std::size_t>(i) * k + i] = std::sqrt(s);
      } else {
        l[static_cast<std::size_t>(i) * k + j] =
            s / l[static_cast<std::size_t>(j) * k + j];
      }
    }
  }
  return true;
}

void chol_solve(const std::vector<double>& l, int k,
                const std::vector<double>& rhs, std::vector<double>& sol) {
  sol = rhs;
  for (int i = 0; i < k; ++i) {  // forward: L z = rhs
    double s = sol[i];
    for (int j = 0; j < i; ++j) {
      s -= l[static_cast<std::size_t>(i) * k + j] * sol[j];
    }
    sol[i] = s / l[static_cast<std::size_t>(i) * k + i];
  }
  for (int i = k - 1; i >= 0; --i) {  // backward: L^T x = z
    double s = sol[i];
    for (int j = i + 1; j < k; ++j) {
      s -= l[static_cast<std::size_t>(j) * k + i] * sol[j];
    }
    sol[i] = s / l[static_cast<std::size_t>(i) * k + i];
  }
}

// Column-prefix design for the ADF regression on rows t = first_t..n-1:
// response dy_t, columns [1, y_{t-1}, dy_{t-1}, ..., dy_{t-p_max}].
struct AdfDesign {
  int t_obs = 0;
  int k = 0;
  std::vector<double> gram;  // k x k
  std::vector<double> xty;   // k
  double yty = 0.0;
};

AdfDesign build_design(std::span<const double> y,
                       const std::vector<double>& dy, int first_t,
                       int p_max) {
  const int n = static_cast<int>(y.size());
  AdfDesign d;
  d.t_obs = n - first_t;
  d.k = p_max + 2;
  d.gram.assign(static_cast<std::size_t>(d.k) * d.k, 0.0);
  d.xty.assign(d.k, 0.0);

  std::vector<double> row(d.k);
  for (int t = first_t; t < n; ++t) {
    const double resp = dy[t - 1];
    row[0] = 1.0;
    row[1] = y[t - 1];
    for (int i = 1; i <= p_max; ++i) row[1 + i] = dy[t - i - 1];
    for (int a = 0; a < d.k; ++a) {
      d.xty[a] += row[a] * resp;
      for (int b = 0; b <= a; ++b) {
        d.gram[static_cast<std::size_t>(a) * d.k + b] += row[a] * row[b];
      }
    }
    d.yty += resp * resp;
  }
  for (int a = 0; a < d.k; ++a) {
    for (int b = a + 1; b < d.k; ++b) {
      d.gram[static_cast<std::size_t>(a) * d.k + b] =
          d.gram[static_cast<std::size_t>(b) * d.k + a];
    }
  }
  return d;
}

// Leading (kp x kp) block of the design, packed densely.
void leading_block(const AdfDesign& d, int kp, std::vector<double>& g,
                   std::vector<double>& v) {
  g.resize(static_cast<std::size_t>(kp) * kp);
  v.resize(kp);
  for (int a = 0; a < kp; ++a) {
    v[a] = d.xty[a];
    for (int b = 0; b < kp; ++b) {
      g[static_cast<std::size_t>(a) * kp + b] =
          d.gram[static_cast<std::size_t>(a) * d.k + b];
    }
  }
}

}  // namespace

AdfResult adf_test(std::span<const double> x, int max_lags) {
  const int n = static_cast<int>(x.size());
  if (n < 25) throw domain_error("adf_test requires at least 25 observations");

  if (max_lags < 0) {
    max_lags = static_cast<int>(
        std::ceil(12.0 * std::pow(n / 100.0, 0.25)));
    // Keep enough rows for the widest candidate regression plus slack.
    max_lags = std::min(max_lags, (n - 8) / 2);
  }
  // Candidate scoring needs t = max_lags+1..n-1 with k = max_lags+2
  // parameters and a few residual degrees of freedom.
  if (n - 1 - max_lags < max_lags + 7) {
    throw domain_error("adf_test: max_lags too large for series length");
  }

  std::vector<double> dy(n - 1);
  for (int t = 1; t < n; ++t) dy[t - 1] = x[t] - x[t - 1];

  // Stage 1: pick the lag order by AIC, all candidates on the common sample.
  const AdfDesign sel = build_design(x, dy, max_lags + 1, max_lags);
  int best_p = -1;
  double best_aic = std::numeric_limits<double>::infinity();
  std::vector<double> g, v, l, beta;
  for (int p = 0; p <= max_lags; ++p) {
    const int kp = p + 2;
    leading_block(sel, kp, g, v);
    if (!cholesky_lower(g, kp, l)) continue;
    chol_solve(l, kp, v, beta);
    double quad = 0.0;
    for (int a = 0; a < kp; ++a) {
      double gb = 0.0;
      for (int b = 0; b < kp; ++b) {
        gb += g[static_cast<std::size_t>(a) * kp + b] * beta[b];
      }
      quad += beta[a] * (gb - 2.0 * v[a]);
    }
    const double ssr = std::max(sel.yty + quad, 0.0);
    const double t_sel = static_cast<double>(sel.t_obs);
    if (!(ssr > 0.0)) {
      throw domain_error("adf_test: zero residual variance");
    }
    const double aic = t_sel * std::log(ssr / t_sel) + 2.0 * kp;
    if (aic < best_aic) {
      best_aic = aic;
      best_p = p;
    }
  }
  if (best_p < 0) throw domain_error("adf_test: regression is singular");

  // Stage 2: refit the winner on its own full sample.
  const AdfDesign fin = build_design(x, dy, best_p + 1, best_p);
  const int k = fin.k;
  leading_block(fin, k, g, v);
  if (!cholesky_lower(g, k, l)) {
    throw domain_error("adf_test: regression is singular");
  }
  chol_solve(l, k, v, beta);

  double ssr = 0.0;
  for (int t = best_p + 1; t < n; ++t) {
    double fit = beta[0] + beta[1] * x[t - 1];
    for (int i = 1; i <= best_p; ++i) fit += beta[1 + i] * dy[t - i - 1];
    const double res = dy[t - 1] - fit;
    ssr += res * res;
  }
  const int dof = fin.t_obs - k;
  if (dof <= 0) throw domain_error("adf_test: not enough observations");
  const double sigma_sq = ssr / static_cast<double>(dof);
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    throw domain_error("adf_test: zero residual variance");
  }

  // var(gamma_hat) = sigma^2 * (X'X)^-1[1][1]
  std::vector<double> e1(k, 0.0), col;
  e1[1] = 1.0;
  chol_solve(l, k, e1, col);
  const double var_gamma = sigma_sq * col[1];
  if (!(var_gamma > 0.0)) throw domain_error("adf_test: degenerate variance");

  AdfResult r;
  r.statistic = beta[1] / std::sqrt(var_gamma);
  r.lags_used = best_p;
  const double t_obs = static_cast<double>(fin.t_obs);
  r.cv_1 = mackinnon_cv(0, t_obs);
  r.cv_5 = mackinnon_cv(1, t_obs);
  r.cv_10 = mackinnon_cv(2, t_obs);
  r.reject_1 = r.statistic < r.cv_1;
  r.reject_5 = r.statistic < r.cv_5;
  r.reject_10 = r.statistic < r.cv_10;
  return r;
}

// ---- histogram ---------------------------------------------------------------

Histogram histogram(std::span<const double> x, std::size_t n_bins) {
  if (x.empty()) throw domain_error("histogram requires nonempty data");
  if (n_bins == 0) throw domain_error("histogram requires n_bins >= 1");

  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw domain_error("histogram requires finite data");
  }

  Histogram h;
  const double n = static_cast<double>(x.size());

  if (lo == hi) {
    // All values identical: one token bin centered on the value.
    const double eps = std::max(std::fabs(lo) * 1e-9, 1e-9);
    h.bin_lo = {lo - 0.5 * eps};
    h.bin_hi = {lo + 0.5 * eps};
    h.counts = {x.size()};
    h.density = {1.0 / (h.bin_hi[0] - h.bin_lo[0])};
    return h;
  }

  h.bin_lo.resize(n_bins);
  h.bin_hi.resize(n_bins);
  h.counts.assign(n_bins, 0);
  h.density.resize(n_bins);

  const double range = hi - lo;
  for (std::size_t i = 0; i < n_bins; ++i) {
    h.bin_lo[i] = lo + range * (static_cast<double>(i) /
                                static_cast<double>(n_bins));
    h.bin_hi[i] = (i + 1 == n_bins)
                      ? hi
                      : lo + range * (static_cast<double>(i + 1) /
                                      static_cast<double>(n_bins));
  }

  const double scale = static_cast<double>(n_bins) / range;
  for (double v : x) {
    auto idx = static_cast<std::size_t>((v - lo) * scale);
    if (idx >= n_bins) idx = n_bins - 1;  // v == hi joins the last bin
    ++h.counts[idx];
  }
  for (std::size_t i = 0; i < n_bins; ++i) {
    h.density[i] = static_cast<double>(h.counts[i]) /
                   (n * (h.bin_hi[i] - h.bin_lo[i]));
  }
  return h;
}

// ---- serialization -------------------------------------------------------------

void serialize_acf(const AcfResult& r, std::ostream& out) {
  out << "lag,acf,ci_lo,ci_hi\n";
  char buf[128];
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", k, r.values[k],
                  r.ci_lo, r.ci_hi);
    out << buf;
  }
}

void serialize_periodogram(const Periodogram& p, std::ostream& out) {
  out << "frequency,power\n";
  char buf[96];
  for (std::size_t k = 0; k < p.frequency.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.frequency[k],
                  p.power[k]);
    out << buf;
  }
}

void serialize_histogram(const Histogram& h, std::ostream& out) {
  out << "bin_lo,bin_hi,count,density\n";
  char buf[160];
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu,%.17g\n", h.bin_lo[i],
                  h.bin_hi[i], h.counts[i], h.density[i]);
    out << buf;
  }
}

}  // namespace ssv
