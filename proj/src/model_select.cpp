#include "ssv/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "ssv/common.hpp"
#include "ssv/parallel.hpp"
#include "ssv/rng.hpp"
#include "ssv/simd/kernels.hpp"

namespace ssv {

namespace {

constexpr double kLogBfClamp = 700.0;  // exp stays finite and nonzero

}  // namespace

EvidenceEstimate evidence_mc(const ReturnSeries& data, const ModelSpec& model,
                             std::size_t n_draws, std::uint64_t seed) {
  validate_model(model);
  if (n_draws == 0) {
    throw domain_error("evidence_mc requires n_draws >= 1");
  }
  const SufficientStats stats = SufficientStats::from(data.values, model.mu);

  // One stream per (seed, model): identical models see identical draws, and
  // growing n_draws only appends to the sequence.
  Rng rng(derive_seed(seed, model_digest(model)));
  std::vector<double> ll(n_draws);
  {
    std::vector<double> thetas(n_draws);
    for (double& t : thetas) t = sample_theta(model, rng);
    simd::gaussian_loglik(thetas, stats.n, stats.mean_sq_dev, ll);
  }

  const double m = simd::max(ll);
  if (!std::isfinite(m)) {
    throw domain_error(
        "evidence_mc: all prior draws have vanishing likelihood");
  }

  const double lse = simd::logsumexp(ll);
  const double k = static_cast<double>(n_draws);
  EvidenceEstimate est;
  est.log_value = lse - std::log(k);
  est.n_draws = n_draws;
  est.model = model;

  if (n_draws == 1) {
    est.std_error = 0.0;
    return est;
  }

  // Delta method on the shifted weights w'_k = exp(ll_k - m): the standard
  // error of log(mean w') equals sd(w') / (sqrt(K) * mean(w')), and the
  // shift cancels in the ratio.
  std::vector<double> w(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) ll[i] -= m;
  simd::exp(ll, w);
  const double mean_w = simd::sum(w) / k;
  const double ss = simd::sum_sq_dev(w, mean_w);
  const double sd_w = std::sqrt(ss / (k - 1.0));
  est.std_error = sd_w / (std::sqrt(k) * mean_w);
  return est;
}

double bayes_factor(const ReturnSeries& data, const ModelSpec& m1,
                    const ModelSpec& m2, std::size_t n_draws,
                    std::uint64_t seed) {
  const EvidenceEstimate e1 = evidence_mc(data, m1, n_draws, seed);
  const EvidenceEstimate e2 = evidence_mc(data, m2, n_draws, seed);
  const double diff =
      std::clamp(e1.log_value - e2.log_value, -kLogBfClamp, kLogBfClamp);
  return std::exp(diff);
}

BayesFactorSeries bf_series(const ReturnSeries& data, const ModelSpec& m1,
                            const ModelSpec& m2, std::size_t n_series,
                            std::size_t n_draws, std::uint64_t seed,
                            unsigned n_threads) {
  validate_model(m1);
  validate_model(m2);
  if (n_series == 0) {
    throw domain_error("bf_series requires n_series >= 1");
  }

  BayesFactorSeries series;
  series.values.resize(n_series);
  series.m1 = m1;
  series.m2 = m2;
  series.seed = seed;

  parallel_for(n_series, n_threads, [&](std::size_t i) {
    series.values[i] =
        bayes_factor(data, m1, m2, n_draws, derive_seed(seed, i));
  });
  return series;
}

PreferenceSummary preference_summary(const BayesFactorSeries& series) {
  if (series.values.empty()) {
    throw domain_error("preference_summary requires a non-empty series");
  }
  const double n = static_cast<double>(series.values.size());
  double above = 0.0;
  for (double v : series.values) {
    if (v > 1.0) above += 1.0;
  }
  PreferenceSummary out;
  out.fraction_m1 = above / n;
  out.mean_bf = simd::sum(series.values) / n;
  return out;
}

namespace {

/// 9 log-spaced points spanning [lo, hi] inclusive.
std::vector<double> log_grid(double lo, double hi) {
  constexpr int kPoints = 9;
  std::vector<double> g(kPoints);
  const double step = std::log(hi / lo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) g[i] = lo * std::exp(step * i);
  return g;
}

GridFit best_over(const ReturnSeries& data,
                  const std::vector<ModelSpec>& candidates,
                  std::size_t n_draws, std::uint64_t seed) {
  GridFit best{candidates.front(),
               -std::numeric_limits<double>::infinity()};
  for (const ModelSpec& m : candidates) {
    const EvidenceEstimate e = evidence_mc(data, m, n_draws, seed);
    if (e.log_value > best.log_evidence) {
      best.model = m;
      best.log_evidence = e.log_value;
    }
  }
  return best;
}

}  // namespace

GridFit fit_iga_grid(const ReturnSeries& data, std::size_t n_draws,
                     std::uint64_t seed, double mu) {
  const SufficientStats stats = SufficientStats::from(data.values, mu);
  if (!(stats.mean_sq_dev > 0.0)) {
    throw domain_error("fit_iga_grid: data has zero variance about mu");
  }
  const std::vector<double> alphas = log_grid(0.5, 32.0);
  const std::vector<double> betas =
      log_grid(stats.mean_sq_dev / 16.0, stats.mean_sq_dev * 16.0);
  std::vector<ModelSpec> candidates;
  candidates.reserve(alphas.size() * betas.size());
  for (double a : alphas) {
    for (double b : betas) {
      candidates.push_back(ModelSpec{IGaLaw{a, b}, mu});
    }
  }
  return best_over(data, candidates, n_draws, seed);
}

GridFit fit_logn_grid(const ReturnSeries& data, std::size_t n_draws,
                      std::uint64_t seed, double mu) {
  const SufficientStats stats = SufficientStats::from(data.values, mu);
  if (!(stats.mean_sq_dev > 0.0)) {
    throw domain_error("fit_logn_grid: data has zero variance about mu");
  }
  std::vector<ModelSpec> candidates;
  for (double s : log_grid(0.125, 8.0)) {
    candidates.push_back(ModelSpec{LogNLaw{s}, mu});
  }
  return best_over(data, candidates, n_draws, seed);
}

void serialize_bf_series(const BayesFactorSeries& series, std::ostream& out) {
  out << "iter,bf\n";
  char buf[64];
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, series.values[i]);
    out << buf;
  }
}

}  // namespace ssv
