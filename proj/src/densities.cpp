#include "ssv/densities.hpp"

#include <cmath>
#include <cstdio>

#include "ssv/common.hpp"
#include "ssv/simd/kernels.hpp"
#include "ssv/special.hpp"

namespace ssv {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw domain_error(std::string(what) + " must be positive and finite");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void validate_model(const ModelSpec& m) {
  std::visit(
      [](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, IGaLaw>) {
          require_positive(law.alpha, "IGa alpha");
          require_positive(law.beta, "IGa beta");
        } else if constexpr (std::is_same_v<T, LogNLaw>) {
          require_positive(law.s, "LogN s");
        } else {
          require_positive(law.nu0, "ScaledInvChi2 nu0");
          require_positive(law.sigma0_sq, "ScaledInvChi2 sigma0_sq");
        }
      },
      m.law);
  if (!std::isfinite(m.mu)) throw domain_error("model mu must be finite");
}

SufficientStats SufficientStats::from(std::span<const double> x, double mu) {
  if (x.empty()) throw domain_error("sufficient stats require nonempty data");
  const double n = static_cast<double>(x.size());
  return SufficientStats{n, simd::sum_sq_dev(x, mu) / n};
}

double igamma_log_pdf(double theta, double alpha, double beta) {
  require_positive(alpha, "IGa alpha");
  require_positive(beta, "IGa beta");
  if (!(theta > 0.0)) throw domain_error("igamma_log_pdf requires theta > 0");
  return alpha * std::log(beta) - lgamma_pos(alpha) -
         (alpha + 1.0) * std::log(theta) - beta / theta;
}

double lognormal_log_pdf(double theta, double s) {
  require_positive(s, "LogN s");
  if (!(theta > 0.0))
    throw domain_error("lognormal_log_pdf requires theta > 0");
  const double lt = std::log(theta);
  return -std::log(s) - lt - kHalfLog2Pi - lt * lt / (2.0 * s * s);
}

double scaled_inv_chi2_log_pdf(double theta, double nu0, double sigma0_sq) {
  require_positive(nu0, "ScaledInvChi2 nu0");
  require_positive(sigma0_sq, "ScaledInvChi2 sigma0_sq");
  return igamma_log_pdf(theta, 0.5 * nu0, 0.5 * nu0 * sigma0_sq);
}

double prior_log_pdf(const ModelSpec& m, double theta) {
  return std::visit(
      [theta](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, IGaLaw>)
          return igamma_log_pdf(theta, law.alpha, law.beta);
        else if constexpr (std::is_same_v<T, LogNLaw>)
          return lognormal_log_pdf(theta, law.s);
        else
          return scaled_inv_chi2_log_pdf(theta, law.nu0, law.sigma0_sq);
      },
      m.law);
}

double prior_log_pdf_grad(const ModelSpec& m, double theta) {
  if (!(theta > 0.0))
    throw domain_error("prior_log_pdf_grad requires theta > 0");
  return std::visit(
      [theta](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, IGaLaw>) {
          return -(law.alpha + 1.0) / theta + law.beta / (theta * theta);
        } else if constexpr (std::is_same_v<T, LogNLaw>) {
          return -(1.0 + std::log(theta) / (law.s * law.s)) / theta;
        } else {
          const double a = 0.5 * law.nu0;
          const double b = 0.5 * law.nu0 * law.sigma0_sq;
          return -(a + 1.0) / theta + b / (theta * theta);
        }
      },
      m.law);
}

double sample_theta(const ModelSpec& m, Rng& rng) {
  validate_model(m);
  return std::visit(
      [&rng](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, IGaLaw>) {
          return law.beta / rng.gamma(law.alpha);
        } else if constexpr (std::is_same_v<T, LogNLaw>) {
          return std::exp(law.s * rng.normal());
        } else {
          return 0.5 * law.nu0 * law.sigma0_sq / rng.gamma(0.5 * law.nu0);
        }
      },
      m.law);
}

double gaussian_log_likelihood(const SufficientStats& stats, double theta) {
  if (!(theta > 0.0))
    throw domain_error("gaussian_log_likelihood requires theta > 0");
  const double half_n = 0.5 * stats.n;
  return -half_n * (2.0 * kHalfLog2Pi + std::log(theta)) -
         half_n * stats.mean_sq_dev / theta;
}

double gaussian_log_likelihood(std::span<const double> data, double mu,
                               double theta) {
  return gaussian_log_likelihood(SufficientStats::from(data, mu), theta);
}

double log_unnormalized_posterior(double theta, const SufficientStats& stats,
                                  const ModelSpec& m) {
  return prior_log_pdf(m, theta) + gaussian_log_likelihood(stats, theta);
}

double log_unnormalized_posterior_grad(double theta,
                                       const SufficientStats& stats,
                                       const ModelSpec& m) {
  if (!(theta > 0.0))
    throw domain_error("posterior gradient requires theta > 0");
  const double half_n = 0.5 * stats.n;
  const double lik_grad =
      -half_n / theta + half_n * stats.mean_sq_dev / (theta * theta);
  return prior_log_pdf_grad(m, theta) + lik_grad;
}

IGaLaw conjugate_posterior_iga(double alpha, double beta,
                               const SufficientStats& stats) {
  require_positive(alpha, "IGa alpha");
  require_positive(beta, "IGa beta");
  if (!(stats.n >= 1.0)) throw domain_error("conjugate update requires n >= 1");
  return IGaLaw{alpha + 0.5 * stats.n,
                beta + 0.5 * stats.n * stats.mean_sq_dev};
}

ScaledInvChi2Law conjugate_posterior_sichi2(double nu0, double sigma0_sq,
                                            const SufficientStats& stats) {
  require_positive(nu0, "ScaledInvChi2 nu0");
  require_positive(sigma0_sq, "ScaledInvChi2 sigma0_sq");
  if (!(stats.n >= 1.0)) throw domain_error("conjugate update requires n >= 1");
  const double nu_post = nu0 + stats.n;
  const double sigma_post =
      (nu0 * sigma0_sq + stats.n * stats.mean_sq_dev) / nu_post;
  return ScaledInvChi2Law{nu_post, sigma_post};
}

std::string model_label(const ModelSpec& m) {
  std::string s = std::visit(
      [](const auto& law) -> std::string {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, IGaLaw>)
          return "iga(alpha=" + fmt(law.alpha) + ",beta=" + fmt(law.beta);
        else if constexpr (std::is_same_v<T, LogNLaw>)
          return "logn(s=" + fmt(law.s);
        else
          return "sichi2(nu0=" + fmt(law.nu0) +
                 ",sigma0_sq=" + fmt(law.sigma0_sq);
      },
      m.law);
  return s + ",mu=" + fmt(m.mu) + ")";
}

std::uint64_t model_digest(const ModelSpec& m) {
  return fnv1a64(model_label(m));
}

}  // namespace ssv
