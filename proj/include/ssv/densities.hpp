#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "ssv/rng.hpp"

namespace ssv {

// Mixing laws g(theta) for the fluctuating variance of returns. All are
// supported on theta > 0 and evaluated in log space throughout.

/// Inverse-Gamma: g(t) = beta^alpha / Gamma(alpha) * t^-(alpha+1) * exp(-beta/t).
struct IGaLaw {
  double alpha;  // shape
  double beta;   // scale
};

/// Log-Normal with log-location fixed at zero:
/// g(t) = 1/(s t sqrt(2 pi)) * exp(-log(t)^2 / (2 s^2)).
struct LogNLaw {
  double s;  // log-scale
};

/// Scaled inverse-chi^2 with nu0 degrees of freedom and scale sigma0_sq;
/// identical to IGaLaw{nu0/2, nu0*sigma0_sq/2}.
struct ScaledInvChi2Law {
  double nu0;
  double sigma0_sq;
};

using MixingLaw = std::variant<IGaLaw, LogNLaw, ScaledInvChi2Law>;

/// A volatility model: mixing law for theta plus the (known) return mean.
struct ModelSpec {
  MixingLaw law;
  double mu = 0.0;
};

/// Throws ssv::domain_error unless all law parameters are positive and
/// finite and mu is finite.
void validate_model(const ModelSpec& m);

/// Everything the Gaussian likelihood needs from a return series:
/// n and S = (1/n) * sum (x_i - mu)^2.
struct SufficientStats {
  double n = 0.0;
  double mean_sq_dev = 0.0;

  static SufficientStats from(std::span<const double> x, double mu);
};

// ---- log densities ------------------------------------------------------

/// log g1(theta; alpha, beta), inverse-Gamma. Throws on theta <= 0 or bad
/// parameters.
double igamma_log_pdf(double theta, double alpha, double beta);

/// log g2(theta; s), log-Normal with log-location 0. Throws on theta <= 0
/// or s <= 0.
double lognormal_log_pdf(double theta, double s);

/// log density of the scaled inverse-chi^2; delegates to the equivalent
/// inverse-Gamma parameterization.
double scaled_inv_chi2_log_pdf(double theta, double nu0, double sigma0_sq);

/// log g(theta) under the model's mixing law.
double prior_log_pdf(const ModelSpec& m, double theta);

/// d/dtheta of prior_log_pdf (analytic).
double prior_log_pdf_grad(const ModelSpec& m, double theta);

/// One draw of theta from the model's mixing law.
double sample_theta(const ModelSpec& m, Rng& rng);

// ---- Gaussian likelihood -------------------------------------------------

/// log N(data | mu, theta) with the full 2*pi constant:
/// -(n/2) log(2 pi theta) - n S / (2 theta). Throws on theta <= 0.
double gaussian_log_likelihood(const SufficientStats& stats, double theta);
double gaussian_log_likelihood(std::span<const double> data, double mu,
                               double theta);

/// log prior + log likelihood (the evidence constant is omitted).
double log_unnormalized_posterior(double theta, const SufficientStats& stats,
                                  const ModelSpec& m);

/// d/dtheta of log_unnormalized_posterior (analytic).
double log_unnormalized_posterior_grad(double theta,
                                       const SufficientStats& stats,
                                       const ModelSpec& m);

// ---- conjugate updates ---------------------------------------------------

/// Inverse-Gamma conjugate update: (alpha + n/2, beta + (n/2) S).
IGaLaw conjugate_posterior_iga(double alpha, double beta,
                               const SufficientStats& stats);

/// Scaled inverse-chi^2 conjugate update:
/// (nu0 + n, (nu0*sigma0_sq + n*S) / (nu0 + n)).
ScaledInvChi2Law conjugate_posterior_sichi2(double nu0, double sigma0_sq,
                                            const SufficientStats& stats);

// ---- identification ------------------------------------------------------

/// Compact deterministic label, e.g. "iga(alpha=3,beta=2,mu=0)".
std::string model_label(const ModelSpec& m);

/// FNV-1a digest of the label; used to derive independent RNG streams per
/// model, so identical models share a stream.
std::uint64_t model_digest(const ModelSpec& m);

}  // namespace ssv
