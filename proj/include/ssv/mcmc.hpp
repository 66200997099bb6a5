#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ssv/densities.hpp"
#include "ssv/market_data.hpp"
#include "ssv/rng.hpp"

namespace ssv {

/// Greedy accepts a proposal iff the posterior ratio exceeds 1 — a
/// hill-climbing rule that makes the chain an optimizer. Standard is the
/// usual Metropolis accept-with-probability-min(1, ratio) rule and is the
/// default.
enum class AcceptanceMode { Greedy, Standard };

struct McmcConfig {
  std::size_t iterations = 1000;
  std::size_t burn_in = 0;
  AcceptanceMode acceptance_mode = AcceptanceMode::Standard;
  std::uint64_t seed = 0;
  double momentum = 0.9;
  /// Unset fields resolve at run time: theta_init = S (the mean squared
  /// deviation of the data), proposal_step = 0.1 * theta_init,
  /// learning_rate = 1e-3 in Greedy mode and 0 in Standard mode.
  std::optional<double> theta_init;
  std::optional<double> proposal_step;
  std::optional<double> learning_rate;
};

struct McmcRecord {
  std::size_t iteration;    // 1-based
  double theta_proposed;
  double theta_current;     // retained state after the move + gradient nudge
  double log_posterior;     // at theta_current
  bool accepted;
};

struct McmcTrace {
  std::vector<McmcRecord> records;
  McmcConfig config;
  ModelSpec model;
};

struct ThetaEstimate {
  double point;
  double std_error;
};

/// Fully resolved per-step parameters (all defaults applied).
struct McmcStepParams {
  double proposal_step;
  double learning_rate;
  double momentum;
  AcceptanceMode mode;
};

/// Mutable chain state threaded through mh_step.
struct McmcState {
  double theta;
  double velocity;  // exponential moving average of the posterior gradient
  double log_post;
};

/// Smallest admissible theta; proposals and nudged states are clamped here.
inline constexpr double kThetaFloor = 1e-12;

/// One random-walk step: propose theta + step*z reflected into the support,
/// accept per mode, then nudge the retained value along the posterior
/// gradient (scaled by learning_rate, with momentum as the EMA decay of the
/// gradient). The record's iteration field is left 0 for the caller.
McmcRecord mh_step(McmcState& state, const SufficientStats& stats,
                   const ModelSpec& model, const McmcStepParams& params,
                   Rng& rng);

/// Deterministic full chain for a fixed config/seed; records every
/// iteration, including rejections.
McmcTrace run_chain(const ReturnSeries& data, const ModelSpec& model,
                    const McmcConfig& config);

/// k independent chains with seeds config.seed + chain index, executed on up
/// to n_threads workers; results are ordered by chain index and identical to
/// sequential execution.
std::vector<McmcTrace> run_chains(const ReturnSeries& data,
                                  const ModelSpec& model,
                                  const McmcConfig& config,
                                  std::size_t n_chains, unsigned n_threads);

/// Standard mode: mean and standard error of post-burn-in retained states;
/// throws if no post-burn-in step was accepted. Greedy mode: final
/// retained theta with standard error 0 (greedy chains optimize; they do
/// not sample), regardless of how many proposals were accepted.
ThetaEstimate estimate_theta(const McmcTrace& trace);

/// CSV with header `iter,theta_proposed,theta_current,log_posterior,accepted`.
void serialize_trace(const McmcTrace& trace, std::ostream& out);

}  // namespace ssv
