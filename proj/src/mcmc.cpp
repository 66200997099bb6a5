#include "ssv/mcmc.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "ssv/common.hpp"
#include "ssv/parallel.hpp"

namespace ssv {
namespace {

McmcStepParams resolve_params(const McmcConfig& cfg, double theta_init) {
  McmcStepParams p;
  p.mode = cfg.acceptance_mode;
  p.momentum = cfg.momentum;
  if (!(p.momentum >= 0.0) || !(p.momentum < 1.0))
    throw domain_error("momentum must lie in [0, 1)");
  p.proposal_step = cfg.proposal_step.value_or(0.1 * theta_init);
  if (!(p.proposal_step > 0.0) || !std::isfinite(p.proposal_step))
    throw domain_error("proposal_step must be positive and finite");
  const double default_lr =
      cfg.acceptance_mode == AcceptanceMode::Greedy ? 1e-3 : 0.0;
  p.learning_rate = cfg.learning_rate.value_or(default_lr);
  if (!(p.learning_rate >= 0.0) || !std::isfinite(p.learning_rate))
    throw domain_error("learning_rate must be nonnegative and finite");
  return p;
}

}  // namespace

McmcRecord mh_step(McmcState& state, const SufficientStats& stats,
                   const ModelSpec& model, const McmcStepParams& params,
                   Rng& rng) {
  // Step 4: random-walk proposal, reflected into the support.
  double proposed = state.theta + params.proposal_step * rng.normal();
  proposed = std::fabs(proposed);
  if (proposed < kThetaFloor) proposed = kThetaFloor;
  const double proposed_log_post =
      log_unnormalized_posterior(proposed, stats, model);

  // Step 5: acceptance. log rho = proposed - current log posterior.
  const double log_rho = proposed_log_post - state.log_post;
  bool accepted;
  if (params.mode == AcceptanceMode::Greedy) {
    accepted = log_rho > 0.0;
  } else {
    accepted = log_rho >= 0.0 || std::log(rng.uniform()) < log_rho;
  }

  double chosen = accepted ? proposed : state.theta;

  // Step 6: gradient nudge with momentum as the EMA decay of the gradient.
  const double grad = log_unnormalized_posterior_grad(chosen, stats, model);
  if (!std::isfinite(grad))
    throw domain_error("non-finite posterior gradient at theta=" +
                       std::to_string(chosen));
  state.velocity =
      params.momentum * state.velocity + (1.0 - params.momentum) * grad;
  double updated = chosen + params.learning_rate * state.velocity;
  if (!(updated > kThetaFloor)) updated = kThetaFloor;

  state.theta = updated;
  if (params.learning_rate == 0.0) {
    if (accepted) state.log_post = proposed_log_post;
  } else {
    state.log_post = log_unnormalized_posterior(updated, stats, model);
  }

  McmcRecord rec;
  rec.iteration = 0;
  rec.theta_proposed = proposed;
  rec.theta_current = state.theta;
  rec.log_posterior = state.log_post;
  rec.accepted = accepted;
  return rec;
}

McmcTrace run_chain(const ReturnSeries& data, const ModelSpec& model,
                    const McmcConfig& config) {
  validate_model(model);
  if (config.iterations == 0) throw domain_error("iterations must be >= 1");
  if (config.burn_in >= config.iterations)
    throw domain_error("iterations must exceed burn_in");
  if (data.values.empty()) throw domain_error("MCMC requires nonempty data");

  const SufficientStats stats =
      SufficientStats::from(data.values, model.mu);

  double theta_init = config.theta_init.value_or(stats.mean_sq_dev);
  if (!(theta_init > 0.0) || !std::isfinite(theta_init)) {
    if (config.theta_init)
      throw domain_error("theta_init must be positive and finite");
    theta_init = kThetaFloor;  // degenerate all-equal data: S = 0
  }
  const McmcStepParams params = resolve_params(config, theta_init);

  Rng rng(config.seed);
  McmcState state;
  state.theta = std::max(theta_init, kThetaFloor);
  state.velocity = 0.0;
  state.log_post = log_unnormalized_posterior(state.theta, stats, model);

  McmcTrace trace;
  trace.config = config;
  trace.model = model;
  trace.records.reserve(config.iterations);
  for (std::size_t i = 1; i <= config.iterations; ++i) {
    McmcRecord rec = mh_step(state, stats, model, params, rng);
    rec.iteration = i;
    trace.records.push_back(rec);
  }
  return trace;
}

std::vector<McmcTrace> run_chains(const ReturnSeries& data,
                                  const ModelSpec& model,
                                  const McmcConfig& config,
                                  std::size_t n_chains, unsigned n_threads) {
  if (n_chains == 0) throw domain_error("n_chains must be >= 1");
  std::vector<McmcTrace> traces(n_chains);
  parallel_for(n_chains, n_threads, [&](std::size_t i) {
    McmcConfig chain_cfg = config;
    chain_cfg.seed = config.seed + i;
    traces[i] = run_chain(data, model, chain_cfg);
  });
  return traces;
}

ThetaEstimate estimate_theta(const McmcTrace& trace) {
  const std::size_t burn = trace.config.burn_in;
  std::size_t n = 0;
  bool any_accepted = false;
  double mean = 0.0;
  for (const auto& rec : trace.records) {
    if (rec.iteration <= burn) continue;
    any_accepted = any_accepted || rec.accepted;
    ++n;
    mean += rec.theta_current;
  }
  if (n == 0) throw domain_error("no records after burn-in");

  // Greedy mode is an optimizer: the estimate is the final state, and a
  // chain that accepted nothing simply started at (or converged to) the
  // optimum already.
  if (trace.config.acceptance_mode == AcceptanceMode::Greedy)
    return ThetaEstimate{trace.records.back().theta_current, 0.0};

  if (!any_accepted)
    throw domain_error("no accepted states after burn-in");
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (const auto& rec : trace.records) {
    if (rec.iteration <= burn) continue;
    const double d = rec.theta_current - mean;
    ss += d * d;
  }
  const double std_error =
      n > 1 ? std::sqrt(ss / (static_cast<double>(n) *
                              static_cast<double>(n - 1)))
            : 0.0;
  return ThetaEstimate{mean, std_error};
}

void serialize_trace(const McmcTrace& trace, std::ostream& out) {
  out << "iter,theta_proposed,theta_current,log_posterior,accepted\n";
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%d\n", r.iteration,
                  r.theta_proposed, r.theta_current, r.log_posterior,
                  r.accepted ? 1 : 0);
    out << buf;
  }
}

}  // namespace ssv
