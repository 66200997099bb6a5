#include "ssv/synthetic.hpp"

#include <cmath>

#include "ssv/common.hpp"
#include "ssv/rng.hpp"

namespace ssv {

SuperstatDraw gen_superstat(const GeneratorConfig& config) {
  validate_model(config.model);
  if (config.n_points < 1) throw domain_error("n_points must be >= 1");
  if (config.block_length < 1) throw domain_error("block_length must be >= 1");

  const std::size_t n = config.n_points;
  const std::size_t block = config.block_length;
  const std::size_t n_blocks = (n + block - 1) / block;

  SuperstatDraw out;
  out.theta_path.reserve(n_blocks);
  out.returns.values.resize(n);
  out.returns.timestamps.resize(n);
  out.returns.timescale = Timescale::Raw;
  out.returns.kind = ReturnKind::Signed;

  Rng rng(config.seed);
  const double mu = config.model.mu;
  std::size_t i = 0;
  for (std::size_t j = 0; j < n_blocks; ++j) {
    const double theta = sample_theta(config.model, rng);
    out.theta_path.push_back(theta);
    const double sd = std::sqrt(theta);
    const std::size_t end = std::min(n, (j + 1) * block);
    for (; i < end; ++i) out.returns.values[i] = mu + sd * rng.normal();
  }
  for (std::size_t k = 0; k < n; ++k)
    out.returns.timestamps[k] = static_cast<std::int64_t>(k) * 60;
  return out;
}

ReturnSeries with_timestamps(const ReturnSeries& r, std::int64_t start,
                             std::int64_t step_seconds) {
  if (step_seconds <= 0) throw domain_error("timestamp step must be positive");
  ReturnSeries out = r;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.timestamps[i] = start + static_cast<std::int64_t>(i) * step_seconds;
  return out;
}

PriceSeries gen_prices_from_returns(const ReturnSeries& returns, double p0,
                                    std::int64_t start,
                                    std::int64_t step_seconds) {
  if (!(p0 > 0.0) || !std::isfinite(p0))
    throw domain_error("initial price must be positive and finite");
  if (step_seconds <= 0) throw domain_error("timestamp step must be positive");

  PriceSeries p;
  switch (step_seconds) {
    case 60: p.timescale = Timescale::Minute; break;
    case 3600: p.timescale = Timescale::Hour; break;
    case 14400: p.timescale = Timescale::FourHour; break;
    case 86400: p.timescale = Timescale::Day; break;
    default: p.timescale = Timescale::Raw; break;
  }
  p.timestamps.resize(returns.size() + 1);
  p.prices.resize(returns.size() + 1);
  p.prices[0] = p0;
  p.timestamps[0] = start;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    const double next = p.prices[i] * std::exp(returns.values[i]);
    if (!std::isfinite(next) || next <= 0.0)
      throw domain_error("price overflow at index " + std::to_string(i + 1));
    p.prices[i + 1] = next;
    p.timestamps[i + 1] = start + static_cast<std::int64_t>(i + 1) * step_seconds;
  }
  return p;
}

}  // namespace ssv
