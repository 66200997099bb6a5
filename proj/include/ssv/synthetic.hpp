#pragma once

#include <cstdint>
#include <vector>

#include "ssv/densities.hpp"
#include "ssv/market_data.hpp"

namespace ssv {

/// Superstatistical generator: theta is redrawn from the model's mixing law
/// every `block_length` samples (piecewise-constant slow dynamics), and
/// returns within a block are N(mu, theta).
struct GeneratorConfig {
  ModelSpec model;
  std::size_t n_points = 0;
  std::size_t block_length = 1;
  std::uint64_t seed = 0;
};

struct SuperstatDraw {
  ReturnSeries returns;            // kind Signed; timestamps 0,60,120,... s
  std::vector<double> theta_path;  // one value per block, in block order
};

/// Deterministic per seed. Block j covers indices [j*L, min((j+1)*L, n)).
SuperstatDraw gen_superstat(const GeneratorConfig& config);

/// Rebase a return series onto timestamps start + i*step (bar-start times).
ReturnSeries with_timestamps(const ReturnSeries& r, std::int64_t start,
                             std::int64_t step_seconds);

/// Inverse of log_returns: P_{i+1} = P_i * exp(r_i), timestamps arithmetic
/// from `start`. The timescale is inferred from `step_seconds` when it
/// matches a named bucket width, else Raw. Throws if any price overflows.
PriceSeries gen_prices_from_returns(const ReturnSeries& returns, double p0,
                                    std::int64_t start,
                                    std::int64_t step_seconds);

}  // namespace ssv
