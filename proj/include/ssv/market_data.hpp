#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssv {

enum class Timescale { Minute, Hour, FourHour, Day, Raw };
enum class ReturnKind { Signed, Absolute };

/// Bucket width in seconds; throws for Raw (no fixed width).
std::int64_t timescale_seconds(Timescale t);
std::string timescale_name(Timescale t);
Timescale parse_timescale(const std::string& name);

/// Timestamped positive prices, strictly increasing in time.
struct PriceSeries {
  std::vector<std::int64_t> timestamps;  // epoch seconds, UTC
  std::vector<double> prices;
  Timescale timescale = Timescale::Raw;

  std::size_t size() const { return prices.size(); }
};

/// Log returns; timestamps are bar-start instants (one per return).
struct ReturnSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> values;
  Timescale timescale = Timescale::Raw;
  ReturnKind kind = ReturnKind::Signed;

  std::size_t size() const { return values.size(); }
};

/// Parse `timestamp,price` CSV. Lines starting with '#' are skipped
/// (provenance comments); the first remaining line must be the header.
/// Errors report 1-based physical line numbers. Rows must be strictly
/// increasing in time with positive prices; the file must contain at least
/// one data row.
PriceSeries parse_prices(std::istream& in);
void serialize_prices(const PriceSeries& p, std::ostream& out);

/// Parse `timestamp,value` CSV (same comment/header conventions). The kind
/// is inferred: Absolute when every value is >= 0, Signed otherwise.
ReturnSeries parse_returns(std::istream& in);
void serialize_returns(const ReturnSeries& r, std::ostream& out);

/// Last-observation close per UTC-aligned bucket; empty buckets are omitted.
/// The input must be Raw or strictly finer than `target`; resampling to the
/// series' own timescale is the identity. Throws when fewer than 2 buckets
/// result.
PriceSeries resample(const PriceSeries& p, Timescale target);

/// values[i] = log(prices[i+1]) - log(prices[i]); requires length >= 2.
ReturnSeries log_returns(const PriceSeries& p);

/// Elementwise absolute value; idempotent on Absolute input.
ReturnSeries abs_returns(const ReturnSeries& r);

}  // namespace ssv
