#include "ssv/market_data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "ssv/common.hpp"
#include "ssv/simd/kernels.hpp"
#include "ssv/timeutil.hpp"

namespace ssv {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& field, std::size_t line,
                          const char* what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw parse_error("malformed " + std::string(what) + " at line " +
                      std::to_string(line) + ": '" + field + "'");
  return v;
}

// Yields (line_number, line) for non-comment lines, handling \r\n.
template <typename F>
void for_each_csv_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    f(line_no, line);
  }
}

void split_two(const std::string& line, std::size_t line_no, std::string& a,
               std::string& b) {
  const auto pos = line.find(',');
  if (pos == std::string::npos || line.find(',', pos + 1) != std::string::npos)
    throw parse_error("malformed row at line " + std::to_string(line_no) +
                      ": expected exactly two comma-separated fields");
  a = line.substr(0, pos);
  b = line.substr(pos + 1);
}

struct TwoColumn {
  std::vector<std::int64_t> timestamps;
  std::vector<double> values;
};

TwoColumn parse_two_column(std::istream& in, const char* header,
                           const char* value_name) {
  TwoColumn out;
  bool seen_header = false;
  for_each_csv_line(in, [&](std::size_t line_no, const std::string& line) {
    if (!seen_header) {
      if (line != header)
        throw parse_error("expected header '" + std::string(header) +
                          "' at line " + std::to_string(line_no) + ", got '" +
                          line + "'");
      seen_header = true;
      return;
    }
    std::string ts_field, val_field;
    split_two(line, line_no, ts_field, val_field);
    std::int64_t ts;
    try {
      ts = timeutil::parse_iso8601_utc(ts_field);
    } catch (const parse_error& e) {
      throw parse_error(std::string(e.what()) + " at line " +
                        std::to_string(line_no));
    }
    if (!out.timestamps.empty() && ts <= out.timestamps.back())
      throw parse_error("timestamps not strictly increasing at line " +
                        std::to_string(line_no));
    out.timestamps.push_back(ts);
    out.values.push_back(parse_double_field(val_field, line_no, value_name));
  });
  if (!seen_header) throw parse_error("empty input: missing header");
  if (out.values.empty()) throw parse_error("no data rows");
  return out;
}

}  // namespace

std::int64_t timescale_seconds(Timescale t) {
  switch (t) {
    case Timescale::Minute: return 60;
    case Timescale::Hour: return 3600;
    case Timescale::FourHour: return 14400;
    case Timescale::Day: return 86400;
    case Timescale::Raw: break;
  }
  throw domain_error("raw timescale has no bucket width");
}

std::string timescale_name(Timescale t) {
  switch (t) {
    case Timescale::Minute: return "minute";
    case Timescale::Hour: return "hour";
    case Timescale::FourHour: return "4hour";
    case Timescale::Day: return "day";
    case Timescale::Raw: return "raw";
  }
  throw domain_error("unknown timescale");
}

Timescale parse_timescale(const std::string& name) {
  if (name == "minute") return Timescale::Minute;
  if (name == "hour") return Timescale::Hour;
  if (name == "4hour") return Timescale::FourHour;
  if (name == "day") return Timescale::Day;
  if (name == "raw") return Timescale::Raw;
  throw parse_error("unknown timescale '" + name +
                    "' (expected minute|hour|4hour|day|raw)");
}

PriceSeries parse_prices(std::istream& in) {
  PriceSeries p;
  p.timescale = Timescale::Raw;
  std::size_t row = 0;
  bool seen_header = false;
  for_each_csv_line(in, [&](std::size_t line_no, const std::string& line) {
    if (!seen_header) {
      if (line != "timestamp,price")
        throw parse_error("expected header 'timestamp,price' at line " +
                          std::to_string(line_no) + ", got '" + line + "'");
      seen_header = true;
      return;
    }
    ++row;
    std::string ts_field, price_field;
    split_two(line, line_no, ts_field, price_field);
    std::int64_t ts;
    try {
      ts = timeutil::parse_iso8601_utc(ts_field);
    } catch (const parse_error& e) {
      throw parse_error(std::string(e.what()) + " at line " +
                        std::to_string(line_no));
    }
    if (!p.timestamps.empty() && ts <= p.timestamps.back())
      throw parse_error("timestamps not strictly increasing at line " +
                        std::to_string(line_no));
    const double price = parse_double_field(price_field, line_no, "price");
    if (!(price > 0.0) || !std::isfinite(price))
      throw parse_error("non-positive price at line " +
                        std::to_string(line_no));
    p.timestamps.push_back(ts);
    p.prices.push_back(price);
  });
  if (!seen_header) throw parse_error("empty input: missing header");
  if (p.prices.empty()) throw parse_error("no data rows");
  return p;
}

void serialize_prices(const PriceSeries& p, std::ostream& out) {
  out << "timestamp,price\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << timeutil::format_iso8601_utc(p.timestamps[i]) << ','
        << fmt_double(p.prices[i]) << '\n';
}

ReturnSeries parse_returns(std::istream& in) {
  const TwoColumn cols = parse_two_column(in, "timestamp,value", "value");
  ReturnSeries r;
  r.timestamps = std::move(cols.timestamps);
  r.values = std::move(cols.values);
  r.timescale = Timescale::Raw;
  bool all_nonneg = true;
  for (double v : r.values)
    if (v < 0.0) {
      all_nonneg = false;
      break;
    }
  r.kind = all_nonneg ? ReturnKind::Absolute : ReturnKind::Signed;
  return r;
}

void serialize_returns(const ReturnSeries& r, std::ostream& out) {
  out << "timestamp,value\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out << timeutil::format_iso8601_utc(r.timestamps[i]) << ','
        << fmt_double(r.values[i]) << '\n';
}

PriceSeries resample(const PriceSeries& p, Timescale target) {
  if (target == Timescale::Raw)
    throw domain_error("cannot resample to the raw timescale");
  if (p.timescale == target) return p;
  if (p.timescale != Timescale::Raw &&
      timescale_seconds(p.timescale) > timescale_seconds(target))
    throw domain_error("cannot resample " + timescale_name(p.timescale) +
                       " data to the finer " + timescale_name(target) +
                       " timescale");

  const std::int64_t width = timescale_seconds(target);
  PriceSeries out;
  out.timescale = target;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::int64_t bucket = timeutil::floor_div(p.timestamps[i], width);
    const std::int64_t start = bucket * width;
    if (!out.timestamps.empty() && out.timestamps.back() == start) {
      out.prices.back() = p.prices[i];  // later observation wins
    } else {
      out.timestamps.push_back(start);
      out.prices.push_back(p.prices[i]);
    }
  }
  if (out.size() < 2)
    throw domain_error("resample to " + timescale_name(target) +
                       " yields fewer than 2 buckets");
  return out;
}

ReturnSeries log_returns(const PriceSeries& p) {
  if (p.size() < 2)
    throw domain_error("log returns require at least 2 prices");
  std::vector<double> logs(p.size());
  simd::log(p.prices, logs);
  ReturnSeries r;
  r.timescale = p.timescale;
  r.kind = ReturnKind::Signed;
  r.values.resize(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    r.values[i] = logs[i + 1] - logs[i];
  r.timestamps.assign(p.timestamps.begin(), p.timestamps.end() - 1);
  return r;
}

ReturnSeries abs_returns(const ReturnSeries& r) {
  if (r.kind == ReturnKind::Absolute) return r;
  ReturnSeries out = r;
  simd::abs(r.values, out.values);
  out.kind = ReturnKind::Absolute;
  return out;
}

}  // namespace ssv
