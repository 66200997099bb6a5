#include "commands.hpp"

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssv/common.hpp"
#include "ssv/densities.hpp"
#include "ssv/diagnostics.hpp"
#include "ssv/market_data.hpp"
#include "ssv/mcmc.hpp"
#include "ssv/model_select.hpp"
#include "ssv/predictive.hpp"
#include "ssv/simd/kernels.hpp"
#include "ssv/synthetic.hpp"
#include "ssv/timeutil.hpp"
#include "support.hpp"

namespace ssv::cli {

namespace {

using nlohmann::json;

/// Manifest comment line plus a serializer's CSV body.
template <class Fn>
std::string render_csv(const RunManifest& man, Fn serialize) {
  std::ostringstream out;
  out << man.comment_line() << '\n';
  serialize(out);
  return out.str();
}

struct LoadedReturns {
  ReturnSeries series;
  std::string digest;
};

LoadedReturns load_returns(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  LoadedReturns r;
  r.series = parse_returns(in);
  r.digest = digest_string(text);
  return r;
}

/// Optional numeric flag: command line wins, then config, else absent.
bool resolve_optional(const json& sec, const std::string& key,
                      std::size_t flag_count, double flag_value,
                      double& out) {
  if (flag_count > 0) {
    out = flag_value;
    return true;
  }
  if (sec.contains(key)) {
    out = sec.at(key).get<double>();
    return true;
  }
  return false;
}

void note(const std::string& path) {
  std::printf("wrote %s\n", path.c_str());
}

// ---- ingest -----------------------------------------------------------------

struct IngestParams {
  std::string input;
  std::string timescale = "all";
};

void run_ingest(const GlobalOptions& g, const CLI::App* sub, IngestParams& p) {
  const json sec = config_section(g.config, "ingest");
  merge_option(sec, "timescale", sub->count("--timescale"), p.timescale);

  const std::string text = read_file(p.input);
  std::istringstream in(text);
  const PriceSeries prices = parse_prices(in);

  const json cmd_cfg{{"input", p.input}, {"timescale", p.timescale}};
  const RunManifest man =
      make_manifest(g, "ingest", cmd_cfg, digest_string(text));
  write_resolved_config(g, "ingest", cmd_cfg);

  std::vector<Timescale> targets;
  if (p.timescale == "all") {
    targets = {Timescale::Minute, Timescale::Hour, Timescale::FourHour,
               Timescale::Day};
  } else {
    targets = {parse_timescale(p.timescale)};
  }

  for (const Timescale t : targets) {
    const PriceSeries res = resample(prices, t);
    const ReturnSeries sig = log_returns(res);
    const ReturnSeries abs = abs_returns(sig);
    const std::string name = timescale_name(t);
    write_output(g.out_dir, "returns_" + name + "_signed.csv",
                 render_csv(man, [&](std::ostream& o) {
                   serialize_returns(sig, o);
                 }));
    write_output(g.out_dir, "returns_" + name + "_abs.csv",
                 render_csv(man, [&](std::ostream& o) {
                   serialize_returns(abs, o);
                 }));
    std::printf("%s: %zu returns\n", name.c_str(), sig.size());
  }
}

// ---- diagnose ---------------------------------------------------------------

struct DiagnoseParams {
  std::string input;
  std::size_t max_lag = 50;
  std::size_t bins = 50;
  int adf_max_lags = -1;
};

void run_diagnose(const GlobalOptions& g, const CLI::App* sub,
                  DiagnoseParams& p) {
  const json sec = config_section(g.config, "diagnose");
  merge_option(sec, "max-lag", sub->count("--max-lag"), p.max_lag);
  merge_option(sec, "bins", sub->count("--bins"), p.bins);
  merge_option(sec, "adf-max-lags", sub->count("--adf-max-lags"),
               p.adf_max_lags);

  const LoadedReturns loaded = load_returns(p.input);
  const ReturnSeries& r = loaded.series;

  const json cmd_cfg{{"input", p.input},
                     {"max-lag", p.max_lag},
                     {"bins", p.bins},
                     {"adf-max-lags", p.adf_max_lags}};
  const RunManifest man = make_manifest(g, "diagnose", cmd_cfg, loaded.digest);
  write_resolved_config(g, "diagnose", cmd_cfg);

  const AcfResult ac = acf(r.values, p.max_lag);
  const Periodogram pg = periodogram(r.values);
  const AdfResult adf = adf_test(r.values, p.adf_max_lags);
  const Histogram hist = histogram(r.values, p.bins);

  write_output(g.out_dir, "acf.csv", render_csv(man, [&](std::ostream& o) {
                 serialize_acf(ac, o);
               }));
  write_output(g.out_dir, "periodogram.csv",
               render_csv(man, [&](std::ostream& o) {
                 serialize_periodogram(pg, o);
               }));
  write_output(g.out_dir, "histogram.csv",
               render_csv(man, [&](std::ostream& o) {
                 serialize_histogram(hist, o);
               }));

  const json adf_json{{"statistic", adf.statistic},
                      {"lags_used", adf.lags_used},
                      {"reject_1", adf.reject_1},
                      {"reject_5", adf.reject_5},
                      {"reject_10", adf.reject_10}};
  json adf_file = adf_json;
  adf_file["manifest"] = man.to_json();
  write_output(g.out_dir, "adf.json", dump_json(adf_file));

  const double n = static_cast<double>(r.size());
  const double mean = simd::sum(r.values) / n;
  const double variance = simd::sum_sq_dev(r.values, mean) / n;
  std::size_t outside = 0;
  for (std::size_t k = 1; k < ac.values.size(); ++k) {
    if (ac.values[k] < ac.ci_lo || ac.values[k] > ac.ci_hi) ++outside;
  }

  json summary{{"n", r.size()},
               {"kind", r.kind == ReturnKind::Absolute ? "abs" : "signed"},
               {"timescale", timescale_name(r.timescale)},
               {"mean", mean},
               {"variance", variance},
               {"acf", json{{"max_lag", p.max_lag},
                            {"lags_outside_band", outside}}},
               {"adf", adf_json},
               {"histogram", json{{"bins", hist.counts.size()}}},
               {"periodogram",
                json{{"frequencies", pg.frequency.size()}}},
               {"manifest", man.to_json()}};
  const std::string path =
      write_output(g.out_dir, "summary.json", dump_json(summary));
  note(path);
  std::printf("adf statistic %.6f (lags %d), reject at 10%%: %s\n",
              adf.statistic, adf.lags_used, adf.reject_10 ? "yes" : "no");
}

// ---- fit ---------------------------------------------------------------------

struct FitParams {
  std::string input;
  std::string model;
  double alpha = 1.0;
  double beta = 1.0;
  double s = 1.0;
  double mu = 0.0;
  std::size_t iterations = 1000;
  std::size_t burn_in = 0;
  std::string mode = "standard";
  double momentum = 0.9;
  double theta_init = 0.0;
  double step = 0.0;
  double lr = 0.0;
};

void run_fit(const GlobalOptions& g, const CLI::App* sub, FitParams& p) {
  const json sec = config_section(g.config, "fit");
  merge_option(sec, "model", sub->count("--model"), p.model);
  merge_option(sec, "alpha", sub->count("--alpha"), p.alpha);
  merge_option(sec, "beta", sub->count("--beta"), p.beta);
  merge_option(sec, "s", sub->count("--s"), p.s);
  merge_option(sec, "mu", sub->count("--mu"), p.mu);
  merge_option(sec, "iterations", sub->count("--iterations"), p.iterations);
  merge_option(sec, "burn-in", sub->count("--burn-in"), p.burn_in);
  merge_option(sec, "mode", sub->count("--mode"), p.mode);
  merge_option(sec, "momentum", sub->count("--momentum"), p.momentum);

  if (p.mode != "standard" && p.mode != "greedy") {
    throw domain_error("--mode must be 'standard' or 'greedy'");
  }
  const ModelSpec model = make_model(p.model, p.alpha, p.beta, p.s, p.mu);

  const LoadedReturns loaded = load_returns(p.input);

  McmcConfig cfg;
  cfg.iterations = p.iterations;
  cfg.burn_in = p.burn_in;
  cfg.acceptance_mode = p.mode == "greedy" ? AcceptanceMode::Greedy
                                           : AcceptanceMode::Standard;
  cfg.seed = g.seed;
  cfg.momentum = p.momentum;
  double v = 0.0;
  if (resolve_optional(sec, "theta-init", sub->count("--theta-init"),
                       p.theta_init, v)) {
    cfg.theta_init = v;
  }
  if (resolve_optional(sec, "step", sub->count("--step"), p.step, v)) {
    cfg.proposal_step = v;
  }
  if (resolve_optional(sec, "learning-rate", sub->count("--learning-rate"),
                       p.lr, v)) {
    cfg.learning_rate = v;
  }

  json cmd_cfg{{"input", p.input},      {"model", p.model},
               {"mu", p.mu},            {"iterations", p.iterations},
               {"burn-in", p.burn_in},  {"mode", p.mode},
               {"momentum", p.momentum}};
  if (p.model == "iga") {
    cmd_cfg["alpha"] = p.alpha;
    cmd_cfg["beta"] = p.beta;
  } else {
    cmd_cfg["s"] = p.s;
  }
  if (cfg.theta_init) cmd_cfg["theta-init"] = *cfg.theta_init;
  if (cfg.proposal_step) cmd_cfg["step"] = *cfg.proposal_step;
  if (cfg.learning_rate) cmd_cfg["learning-rate"] = *cfg.learning_rate;

  const RunManifest man = make_manifest(g, "fit", cmd_cfg, loaded.digest);
  write_resolved_config(g, "fit", cmd_cfg);

  const McmcTrace trace = run_chain(loaded.series, model, cfg);
  const ThetaEstimate est = estimate_theta(trace);

  write_output(g.out_dir, "trace.csv", render_csv(man, [&](std::ostream& o) {
                 serialize_trace(trace, o);
               }));

  json hyper{{"mu", p.mu}};
  if (p.model == "iga") {
    hyper["alpha"] = p.alpha;
    hyper["beta"] = p.beta;
  } else {
    hyper["s"] = p.s;
  }
  const json fit_json{{"theta_hat", est.point},
                      {"stderr", est.std_error},
                      {"mode", p.mode},
                      {"model", p.model},
                      {"hyperparams", hyper},
                      {"manifest", man.to_json()}};
  const std::string path =
      write_output(g.out_dir, "fit.json", dump_json(fit_json));
  note(path);
  std::printf("theta_hat %.8g stderr %.4g\n", est.point, est.std_error);
}

// ---- compare -----------------------------------------------------------------

struct CompareParams {
  std::string input;
  std::string m1 = "iga";
  std::string m2 = "logn";
  double alpha = 3.0;
  double beta = 2.0;
  double s = 1.0;
  double mu = 0.0;
  std::size_t n_series = 1000;
  std::size_t n_draws = 10000;
};

void run_compare(const GlobalOptions& g, const CLI::App* sub,
                 CompareParams& p) {
  const json sec = config_section(g.config, "compare");
  merge_option(sec, "m1", sub->count("--m1"), p.m1);
  merge_option(sec, "m2", sub->count("--m2"), p.m2);
  merge_option(sec, "mu", sub->count("--mu"), p.mu);
  merge_option(sec, "n-series", sub->count("--n-series"), p.n_series);
  merge_option(sec, "n-draws", sub->count("--n-draws"), p.n_draws);

  const bool have_alpha = sub->count("--alpha") > 0 || sec.contains("alpha");
  const bool have_beta = sub->count("--beta") > 0 || sec.contains("beta");
  const bool have_s = sub->count("--s") > 0 || sec.contains("s");
  merge_option(sec, "alpha", sub->count("--alpha"), p.alpha);
  merge_option(sec, "beta", sub->count("--beta"), p.beta);
  merge_option(sec, "s", sub->count("--s"), p.s);

  const LoadedReturns loaded = load_returns(p.input);
  const ReturnSeries& data = loaded.series;

  // Hyperparameters: explicit flags when given, otherwise an empirical-Bayes
  // grid fit maximizing the MC evidence on this data.
  auto resolve_side = [&](const std::string& family,
                          std::string& source) -> ModelSpec {
    if (family == "iga") {
      if (have_alpha && have_beta) {
        source = "flags";
        return make_model("iga", p.alpha, p.beta, p.s, p.mu);
      }
      source = "grid";
      return fit_iga_grid(data, p.n_draws, g.seed, p.mu).model;
    }
    if (family == "logn") {
      if (have_s) {
        source = "flags";
        return make_model("logn", p.alpha, p.beta, p.s, p.mu);
      }
      source = "grid";
      return fit_logn_grid(data, p.n_draws, g.seed, p.mu).model;
    }
    throw domain_error("unknown model family '" + family + "'");
  };

  std::string src1, src2;
  const ModelSpec m1 = resolve_side(p.m1, src1);
  const ModelSpec m2 = resolve_side(p.m2, src2);

  json cmd_cfg{{"input", p.input},     {"m1", p.m1},
               {"m2", p.m2},           {"mu", p.mu},
               {"n-series", p.n_series}, {"n-draws", p.n_draws},
               {"m1_resolved", model_label(m1)},
               {"m2_resolved", model_label(m2)}};
  const RunManifest man = make_manifest(g, "compare", cmd_cfg, loaded.digest);
  write_resolved_config(g, "compare", cmd_cfg);

  const BayesFactorSeries series =
      bf_series(data, m1, m2, p.n_series, p.n_draws, g.seed, g.threads);
  const PreferenceSummary ps = preference_summary(series);

  write_output(g.out_dir, "bf_series.csv",
               render_csv(man, [&](std::ostream& o) {
                 serialize_bf_series(series, o);
               }));

  const double prob = ps.mean_bf > 1.0 ? 1.0 / (1.0 + 1.0 / ps.mean_bf)
                                       : ps.mean_bf / (1.0 + ps.mean_bf);
  const json summary{{"fraction_m1", ps.fraction_m1},
                     {"mean_bf", ps.mean_bf},
                     {"posterior_prob_m1", prob},
                     {"n_series", p.n_series},
                     {"n_draws", p.n_draws},
                     {"seed", g.seed},
                     {"m1", model_label(m1)},
                     {"m2", model_label(m2)},
                     {"m1_source", src1},
                     {"m2_source", src2},
                     {"manifest", man.to_json()}};
  const std::string path =
      write_output(g.out_dir, "compare.json", dump_json(summary));
  note(path);
  std::printf("fraction_m1 %.4f mean_bf %.6g\n", ps.fraction_m1, ps.mean_bf);
}

// ---- simulate ----------------------------------------------------------------

struct SimulateParams {
  std::string model;
  double alpha = 3.0;
  double beta = 2.0;
  double s = 1.0;
  double mu = 0.0;
  std::size_t n = 0;
  std::size_t block = 1;
  double p0 = 100.0;
  std::string start = "2020-01-01T00:00:00Z";
  std::int64_t step = 60;
};

void run_simulate(const GlobalOptions& g, const CLI::App* sub,
                  SimulateParams& p) {
  const json sec = config_section(g.config, "simulate");
  merge_option(sec, "model", sub->count("--model"), p.model);
  merge_option(sec, "alpha", sub->count("--alpha"), p.alpha);
  merge_option(sec, "beta", sub->count("--beta"), p.beta);
  merge_option(sec, "s", sub->count("--s"), p.s);
  merge_option(sec, "mu", sub->count("--mu"), p.mu);
  merge_option(sec, "n", sub->count("--n"), p.n);
  merge_option(sec, "block", sub->count("--block"), p.block);
  merge_option(sec, "p0", sub->count("--p0"), p.p0);
  merge_option(sec, "start", sub->count("--start"), p.start);
  merge_option(sec, "step", sub->count("--step"), p.step);

  if (!(p.p0 > 0.0)) throw domain_error("--p0 must be positive");
  if (p.step <= 0) throw domain_error("--step must be a positive number of seconds");

  const ModelSpec model = make_model(p.model, p.alpha, p.beta, p.s, p.mu);
  const std::int64_t start_epoch = timeutil::parse_iso8601_utc(p.start);
  const std::string start_iso = timeutil::format_iso8601_utc(start_epoch);

  GeneratorConfig gc;
  gc.model = model;
  gc.n_points = p.n;
  gc.block_length = p.block;
  gc.seed = g.seed;

  json cmd_cfg{{"model", p.model}, {"mu", p.mu},   {"n", p.n},
               {"block", p.block}, {"p0", p.p0},   {"start", start_iso},
               {"step", p.step}};
  if (p.model == "iga") {
    cmd_cfg["alpha"] = p.alpha;
    cmd_cfg["beta"] = p.beta;
  } else {
    cmd_cfg["s"] = p.s;
  }
  const RunManifest man =
      make_manifest(g, "simulate", cmd_cfg, digest_string(""));
  write_resolved_config(g, "simulate", cmd_cfg);

  const SuperstatDraw draw = gen_superstat(gc);
  const ReturnSeries returns =
      with_timestamps(draw.returns, start_epoch, p.step);
  const PriceSeries prices =
      gen_prices_from_returns(returns, p.p0, start_epoch, p.step);

  write_output(g.out_dir, "prices.csv", render_csv(man, [&](std::ostream& o) {
                 serialize_prices(prices, o);
               }));
  write_output(g.out_dir, "returns.csv", render_csv(man, [&](std::ostream& o) {
                 serialize_returns(returns, o);
               }));
  write_output(g.out_dir, "theta.csv", render_csv(man, [&](std::ostream& o) {
                 o << "block,theta\n";
                 char buf[64];
                 for (std::size_t b = 0; b < draw.theta_path.size(); ++b) {
                   std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", b,
                                 draw.theta_path[b]);
                   o << buf;
                 }
               }));

  const json fixture{{"model", model_label(model)},
                     {"n_points", p.n},
                     {"block_length", p.block},
                     {"seed", g.seed},
                     {"p0", p.p0},
                     {"start", start_iso},
                     {"step", p.step},
                     {"manifest", man.to_json()}};
  const std::string path =
      write_output(g.out_dir, "simulate.json", dump_json(fixture));
  note(path);
  std::printf("%zu returns, %zu prices, %zu theta blocks\n", returns.size(),
              prices.size(), draw.theta_path.size());
}

// ---- predict -----------------------------------------------------------------

struct PredictParams {
  std::string model;
  double alpha = 1.0;
  double beta = 1.0;
  double s = 1.0;
  double mu = 0.0;
  double grid_min = -5.0;
  double grid_max = 5.0;
  std::size_t grid_points = 201;
  bool abs = false;
  double tol = 1e-8;
};

void run_predict(const GlobalOptions& g, const CLI::App* sub,
                 PredictParams& p) {
  const json sec = config_section(g.config, "predict");
  merge_option(sec, "model", sub->count("--model"), p.model);
  merge_option(sec, "alpha", sub->count("--alpha"), p.alpha);
  merge_option(sec, "beta", sub->count("--beta"), p.beta);
  merge_option(sec, "s", sub->count("--s"), p.s);
  merge_option(sec, "mu", sub->count("--mu"), p.mu);
  merge_option(sec, "grid-max", sub->count("--grid-max"), p.grid_max);
  merge_option(sec, "grid-points", sub->count("--grid-points"),
               p.grid_points);
  merge_option(sec, "abs", sub->count("--abs"), p.abs);
  merge_option(sec, "tol", sub->count("--tol"), p.tol);

  const bool have_grid_min =
      sub->count("--grid-min") > 0 || sec.contains("grid-min");
  merge_option(sec, "grid-min", sub->count("--grid-min"), p.grid_min);
  if (p.abs && !have_grid_min) p.grid_min = 0.0;  // folded curves live on x >= 0

  if (p.grid_points < 2) {
    throw domain_error("--grid-points must be at least 2");
  }
  if (!(p.grid_max > p.grid_min)) {
    throw domain_error("--grid-max must exceed --grid-min");
  }

  const ModelSpec model = make_model(p.model, p.alpha, p.beta, p.s, p.mu);

  json cmd_cfg{{"model", p.model},
               {"mu", p.mu},
               {"grid-min", p.grid_min},
               {"grid-max", p.grid_max},
               {"grid-points", p.grid_points},
               {"abs", p.abs},
               {"tol", p.tol}};
  if (p.model == "iga") {
    cmd_cfg["alpha"] = p.alpha;
    cmd_cfg["beta"] = p.beta;
  } else {
    cmd_cfg["s"] = p.s;
  }
  const RunManifest man =
      make_manifest(g, "predict", cmd_cfg, digest_string(""));
  write_resolved_config(g, "predict", cmd_cfg);

  std::vector<double> grid(p.grid_points);
  const double span = p.grid_max - p.grid_min;
  const double denom = static_cast<double>(p.grid_points - 1);
  for (std::size_t i = 0; i < p.grid_points; ++i) {
    grid[i] = p.grid_min + span * (static_cast<double>(i) / denom);
  }
  grid.back() = p.grid_max;

  const PredictiveCurve curve = p.abs
                                    ? predictive_abs_curve(model, grid, p.tol)
                                    : predictive_curve(model, grid, p.tol);

  const std::string label = model_label(curve.model);
  const std::string path = write_output(
      g.out_dir, "curve.csv", render_csv(man, [&](std::ostream& o) {
        o << "x,density,model\n";
        char buf[96];
        for (std::size_t i = 0; i < curve.grid.size(); ++i) {
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,", curve.grid[i],
                        curve.density[i]);
          o << buf << label << '\n';
        }
      }));
  note(path);
}

}  // namespace

CommandRegistry register_commands(CLI::App& app, GlobalOptions& g) {
  CommandRegistry reg;

  {
    auto p = std::make_shared<IngestParams>();
    CLI::App* sub = app.add_subcommand(
        "ingest", "Resample a price series and emit log-return files");
    sub->fallthrough();
    sub->add_option("--input", p->input, "Price CSV (timestamp,price)")
        ->required();
    sub->add_option("--timescale", p->timescale,
                    "minute|hour|4hour|day|all (default all)")
        ->check(CLI::IsMember({"minute", "hour", "4hour", "day", "all"}));
    reg.entries.emplace_back(sub, [&g, p, sub] { run_ingest(g, sub, *p); });
  }

  {
    auto p = std::make_shared<DiagnoseParams>();
    CLI::App* sub = app.add_subcommand(
        "diagnose", "Time-series diagnostics for a return series");
    sub->fallthrough();
    sub->add_option("--input", p->input, "Return CSV (timestamp,value)")
        ->required();
    sub->add_option("--max-lag", p->max_lag, "ACF lags (default 50)");
    sub->add_option("--bins", p->bins, "Histogram bins (default 50)");
    sub->add_option("--adf-max-lags", p->adf_max_lags,
                    "ADF lag-order cap; -1 selects automatically");
    reg.entries.emplace_back(sub, [&g, p, sub] { run_diagnose(g, sub, *p); });
  }

  {
    auto p = std::make_shared<FitParams>();
    CLI::App* sub = app.add_subcommand(
        "fit", "MCMC estimation of the volatility parameter");
    sub->fallthrough();
    sub->add_option("--input", p->input, "Return CSV (timestamp,value)")
        ->required();
    sub->add_option("--model", p->model, "Mixing law: iga|logn")
        ->required()
        ->check(CLI::IsMember({"iga", "logn"}));
    sub->add_option("--alpha", p->alpha, "IGa shape (default 1)");
    sub->add_option("--beta", p->beta, "IGa scale (default 1)");
    sub->add_option("--s", p->s, "LogN log-scale (default 1)");
    sub->add_option("--mu", p->mu, "Known return mean (default 0)");
    sub->add_option("--iterations", p->iterations,
                    "Chain length (default 1000)");
    sub->add_option("--burn-in", p->burn_in, "Discarded prefix (default 0)");
    sub->add_option("--mode", p->mode, "standard|greedy (default standard)")
        ->check(CLI::IsMember({"standard", "greedy"}));
    sub->add_option("--momentum", p->momentum,
                    "Gradient-nudge momentum (default 0.9)");
    sub->add_option("--theta-init", p->theta_init,
                    "Initial theta (default: mean squared deviation)");
    sub->add_option("--step", p->step,
                    "Proposal step (default 0.1 * theta-init)");
    sub->add_option("--learning-rate,--lr", p->lr,
                    "Nudge learning rate (default 1e-3 greedy, 0 standard)");
    reg.entries.emplace_back(sub, [&g, p, sub] { run_fit(g, sub, *p); });
  }

  {
    auto p = std::make_shared<CompareParams>();
    CLI::App* sub = app.add_subcommand(
        "compare", "Monte-Carlo Bayes-factor model comparison");
    sub->fallthrough();
    sub->add_option("--input", p->input, "Return CSV (timestamp,value)")
        ->required();
    sub->add_option("--m1", p->m1, "First model family (default iga)")
        ->check(CLI::IsMember({"iga", "logn"}));
    sub->add_option("--m2", p->m2, "Second model family (default logn)")
        ->check(CLI::IsMember({"iga", "logn"}));
    sub->add_option("--alpha", p->alpha, "IGa shape (else grid-fitted)");
    sub->add_option("--beta", p->beta, "IGa scale (else grid-fitted)");
    sub->add_option("--s", p->s, "LogN log-scale (else grid-fitted)");
    sub->add_option("--mu", p->mu, "Known return mean (default 0)");
    sub->add_option("--n-series", p->n_series,
                    "Bayes-factor repetitions (default 1000)");
    sub->add_option("--n-draws", p->n_draws,
                    "Prior draws per evidence estimate (default 10000)");
    reg.entries.emplace_back(sub, [&g, p, sub] { run_compare(g, sub, *p); });
  }

  {
    auto p = std::make_shared<SimulateParams>();
    CLI::App* sub = app.add_subcommand(
        "simulate", "Generate a superstatistical price/return fixture");
    sub->fallthrough();
    sub->add_option("--model", p->model, "Mixing law: iga|logn")
        ->required()
        ->check(CLI::IsMember({"iga", "logn"}));
    sub->add_option("--alpha", p->alpha, "IGa shape (default 3)");
    sub->add_option("--beta", p->beta, "IGa scale (default 2)");
    sub->add_option("--s", p->s, "LogN log-scale (default 1)");
    sub->add_option("--mu", p->mu, "Return mean (default 0)");
    sub->add_option("--n", p->n, "Number of returns")->required();
    sub->add_option("--block", p->block,
                    "Samples per theta block (default 1)");
    sub->add_option("--p0", p->p0, "Initial price (default 100)");
    sub->add_option("--start", p->start,
                    "First bar start, ISO-8601 UTC (default 2020-01-01)");
    sub->add_option("--step", p->step, "Bar width in seconds (default 60)");
    reg.entries.emplace_back(sub, [&g, p, sub] { run_simulate(g, sub, *p); });
  }

  {
    auto p = std::make_shared<PredictParams>();
    CLI::App* sub = app.add_subcommand(
        "predict", "Posterior-predictive density curve");
    sub->fallthrough();
    sub->add_option("--model", p->model, "Mixing law: iga|logn")
        ->required()
        ->check(CLI::IsMember({"iga", "logn"}));
    sub->add_option("--alpha", p->alpha, "IGa shape (default 1)");
    sub->add_option("--beta", p->beta, "IGa scale (default 1)");
    sub->add_option("--s", p->s, "LogN log-scale (default 1)");
    sub->add_option("--mu", p->mu, "Return mean (default 0)");
    sub->add_option("--grid-min", p->grid_min,
                    "Grid start (default -5; 0 with --abs)");
    sub->add_option("--grid-max", p->grid_max, "Grid end (default 5)");
    sub->add_option("--grid-points", p->grid_points,
                    "Grid size (default 201)");
    sub->add_flag("--abs", p->abs, "Density of |X| instead of X");
    sub->add_option("--tol", p->tol,
                    "Quadrature tolerance for logn (default 1e-8)");
    reg.entries.emplace_back(sub, [&g, p, sub] { run_predict(g, sub, *p); });
  }

  return reg;
}

void CommandRegistry::run_selected() const {
  for (const auto& [sub, fn] : entries) {
    if (sub->parsed()) {
      fn();
      return;
    }
  }
}

}  // namespace ssv::cli
