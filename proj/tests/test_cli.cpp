// End-to-end tests for the ssv command-line tool: exit codes, file
// contracts, config merging, and byte-level determinism. Each case runs the
// real binary in a scratch directory.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ssv/common.hpp"

#ifndef SSV_CLI_PATH
#error "SSV_CLI_PATH must point at the ssv binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("ssv_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string sub(const std::string& name) const {
    return (dir / name).string();
  }
};

/// Run the binary with `args`, discarding stderr; returns the exit code.
int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SSV_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json slurp_json(const fs::path& path) { return json::parse(slurp(path)); }

/// Number of lines after the '#' manifest comment and the CSV header.
std::size_t data_rows(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
  std::string line;
  std::size_t rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (!line.empty()) ++rows;
  }
  return rows;
}

bool starts_with_manifest(const fs::path& path) {
  return slurp(path).rfind("# ssv=", 0) == 0;
}

/// Per-file content digests for a whole directory, keyed by filename.
std::vector<std::pair<std::string, std::uint64_t>> dir_digests(
    const fs::path& dir) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out.emplace_back(e.path().filename().string(),
                     ssv::fnv1a64(slurp(e.path())));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A small price fixture shared by the pipeline tests.
void make_fixture(const Scratch& s, const std::string& name,
                  std::uint64_t seed) {
  const int rc = run_cli("simulate --model iga --alpha 3 --beta 2 --n 2000 "
                         "--block 20 --seed " +
                         std::to_string(seed) + " --out-dir " + s.sub(name));
  REQUIRE(rc == 0);
}

}  // namespace

TEST_CASE("version flag exits cleanly") {
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("exit codes map error categories") {
  Scratch s;

  SUBCASE("missing input file is an io error") {
    CHECK(run_cli("diagnose --input " + s.sub("absent.csv") + " --out-dir " +
                  s.sub("out")) == 2);
  }
  SUBCASE("unknown flag is a usage error") {
    CHECK(run_cli("predict --model iga --bogus-flag 1") == 3);
  }
  SUBCASE("missing required option is a usage error") {
    CHECK(run_cli("fit --input whatever.csv") == 3);
  }
  SUBCASE("missing subcommand is a usage error") {
    CHECK(run_cli("") == 3);
  }
  SUBCASE("invalid enum value is a usage error") {
    CHECK(run_cli("predict --model weibull") == 3);
  }
  SUBCASE("statistical precondition failures are domain errors") {
    CHECK(run_cli("predict --model iga --grid-points 1 --out-dir " +
                  s.sub("out")) == 1);
    CHECK(run_cli("predict --model iga --alpha -1 --out-dir " + s.sub("out")) ==
          1);
    CHECK(run_cli("simulate --model iga --n 10 --p0 0 --out-dir " +
                  s.sub("out")) == 1);
  }
  SUBCASE("malformed config file is a parse error") {
    std::ofstream(s.sub("bad.json")) << "]not json[";
    CHECK(run_cli("predict --model iga --config " + s.sub("bad.json") +
                  " --out-dir " + s.sub("out")) == 2);
  }
  SUBCASE("malformed input csv is a parse error") {
    std::ofstream(s.sub("bad.csv")) << "timestamp,value\nnot-a-time,1.0\n";
    CHECK(run_cli("diagnose --input " + s.sub("bad.csv") + " --out-dir " +
                  s.sub("out")) == 2);
  }
}

TEST_CASE("simulate writes the full fixture set deterministically") {
  Scratch s;
  make_fixture(s, "a", 42);
  make_fixture(s, "b", 42);
  make_fixture(s, "c", 43);

  for (const char* f :
       {"prices.csv", "returns.csv", "theta.csv", "simulate.json",
        "resolved_config.json"}) {
    CHECK(fs::exists(s.dir / "a" / f));
  }
  CHECK(starts_with_manifest(s.dir / "a" / "prices.csv"));
  CHECK(starts_with_manifest(s.dir / "a" / "theta.csv"));
  CHECK(data_rows(s.dir / "a" / "returns.csv") == 2000);
  CHECK(data_rows(s.dir / "a" / "prices.csv") == 2001);
  CHECK(data_rows(s.dir / "a" / "theta.csv") == 100);

  const json meta = slurp_json(s.dir / "a" / "simulate.json");
  CHECK(meta.at("model") == "iga(alpha=3,beta=2,mu=0)");
  CHECK(meta.at("seed") == 42);
  CHECK(meta.at("manifest").at("command") == "simulate");

  CHECK(dir_digests(s.dir / "a") == dir_digests(s.dir / "b"));
  CHECK(slurp(s.dir / "a" / "prices.csv") != slurp(s.dir / "c" / "prices.csv"));
}

TEST_CASE("ingest emits signed and absolute returns per timescale") {
  Scratch s;
  make_fixture(s, "fix", 5);

  SUBCASE("single timescale") {
    REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                    " --timescale minute --out-dir " + s.sub("ing")) == 0);
    CHECK(data_rows(s.dir / "ing" / "returns_minute_signed.csv") == 2000);
    CHECK(data_rows(s.dir / "ing" / "returns_minute_abs.csv") == 2000);
    CHECK(!fs::exists(s.dir / "ing" / "returns_hour_signed.csv"));
  }

  SUBCASE("all timescales yield eight files") {
    REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                    " --out-dir " + s.sub("all")) == 0);
    std::size_t csvs = 0;
    for (const auto& e : fs::directory_iterator(s.dir / "all")) {
      if (e.path().extension() == ".csv") {
        ++csvs;
        CHECK(starts_with_manifest(e.path()));
      }
    }
    CHECK(csvs == 8);
    // 2000 minutes just passes the 4-hour mark of day 2: two day buckets.
    CHECK(data_rows(s.dir / "all" / "returns_day_signed.csv") == 1);
    CHECK(data_rows(s.dir / "all" / "returns_hour_signed.csv") == 33);
  }

  SUBCASE("absolute file holds the magnitudes of the signed file") {
    REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                    " --timescale hour --out-dir " + s.sub("h")) == 0);
    std::ifstream sig(s.dir / "h" / "returns_hour_signed.csv");
    std::ifstream abs(s.dir / "h" / "returns_hour_abs.csv");
    std::string ls, la;
    std::getline(sig, ls);  // manifest
    std::getline(abs, la);
    std::getline(sig, ls);  // header
    std::getline(abs, la);
    while (std::getline(sig, ls) && std::getline(abs, la)) {
      const double vs = std::stod(ls.substr(ls.find(',') + 1));
      const double va = std::stod(la.substr(la.find(',') + 1));
      CHECK(va == doctest::Approx(std::abs(vs)).epsilon(1e-15));
    }
  }
}

TEST_CASE("diagnose writes the full report set") {
  Scratch s;
  make_fixture(s, "fix", 9);
  REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                  " --timescale minute --out-dir " + s.sub("ing")) == 0);
  const std::string input = s.sub("ing") + "/returns_minute_signed.csv";
  REQUIRE(run_cli("diagnose --input " + input + " --max-lag 40 --bins 20 "
                  "--out-dir " +
                  s.sub("diag")) == 0);

  CHECK(data_rows(s.dir / "diag" / "acf.csv") == 41);  // lags 0..40
  CHECK(data_rows(s.dir / "diag" / "histogram.csv") == 20);
  CHECK(data_rows(s.dir / "diag" / "periodogram.csv") == 1001);  // n/2+1

  const json adf = slurp_json(s.dir / "diag" / "adf.json");
  for (const char* k :
       {"statistic", "lags_used", "reject_1", "reject_5", "reject_10"}) {
    CHECK(adf.contains(k));
  }

  const json summary = slurp_json(s.dir / "diag" / "summary.json");
  CHECK(summary.at("n") == 2000);
  CHECK(summary.at("kind") == "signed");
  CHECK(summary.at("acf").at("max_lag") == 40);
  CHECK(summary.at("histogram").at("bins") == 20);
  CHECK(summary.at("adf").contains("reject_10"));
  // Independent increments: the level series is stationary.
  CHECK(summary.at("adf").at("reject_10") == true);
  CHECK(summary.at("variance").get<double>() > 0.0);
}

TEST_CASE("fit reports the posterior point estimate") {
  Scratch s;
  make_fixture(s, "fix", 21);
  REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                  " --timescale minute --out-dir " + s.sub("ing")) == 0);
  const std::string input = s.sub("ing") + "/returns_minute_signed.csv";

  SUBCASE("standard mode trace and estimate") {
    REQUIRE(run_cli("fit --input " + input + " --model iga --alpha 3 --beta 2 "
                    "--iterations 3000 --burn-in 1000 --seed 4 --out-dir " +
                    s.sub("fit")) == 0);
    CHECK(data_rows(s.dir / "fit" / "trace.csv") == 3000);

    const json fit = slurp_json(s.dir / "fit" / "fit.json");
    CHECK(fit.at("mode") == "standard");
    CHECK(fit.at("model") == "iga");
    CHECK(fit.at("hyperparams").at("alpha") == 3.0);
    CHECK(fit.at("hyperparams").at("beta") == 2.0);
    CHECK(fit.at("hyperparams").contains("mu"));
    CHECK(!fit.at("hyperparams").contains("s"));

    // theta is tightly identified at the mean squared deviation; the chain
    // started there, so even a short run stays within a few percent.
    const json summary_cmd = slurp_json(s.dir / "fit" / "resolved_config.json");
    const double theta = fit.at("theta_hat").get<double>();
    CHECK(theta > 0.5);
    CHECK(theta < 2.0);
    CHECK(fit.at("stderr").get<double>() > 0.0);
    CHECK(summary_cmd.at("fit").at("iterations") == 3000);
  }

  SUBCASE("greedy mode reports a point with zero spread") {
    REQUIRE(run_cli("fit --input " + input + " --model logn --s 1 "
                    "--mode greedy --iterations 300 --seed 4 --out-dir " +
                    s.sub("g")) == 0);
    const json fit = slurp_json(s.dir / "g" / "fit.json");
    CHECK(fit.at("mode") == "greedy");
    CHECK(fit.at("stderr") == 0.0);
    CHECK(fit.at("hyperparams").contains("s"));
    CHECK(!fit.at("hyperparams").contains("alpha"));
  }
}

TEST_CASE("compare writes the Bayes-factor series and summary") {
  Scratch s;
  make_fixture(s, "fix", 31);
  REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                  " --timescale minute --out-dir " + s.sub("ing")) == 0);
  const std::string input = s.sub("ing") + "/returns_minute_signed.csv";

  SUBCASE("explicit hyperparameters") {
    REQUIRE(run_cli("compare --input " + input + " --m1 iga --m2 logn "
                    "--alpha 3 --beta 2 --s 1 --n-series 4 --n-draws 500 "
                    "--seed 8 --out-dir " +
                    s.sub("cmp")) == 0);
    CHECK(data_rows(s.dir / "cmp" / "bf_series.csv") == 4);

    const json cmp = slurp_json(s.dir / "cmp" / "compare.json");
    CHECK(cmp.at("m1") == "iga(alpha=3,beta=2,mu=0)");
    CHECK(cmp.at("m2") == "logn(s=1,mu=0)");
    CHECK(cmp.at("m1_source") == "flags");
    CHECK(cmp.at("m2_source") == "flags");
    CHECK(cmp.at("n_series") == 4);
    const double frac = cmp.at("fraction_m1").get<double>();
    CHECK(frac >= 0.0);
    CHECK(frac <= 1.0);
    CHECK(cmp.at("mean_bf").get<double>() > 0.0);
    const double prob = cmp.at("posterior_prob_m1").get<double>();
    CHECK(prob > 0.0);
    CHECK(prob < 1.0);
  }

  SUBCASE("omitted hyperparameters are grid-fitted") {
    REQUIRE(run_cli("compare --input " + input + " --m1 iga --m2 logn "
                    "--n-series 1 --n-draws 300 --seed 8 --out-dir " +
                    s.sub("grid")) == 0);
    const json cmp = slurp_json(s.dir / "grid" / "compare.json");
    CHECK(cmp.at("m1_source") == "grid");
    CHECK(cmp.at("m2_source") == "grid");
    CHECK(data_rows(s.dir / "grid" / "bf_series.csv") == 1);
  }
}

TEST_CASE("predict evaluates known closed forms") {
  Scratch s;
  // alpha = beta = 1/2 makes the predictive a standard Cauchy.
  REQUIRE(run_cli("predict --model iga --alpha 0.5 --beta 0.5 "
                  "--grid-min -1 --grid-max 1 --grid-points 3 --out-dir " +
                  s.sub("c")) == 0);
  std::ifstream in(s.dir / "c" / "curve.csv");
  std::string line;
  std::getline(in, line);  // manifest
  std::getline(in, line);
  CHECK(line == "x,density,model");
  std::vector<double> density;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    density.push_back(std::stod(line.substr(a + 1, b - a - 1)));
    CHECK(line.substr(b + 1) == "iga(alpha=0.5,beta=0.5,mu=0)");
  }
  REQUIRE(density.size() == 3);
  const double pi = 3.14159265358979323846;
  CHECK(density[0] == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-12));
  CHECK(density[1] == doctest::Approx(1.0 / pi).epsilon(1e-12));
  CHECK(density[2] == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-12));

  SUBCASE("abs curve defaults its grid to start at zero") {
    REQUIRE(run_cli("predict --model iga --alpha 0.5 --beta 0.5 --abs "
                    "--grid-max 1 --grid-points 2 --out-dir " +
                    s.sub("abs")) == 0);
    std::ifstream ain(s.dir / "abs" / "curve.csv");
    std::getline(ain, line);
    std::getline(ain, line);
    std::getline(ain, line);
    CHECK(line.rfind("0,", 0) == 0);
    // |Cauchy| at 0 folds both signs: 2/pi.
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    CHECK(std::stod(line.substr(a + 1, b - a - 1)) ==
          doctest::Approx(2.0 / pi).epsilon(1e-12));
  }
}

TEST_CASE("config file values merge beneath explicit flags") {
  Scratch s;
  std::ofstream(s.sub("cfg.json"))
      << R"({"seed": 7, "predict": {"grid-points": 3, "alpha": 2.0}})";
  REQUIRE(run_cli("predict --model iga --beta 4 --config " + s.sub("cfg.json") +
                  " --out-dir " + s.sub("out")) == 0);

  const json rc = slurp_json(s.dir / "out" / "resolved_config.json");
  CHECK(rc.at("seed") == 7);                          // from config
  CHECK(rc.at("predict").at("grid-points") == 3);     // from config
  CHECK(rc.at("predict").at("alpha") == 2.0);         // from config
  CHECK(rc.at("predict").at("beta") == 4.0);          // flag wins
  CHECK(rc.at("command") == "predict");
  CHECK(!rc.contains("threads"));
  CHECK(data_rows(s.dir / "out" / "curve.csv") == 3);

  SUBCASE("explicit flag overrides the config seed") {
    REQUIRE(run_cli("predict --model iga --seed 99 --config " +
                    s.sub("cfg.json") + " --out-dir " + s.sub("o2")) == 0);
    const json rc2 = slurp_json(s.dir / "o2" / "resolved_config.json");
    CHECK(rc2.at("seed") == 99);
  }
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  Scratch s;
  make_fixture(s, "fix", 77);
  REQUIRE(run_cli("ingest --input " + s.sub("fix") + "/prices.csv" +
                  " --timescale minute --out-dir " + s.sub("ing")) == 0);
  const std::string input = s.sub("ing") + "/returns_minute_signed.csv";

  const std::string args = "compare --input " + input +
                           " --m1 iga --m2 logn --alpha 3 --beta 2 --s 1 "
                           "--n-series 6 --n-draws 400 --seed 5 ";
  REQUIRE(run_cli(args + "--threads 1 --out-dir " + s.sub("t1")) == 0);
  REQUIRE(run_cli(args + "--threads 4 --out-dir " + s.sub("t4")) == 0);
  REQUIRE(run_cli(args + "--threads 4 --out-dir " + s.sub("t4b")) == 0);

  CHECK(dir_digests(s.dir / "t1") == dir_digests(s.dir / "t4"));
  CHECK(dir_digests(s.dir / "t4") == dir_digests(s.dir / "t4b"));

  // fit with multi-thread-capable internals, same contract
  const std::string fit_args = "fit --input " + input +
                               " --model iga --iterations 500 --seed 3 ";
  REQUIRE(run_cli(fit_args + "--threads 1 --out-dir " + s.sub("f1")) == 0);
  REQUIRE(run_cli(fit_args + "--threads 3 --out-dir " + s.sub("f3")) == 0);
  CHECK(dir_digests(s.dir / "f1") == dir_digests(s.dir / "f3"));
}
