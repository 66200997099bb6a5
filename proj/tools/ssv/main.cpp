#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ssv/common.hpp"
#include "support.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Superstatistical volatility analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ssv::cli::kToolVersion);

  ssv::cli::GlobalOptions g;
  app.add_option("--seed", g.seed, "Base RNG seed (default 0)");
  app.add_option("--threads", g.threads, "Worker threads (default 1)");
  app.add_option("--out-dir", g.out_dir,
                 "Directory for output files (default .)");
  app.add_option("--config", g.config_path,
                 "JSON config file; explicit flags override it");

  const ssv::cli::CommandRegistry registry =
      ssv::cli::register_commands(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  g.seed_count = app.count("--seed");
  g.threads_count = app.count("--threads");
  g.out_dir_count = app.count("--out-dir");

  g.load_and_merge();
  registry.run_selected();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ssv::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ssv::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ssv::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
