#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace CLI {
class App;
}

namespace ssv::cli {

struct GlobalOptions;

/// Parsed-subcommand dispatch table. Handlers run after the global config
/// merge, outside of CLI11's own callback machinery, so ordering and error
/// routing stay explicit.
struct CommandRegistry {
  std::vector<std::pair<const CLI::App*, std::function<void()>>> entries;

  /// Run the handler of the subcommand that was parsed.
  void run_selected() const;
};

CommandRegistry register_commands(CLI::App& app, GlobalOptions& g);

}  // namespace ssv::cli
