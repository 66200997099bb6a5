#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "ssv/densities.hpp"

namespace ssv::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Flags shared by every verb. Values already reflect the config-file merge
/// by the time a command handler runs (flags given on the command line win).
struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = ".";
  std::string config_path;

  // Flag usage counts recorded at parse time so the config merge knows
  // which values were explicitly given.
  std::size_t seed_count = 0;
  std::size_t threads_count = 0;
  std::size_t out_dir_count = 0;

  nlohmann::json config = nlohmann::json::object();

  /// Load --config (if any) and fill unset global flags from its top level.
  void load_and_merge();
};

/// config[name] when it is an object; empty object otherwise.
nlohmann::json config_section(const nlohmann::json& cfg,
                              const std::string& name);

/// Fill `value` from section[key] unless the flag was given explicitly.
template <class T>
void merge_option(const nlohmann::json& section, const std::string& key,
                  std::size_t flag_count, T& value) {
  if (flag_count == 0 && section.contains(key)) {
    value = section.at(key).get<T>();
  }
}

/// Provenance stamp carried by every output file of a run.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string input_digest;
  std::string tool_version = kToolVersion;

  /// '#'-prefixed single-line form used at the top of CSV outputs.
  std::string comment_line() const;
  nlohmann::json to_json() const;
};

/// The resolved configuration echoed alongside outputs: the command, the
/// seed, and the final per-command values. Execution-only settings
/// (--threads, --out-dir) are excluded so outputs stay byte-identical
/// across thread counts and target directories.
nlohmann::json resolved_config_json(const GlobalOptions& g,
                                    const std::string& command,
                                    const nlohmann::json& cmd_section);

/// Manifest for this run; config_digest hashes the resolved config.
RunManifest make_manifest(const GlobalOptions& g, const std::string& command,
                          const nlohmann::json& cmd_section,
                          const std::string& input_digest);

std::string digest_string(const std::string& text);

/// Whole-file read; throws ssv::io_error naming the path.
std::string read_file(const std::string& path);

/// Create out_dir if needed and write content to out_dir/name; returns the
/// path written. Throws ssv::io_error on failure.
std::string write_output(const std::string& out_dir, const std::string& name,
                         const std::string& content);

/// Serialize with 2-space indent and trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Echo resolved_config.json into out_dir.
void write_resolved_config(const GlobalOptions& g, const std::string& command,
                           const nlohmann::json& cmd_section);

/// Model assembly from CLI flag values; family is "iga" or "logn".
ModelSpec make_model(const std::string& family, double alpha, double beta,
                     double s, double mu);

}  // namespace ssv::cli
