#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssv/common.hpp"

namespace ssv::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void GlobalOptions::load_and_merge() {
  if (!config_path.empty()) {
    const std::string text = read_file(config_path);
    json parsed;
    try {
      parsed = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ssv::parse_error("config file '" + config_path +
                             "' is not valid JSON: " + e.what());
    }
    if (!parsed.is_object()) {
      throw ssv::parse_error("config file '" + config_path +
                             "' must hold a JSON object");
    }
    config = std::move(parsed);
  }
  try {
    merge_option(config, "seed", seed_count, seed);
    merge_option(config, "threads", threads_count, threads);
    merge_option(config, "out-dir", out_dir_count, out_dir);
  } catch (const json::exception& e) {
    throw ssv::parse_error(std::string("config value has wrong type: ") +
                           e.what());
  }
  if (threads == 0) {
    throw ssv::domain_error("--threads must be at least 1");
  }
}

json config_section(const json& cfg, const std::string& name) {
  if (cfg.contains(name) && cfg.at(name).is_object()) {
    return cfg.at(name);
  }
  return json::object();
}

std::string RunManifest::comment_line() const {
  std::ostringstream out;
  out << "# ssv=" << tool_version << " command=" << command
      << " seed=" << seed << " config=" << config_digest
      << " input=" << input_digest;
  return out.str();
}

json RunManifest::to_json() const {
  return json{{"command", command},
              {"config_digest", config_digest},
              {"seed", seed},
              {"input_digest", input_digest},
              {"tool_version", tool_version}};
}

json resolved_config_json(const GlobalOptions& g, const std::string& command,
                          const json& cmd_section) {
  // threads and out-dir are deliberately absent: they choose execution
  // resources and file placement, never results, and including them would
  // break byte-identity of outputs across --threads and across directories.
  json out{{"command", command}, {"seed", g.seed}};
  out[command] = cmd_section;
  return out;
}

RunManifest make_manifest(const GlobalOptions& g, const std::string& command,
                          const json& cmd_section,
                          const std::string& input_digest) {
  RunManifest m;
  m.command = command;
  m.seed = g.seed;
  m.input_digest = input_digest;
  m.config_digest =
      digest_string(resolved_config_json(g, command, cmd_section).dump());
  return m;
}

std::string digest_string(const std::string& text) {
  return to_hex(fnv1a64(text));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ssv::io_error("cannot open input file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw ssv::io_error("failed while reading '" + path + "'");
  }
  return buf.str();
}

std::string write_output(const std::string& out_dir, const std::string& name,
                         const std::string& content) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw ssv::io_error("cannot create output directory '" + out_dir +
                        "': " + ec.message());
  }
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ssv::io_error("cannot write output file '" + path.string() + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw ssv::io_error("failed while writing '" + path.string() + "'");
  }
  return path.string();
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_resolved_config(const GlobalOptions& g, const std::string& command,
                           const json& cmd_section) {
  write_output(g.out_dir, "resolved_config.json",
               dump_json(resolved_config_json(g, command, cmd_section)));
}

ModelSpec make_model(const std::string& family, double alpha, double beta,
                     double s, double mu) {
  ModelSpec m;
  if (family == "iga") {
    m.law = IGaLaw{alpha, beta};
  } else if (family == "logn") {
    m.law = LogNLaw{s};
  } else {
    throw ssv::domain_error("unknown model family '" + family + "'");
  }
  m.mu = mu;
  validate_model(m);
  return m;
}

}  // namespace ssv::cli
