#include <exception>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "synthdim/cli.hpp"

namespace {

void report(const std::exception& e, int code) {
  const char* kind = code == 2 ? "config" : code == 3 ? "numerical" : "runtime";
  std::cerr << nlohmann::json{{"error", kind}, {"message", e.what()}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace synthdim::cli;

  CLI::App app{"synthdim: N bosons on a 1D lattice as one particle on an N-D synthetic lattice"};
  app.require_subcommand(1);
  int threads = 0;
  long seed = 0;
  app.add_option("--threads", threads, "worker threads for k-point sweeps")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "reserved; the pipeline uses no randomness");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute a JSON run config");
  run_cmd->add_option("config", config_path, "config file")->required();

  std::string preset_name, out_dir;
  auto* preset_cmd = app.add_subcommand("preset", "execute a built-in preset");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_option("--out", out_dir, "output directory (default: the preset name)");

  auto* list_cmd = app.add_subcommand("list-presets", "list the built-in presets");

  CLI11_PARSE(app, argc, argv);

  if (*list_cmd) {
    for (const Preset& p : presets()) std::cout << p.name << "  " << p.description << '\n';
    return 0;
  }

  try {
    RunConfig config;
    if (*run_cmd) {
      config = load_config(config_path);
    } else {
      nlohmann::json j = find_preset(preset_name).config;
      if (!out_dir.empty()) j["output_dir"] = out_dir;
      config = parse_config(j);
    }
    if (threads > 0) config.threads = threads;
    run(config, std::cout);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    report(e, code);
    return code;
  }
  return 0;
}
