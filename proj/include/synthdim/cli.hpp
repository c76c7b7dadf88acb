#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthdim/bloch.hpp"
#include "synthdim/model.hpp"

namespace synthdim::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { Bands, Stripe, Evolve, Classify, OracleCheck };

std::string to_string(Mode m);

// Bad or incomplete configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Mode mode = Mode::Bands;
  model::LatticeSpec lattice;
  int n_bosons = 2;
  std::optional<bloch::StripeGeometry> geometry;
  std::optional<model::ExcitationSpec> excitation;
  std::filesystem::path output_dir = "out";
  int k_count = 41;
  int bulk_samples = 201;
  double dt = 0.01;
  double t_end = 50.0;
  double sample_interval = 0.1;
  double max_step_norm = 0.1;
  std::vector<double> snapshot_times;
  int threads = 1;
  nlohmann::json source;  // the config as given
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

struct Preset {
  std::string name;
  std::string description;
  nlohmann::json config;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

// Executes one run and writes its artifacts into config.output_dir.
void run(const RunConfig& config, std::ostream& log);

// Exit status for an exception escaping run(): 2 config, 3 numerical.
int exit_code_for(const std::exception& e);

// 12 significant digits, general format, locale independent.
std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  CsvWriter& cell(double value);
  CsvWriter& cell(long value);
  CsvWriter& cell(int value) { return cell(static_cast<long>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace synthdim::cli
