#include <fstream>
#include <sstream>

#include "synthdim/cli.hpp"

namespace synthdim::cli {

using nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Bands: return "bands";
    case Mode::Stripe: return "stripe";
    case Mode::Evolve: return "evolve";
    case Mode::Classify: return "classify";
    case Mode::OracleCheck: return "oracle_check";
  }
  return "bands";
}

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + path + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigError("field '" + path + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? number(j, key, path) : fallback;
}

int integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ConfigError("field '" + path + key + "' must be an integer");
  return v.get<int>();
}

int integer_or(const json& j, const std::string& key, const std::string& path, int fallback) {
  return j.contains(key) ? integer(j, key, path) : fallback;
}

std::vector<int> int_list(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ConfigError("field '" + path + key + "' must be an array");
  std::vector<int> out;
  for (const json& x : v) {
    if (!x.is_number_integer()) throw ConfigError("field '" + path + key + "' must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::pair<int, int> range(const json& j, const std::string& key, const std::string& path) {
  const std::vector<int> r = int_list(j, key, path);
  if (r.size() != 2) throw ConfigError("field '" + path + key + "' must be [min, max]");
  return {r[0], r[1]};
}

Mode parse_mode(const std::string& s) {
  if (s == "bands") return Mode::Bands;
  if (s == "stripe") return Mode::Stripe;
  if (s == "evolve") return Mode::Evolve;
  if (s == "classify") return Mode::Classify;
  if (s == "oracle_check") return Mode::OracleCheck;
  throw ConfigError("field 'mode' must be one of bands, stripe, evolve, classify, oracle_check");
}

model::CouplingPattern parse_coupling(const json& j) {
  const json& c = require(j, "coupling", "lattice.");
  const json& kind = require(c, "kind", "lattice.coupling.");
  if (kind == "uniform") return model::CouplingPattern::uniform(number(c, "g", "lattice.coupling."));
  if (kind == "alternating")
    return model::CouplingPattern::alternating(number(c, "g1", "lattice.coupling."),
                                               number(c, "g2", "lattice.coupling."));
  throw ConfigError("field 'lattice.coupling.kind' must be uniform or alternating");
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.source = j;
  const json& mode = require(j, "mode", "");
  if (!mode.is_string()) throw ConfigError("field 'mode' must be a string");
  c.mode = parse_mode(mode.get<std::string>());
  c.n_bosons = integer(j, "n_bosons", "");
  if (c.n_bosons < 1) throw ConfigError("field 'n_bosons' must be positive");

  const json& lat = require(j, "lattice", "");
  c.lattice.pattern = parse_coupling(lat);
  if (lat.contains("interaction")) {
    const json& in = lat.at("interaction");
    c.lattice.interaction.U = number(in, "U", "lattice.interaction.");
    c.lattice.interaction.R = integer_or(in, "R", "lattice.interaction.", 0);
  }
  const bool needs_window = c.mode == Mode::Evolve || c.mode == Mode::OracleCheck;
  if (needs_window || lat.contains("cells")) {
    const auto [lo, hi] = range(lat, "cells", "lattice.");
    c.lattice.cell_min = lo;
    c.lattice.cell_max = hi;
  }
  if (lat.contains("boundary")) {
    const json& b = lat.at("boundary");
    if (b == "open")
      c.lattice.boundary = model::Boundary::Open;
    else if (b == "periodic")
      c.lattice.boundary = model::Boundary::Periodic;
    else
      throw ConfigError("field 'lattice.boundary' must be open or periodic");
  }

  c.k_count = integer_or(j, "k_count", "", c.k_count);
  c.bulk_samples = integer_or(j, "bulk_samples", "", c.bulk_samples);
  c.dt = number_or(j, "dt", "", c.dt);
  c.t_end = number_or(j, "t_end", "", c.t_end);
  c.sample_interval = number_or(j, "sample_interval", "", c.sample_interval);
  c.max_step_norm = number_or(j, "max_step_norm", "", c.max_step_norm);
  c.threads = integer_or(j, "threads", "", c.threads);
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("field 'output_dir' must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("snapshot_times")) {
    for (const json& t : j.at("snapshot_times")) {
      if (!t.is_number()) throw ConfigError("field 'snapshot_times' must hold numbers");
      c.snapshot_times.push_back(t.get<double>());
    }
  }

  if (c.mode == Mode::Stripe || c.mode == Mode::Classify) {
    const json& g = require(j, "geometry", "");
    bloch::StripeGeometry geom;
    geom.pattern = c.lattice.pattern;
    geom.interaction = c.lattice.interaction;
    geom.n_bosons = c.n_bosons;
    geom.translation = int_list(g, "translation", "geometry.");
    const auto [lo, hi] = range(g, "transverse", "geometry.");
    geom.transverse_min = lo;
    geom.transverse_max = hi;
    if (g.contains("transverse_periodic")) geom.transverse_periodic = g.at("transverse_periodic").get<bool>();
    c.geometry = geom;
  }
  if (c.mode == Mode::Evolve || c.mode == Mode::OracleCheck) {
    const json& e = require(j, "excitation", "");
    const std::vector<int> sites = int_list(e, "sites", "excitation.");
    c.excitation = model::ExcitationSpec::from_sites(sites, number(e, "delta_e", "excitation."),
                                                     number_or(e, "t0", "excitation.", 10.0),
                                                     number_or(e, "tau2", "excitation.", 10.0),
                                                     number_or(e, "eta0", "excitation.", 1.0));
  }

  if (c.k_count < 2) throw ConfigError("field 'k_count' must be at least 2");
  if (c.bulk_samples < 2) throw ConfigError("field 'bulk_samples' must be at least 2");
  if (!(c.dt > 0.0)) throw ConfigError("field 'dt' must be positive");
  if (!(c.t_end > 0.0)) throw ConfigError("field 't_end' must be positive");
  if (!(c.sample_interval > 0.0)) throw ConfigError("field 'sample_interval' must be positive");
  if (!(c.max_step_norm > 0.0)) throw ConfigError("field 'max_step_norm' must be positive");
  if (c.threads < 1) throw ConfigError("field 'threads' must be positive");
  try {
    c.lattice.pattern.validate();
    c.lattice.interaction.validate();
    if (needs_window) c.lattice.validate();
    if (c.geometry) c.geometry->validate();
    if (c.excitation) c.excitation->validate(c.lattice, c.n_bosons);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace synthdim::cli
