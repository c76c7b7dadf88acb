#include "synthdim/cli.hpp"

namespace synthdim::cli {

using nlohmann::json;

namespace {

json ssh(double g1, double g2) { return {{"kind", "alternating"}, {"g1", g1}, {"g2", g2}}; }
json uniform(double g) { return {{"kind", "uniform"}, {"g", g}}; }

json edge_run(double g1, double g2, std::vector<int> sites, double delta_e) {
  return {{"mode", "evolve"},
          {"n_bosons", 2},
          {"lattice", {{"coupling", ssh(g1, g2)}, {"interaction", {{"U", 0.0}, {"R", 0}}}, {"cells", {-15, 15}}}},
          {"excitation", {{"sites", sites}, {"delta_e", delta_e}, {"t0", 10.0}, {"tau2", 10.0}}},
          {"dt", 0.01},
          {"t_end", 50.0},
          {"snapshot_times", {20.0, 40.0}}};
}

json interface_run(double g1, double g2, double U, std::vector<int> sites, double delta_e) {
  json j = edge_run(g1, g2, std::move(sites), delta_e);
  j["lattice"]["interaction"] = {{"U", U}, {"R", 6}};
  j["snapshot_times"] = {25.0, 50.0};
  return j;
}

json stripe_run(double g1, double g2, double U, std::vector<int> translation) {
  return {{"mode", "stripe"},
          {"n_bosons", 2},
          {"lattice", {{"coupling", ssh(g1, g2)}, {"interaction", {{"U", U}, {"R", 6}}}}},
          {"geometry", {{"translation", translation}, {"transverse", {-15, 15}}}},
          {"k_count", 61},
          {"bulk_samples", 201}};
}

json bands_run(json coupling) {
  return {{"mode", "bands"}, {"n_bosons", 2}, {"lattice", {{"coupling", std::move(coupling)}}}, {"k_count", 41}};
}

std::vector<Preset> make_presets() {
  std::vector<Preset> p;
  p.push_back({"fig1c", "two-boson tight-binding bands, g = 1", bands_run(uniform(1.0))});
  p.push_back({"fig2c", "two-boson SSH bands, g1 = 3, g2 = 1", bands_run(ssh(3.0, 1.0))});
  p.push_back({"fig3a", "SSH stripe, trivial (3, 1), -15 <= n <= 15", stripe_run(3.0, 1.0, 0.0, {1, 0})});
  p.push_back({"fig3b", "SSH stripe, nontrivial (1, 3), -15 <= n <= 15", stripe_run(1.0, 3.0, 0.0, {1, 0})});
  p.push_back({"fig4a", "excite C0 and D15, (1, 3), dE = 3.16", edge_run(1.0, 3.0, {0, 31}, 3.16)});
  p.push_back({"fig4c", "excite C0 twice, (1, 3), dE = 0", edge_run(1.0, 3.0, {0, 0}, 0.0)});
  p.push_back({"fig4e", "excite C0 and D15, (3, 1), dE = 0", edge_run(3.0, 1.0, {0, 31}, 0.0)});
  p.push_back({"fig5b", "interacting diagonal stripe, U = 2, R = 6, (3, 1)", stripe_run(3.0, 1.0, 2.0, {1, 1})});
  p.push_back({"fig5c", "interacting diagonal stripe, U = 2, R = 6, (1, 3)", stripe_run(1.0, 3.0, 2.0, {1, 1})});
  p.push_back({"fig7a", "excite C0 and D6, U = 2, (1, 3), dE = 1", interface_run(1.0, 3.0, 2.0, {0, 13}, 1.0)});
  p.push_back({"fig7b", "excite C0 and D6, U = 2, (3, 1), dE = 1", interface_run(3.0, 1.0, 2.0, {0, 13}, 1.0)});
  p.push_back({"fig7c", "excite C0 twice, U = 2, (1, 3), dE = 1", interface_run(1.0, 3.0, 2.0, {0, 0}, 1.0)});
  p.push_back({"fig7d", "excite C0 and D6, U = 0, (1, 3), dE = 0", interface_run(1.0, 3.0, 0.0, {0, 13}, 0.0)});
  p.push_back({"fig9a", "three-boson diagonal stripe, U = 12, R = 6, -15 <= l1, l2 <= 15",
               {{"mode", "classify"},
                {"n_bosons", 3},
                {"lattice", {{"coupling", uniform(1.0)}, {"interaction", {{"U", 12.0}, {"R", 6}}}}},
                {"geometry", {{"translation", {1, 1, 1}}, {"transverse", {-15, 15}}}},
                {"k_count", 5}}});
  for (Preset& preset : p) preset.config["output_dir"] = preset.name;
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = make_presets();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace synthdim::cli
