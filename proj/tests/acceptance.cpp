// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only N]... [--expect-fail N]...
//
// Exit status is nonzero when a criterion fails that was not listed with
// --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "synthdim/cli.hpp"
#include "synthdim/dynamics.hpp"
#include "synthdim/oracle.hpp"
#include "synthdim/spectra.hpp"

using namespace synthdim;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail: " << what << "] ";
    }
  }
};

std::string num(double x) { return cli::format_number(x); }

// Runtime budget is part of each criterion.
void budget(Outcome& o, double seconds, double limit) {
  o.detail << "(" << num(std::round(seconds * 100) / 100) << " s)";
  o.require(seconds < limit, "runtime over " + num(limit) + " s");
}

std::vector<double> eigenvalues(const Eigen::MatrixXcd& h) {
  const Eigen::VectorXd e = spectra::hermitian_eigenvalues(h);
  return {e.data(), e.data() + e.size()};
}

// 1 ---------------------------------------------------------------------------

void analytic_bands(Outcome& o) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> kd(-pi, pi);
  const double g = 1.3, g1 = 0.7, g2 = 1.9;
  double worst_tb = 0.0, worst_ssh = 0.0;
  for (int i = 0; i < 200; ++i) {
    for (int n : {2, 3}) {
      std::vector<double> k(static_cast<std::size_t>(n));
      for (double& x : k) x = kd(rng);
      const auto e = eigenvalues(bloch::build_bulk_bloch(model::CouplingPattern::uniform(g), n, k));
      worst_tb = std::max(worst_tb, std::abs(e[0] - bloch::analytic_band_tb(k, g)));
    }
    const std::vector<double> k{kd(rng), kd(rng)};
    const auto e = eigenvalues(bloch::build_bulk_bloch(model::CouplingPattern::alternating(g1, g2), 2, k));
    const auto ref = bloch::analytic_band_ssh2d(k[0], k[1], g1, g2);
    for (std::size_t b = 0; b < 4; ++b) worst_ssh = std::max(worst_ssh, std::abs(e[b] - ref[b]));
  }
  o.detail << "max |dE| tight-binding " << num(worst_tb) << ", SSH " << num(worst_ssh) << " ";
  o.require(worst_tb < 1e-10 * g, "tight-binding");
  o.require(worst_ssh < 1e-10 * std::min(g1, g2), "SSH");
}

// 2 ---------------------------------------------------------------------------

void separability(Outcome& o) {
  for (bool ssh : {false, true}) {
    model::LatticeSpec ring;
    ring.pattern = ssh ? model::CouplingPattern::alternating(1.0, 3.0) : model::CouplingPattern::uniform(1.0);
    ring.cell_min = 0;
    ring.cell_max = ssh ? 4 : 9;
    ring.boundary = model::Boundary::Periodic;
    const auto dense = [&](int n) {
      return synth::build_synthetic_operator(ring, n).dense().cast<std::complex<double>>().eval();
    };
    const auto one = eigenvalues(dense(1));
    const auto two = eigenvalues(dense(2));
    std::vector<double> sums;
    for (double a : one)
      for (double b : one) sums.push_back(a + b);
    std::sort(sums.begin(), sums.end());
    double worst = sums.size() == two.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(sums.size(), two.size()); ++i) worst = std::max(worst, std::abs(sums[i] - two[i]));
    o.detail << (ssh ? "SSH" : "uniform") << " K=10 max dev " << num(worst) << "; ";
    o.require(worst < 1e-9, ssh ? "SSH" : "uniform");
  }
}

// 3 ---------------------------------------------------------------------------

struct OracleCase {
  model::LatticeSpec spec;
  int n;
  std::vector<int> sites;
  double delta_e;
};

OracleCase random_case(std::mt19937& rng, int n, bool alternating, int sites) {
  std::uniform_real_distribution<double> g(0.5, 2.0), u(0.0, 5.0), de(-2.0, 2.0);
  std::uniform_int_distribution<int> r(0, 2);
  OracleCase c;
  c.n = n;
  if (alternating)
    c.spec.pattern = model::CouplingPattern::alternating(g(rng), g(rng));
  else
    c.spec.pattern = model::CouplingPattern::uniform(g(rng));
  c.spec.interaction = {u(rng), r(rng)};
  c.spec.cell_min = 0;
  c.spec.cell_max = sites / c.spec.pattern.sites_per_cell() - 1;
  std::uniform_int_distribution<int> site(0, sites - 1);
  for (int i = 0; i < n; ++i) c.sites.push_back(site(rng));
  c.delta_e = de(rng);
  return c;
}

void oracle_equivalence(Outcome& o) {
  double worst_spec = 0.0, worst_traj = 0.0;
  int cases = 0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    std::mt19937 rng(1000 + seed);
    for (const OracleCase& c : {random_case(rng, 2, true, 8), random_case(rng, 3, false, 7), random_case(rng, 3, true, 8)}) {
      const auto op = synth::build_synthetic_operator(c.spec, c.n);
      const auto fock = oracle::build_fock_hamiltonian(c.spec, c.n);
      const Eigen::VectorXd a = oracle::fock_spectrum(fock);
      const Eigen::VectorXd b =
          spectra::hermitian_eigenvalues(synth::symmetric_sector_matrix(op).cast<std::complex<double>>());
      worst_spec = std::max(worst_spec, a.size() == b.size() ? (a - b).cwiseAbs().maxCoeff() : INFINITY);

      const auto exc = model::ExcitationSpec::from_sites(c.sites, c.delta_e);
      dynamics::EvolveOptions opt;
      opt.keep_fields = true;
      opt.max_step_norm = 0.3;
      const auto res = dynamics::evolve(op, dynamics::SourceTerm::from_excitation(exc), 30.0, 0.01, opt);
      const auto traj = oracle::evolve_fock(fock, exc, 30.0, 0.01);
      worst_traj = std::max(worst_traj, oracle::compare_trajectories(res.fields, res.times, fock, traj));
      ++cases;
    }
  }
  o.detail << cases << " cases, spectrum dev " << num(worst_spec) << ", trajectory dev " << num(worst_traj) << " ";
  o.require(worst_spec < 1e-9 * 0.5, "spectra");
  o.require(worst_traj < 1e-7, "trajectories");
}

// 4 ---------------------------------------------------------------------------

void edge_modes(Outcome& o) {
  const auto grid = bloch::uniform_k_grid(61);
  const std::size_t quarter = 45;  // k = 0.5 pi
  for (bool nontrivial : {false, true}) {
    const auto pattern = nontrivial ? model::CouplingPattern::alternating(1.0, 3.0)
                                    : model::CouplingPattern::alternating(3.0, 1.0);
    const auto geom = bloch::StripeGeometry::axis(pattern, {}, 2, 0, 15);
    const auto bands = bloch::projected_bands(geom, grid, {nontrivial, 1});
    const auto bulk = bloch::projected_bulk_bands(geom, grid);
    const auto gap = spectra::detect_gap_modes(bands, bulk);
    if (!nontrivial) {
      o.detail << "trivial: " << gap.size() << " in-gap modes; ";
      o.require(gap.empty(), "trivial phase has in-gap modes");
      continue;
    }
    const auto region = spectra::edge_region(geom);
    int at_quarter = 0;
    double min_weight = 1.0;
    for (const auto& m : gap) {
      if (static_cast<std::size_t>(m.k_index) != quarter) continue;
      const spectra::EigenPair pair{bands.energies(m.k_index, m.band_index), bands.eigvecs[quarter].col(m.band_index)};
      min_weight = std::min(min_weight, spectra::localization_weight(pair, region));
      ++at_quarter;
    }
    o.detail << "nontrivial: " << gap.size() << " in-gap modes, " << at_quarter << " at k=0.5pi with edge weight >= "
             << num(min_weight) << " ";
    o.require(at_quarter > 0, "no in-gap modes at k = 0.5 pi");
    o.require(min_weight > 0.9, "edge weight");
  }
}

// 5, 8, 10 --------------------------------------------------------------------

std::map<std::string, dynamics::EvolutionResult>& driven_runs() {
  static std::map<std::string, dynamics::EvolutionResult> runs;
  return runs;
}

const dynamics::EvolutionResult& driven(const std::string& preset) {
  auto& runs = driven_runs();
  if (auto it = runs.find(preset); it != runs.end()) return it->second;
  const cli::RunConfig c = cli::parse_config(cli::find_preset(preset).config);
  dynamics::EvolveOptions opt;
  opt.sample_interval = c.sample_interval;
  opt.max_step_norm = c.max_step_norm;
  const auto op = synth::build_synthetic_operator(c.lattice, c.n_bosons);
  return runs[preset] = dynamics::evolve(op, dynamics::SourceTerm::from_excitation(*c.excitation), c.t_end, c.dt, opt);
}

std::size_t sample_at(const dynamics::EvolutionResult& r, double t) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < r.times.size(); ++i)
    if (std::abs(r.times[i] - t) < std::abs(r.times[best] - t)) best = i;
  return best;
}

void edge_dynamics(Outcome& o) {
  const auto& a = driven("fig4a");
  const std::size_t i40 = sample_at(a, 40.0);
  const auto& n = a.boson_numbers[i40];
  const auto at = [&](int site) { return n[static_cast<std::size_t>(site - a.site_min)]; };
  double left = 0.0, right = 0.0;
  for (int s = a.site_min; s < a.site_min + static_cast<int>(n.size()); ++s) (s < 0 ? left : right) += s == 0 ? 0.0 : at(s);
  right -= 1.0;  // the boson held at D_15
  const double asym = std::abs(left - right) / (left + right);
  o.detail << "fig4a t=40: N(D15) " << num(at(31)) << ", left/right " << num(left) << "/" << num(right) << " asym "
           << num(asym) << "; ";
  o.require(at(31) > 0.5, "D15 population");
  o.require(asym < 0.1, "left/right asymmetry");
  for (const char* p : {"fig4c", "fig4e"}) {
    const auto& r = driven(p);
    const double d15 = r.boson_numbers[sample_at(r, 40.0)][static_cast<std::size_t>(31 - r.site_min)];
    o.detail << p << " N(D15) " << num(d15) << "; ";
    o.require(d15 < 0.1, std::string(p) + " D15 population");
  }
}

void interface_dynamics(Outcome& o) {
  const auto& a = driven("fig7a");
  const auto scen = dynamics::interface_scenario('a');
  const double t_on = scen.excitation.t0 + 5.0 * scen.excitation.tau();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < a.times.size(); ++i)
    if (a.times[i] >= t_on - 1e-9) {
      lo = std::min(lo, a.pair_distance[i]);
      hi = std::max(hi, a.pair_distance[i]);
    }
  o.detail << "fig7a <|dcell|> in [" << num(lo) << ", " << num(hi) << "] over t >= " << num(t_on) << "; ";
  o.require(lo >= 5.0 && hi <= 7.0, "fig7a distance leaves 6 +- 1");
  for (const char* p : {"fig7b", "fig7c", "fig7d"}) {
    const auto& r = driven(p);
    const double reach = *std::max_element(r.pair_distance.begin(), r.pair_distance.end());
    o.detail << p << " max " << num(reach) << "; ";
    o.require(reach > 8.0, std::string(p) + " stays below 8");
  }
}

void conservation(Outcome& o) {
  for (const char* p : {"fig4a", "fig4c", "fig4e", "fig7a", "fig7b", "fig7c", "fig7d"}) {
    const auto& r = driven(p);
    o.require(std::abs(r.norm_drift_rate) < 1e-8, std::string(p) + " norm drift " + num(r.norm_drift_rate));
    o.require(r.max_symmetry_violation < 1e-13, std::string(p) + " symmetry " + num(r.max_symmetry_violation));
    o.require(r.max_count_defect < 1e-10, std::string(p) + " count " + num(r.max_count_defect));
  }
  double drift = 0.0, sym = 0.0, count = 0.0;
  for (const auto& [name, r] : driven_runs()) {
    drift = std::max(drift, std::abs(r.norm_drift_rate));
    sym = std::max(sym, r.max_symmetry_violation);
    count = std::max(count, r.max_count_defect);
  }
  o.detail << driven_runs().size() << " runs: max norm drift " << num(drift) << "/t, symmetry " << num(sym)
           << ", count defect " << num(count) << " ";
}

// 6 ---------------------------------------------------------------------------

// States living in the nonlinear region |l| <= R above the lifted copy of the
// middle band, i.e. above `floor`.
std::optional<spectra::Cluster> lifted_upper(const bloch::StripeGeometry& geom, double k, double floor) {
  const auto pairs = spectra::hermitian_eig(bloch::build_stripe_bloch(geom, k));
  const auto region = spectra::region_where(bloch::supercell_sites(geom), [&](const std::vector<int>& l) {
    return std::abs(l[0]) <= geom.interaction.R;
  });
  spectra::Cluster c{INFINITY, -INFINITY, 0};
  for (const auto& p : pairs)
    if (p.energy > floor && spectra::localization_weight(p, region) > 0.5) {
      c.lo = std::min(c.lo, p.energy);
      c.hi = std::max(c.hi, p.energy);
      ++c.count;
    }
  if (c.count == 0) return std::nullopt;
  return c;
}

void band_lifting(Outcome& o) {
  auto geom = bloch::StripeGeometry::diagonal(model::CouplingPattern::alternating(3.0, 1.0), {2.0, 6}, 2, 15);
  auto free = geom;
  free.interaction.U = 0.0;
  double worst = 0.0;
  for (double k : bloch::uniform_k_grid(61)) {
    // U = 0: lower, middle and upper continua
    const auto bands0 = spectra::cluster_levels(eigenvalues(bloch::build_stripe_bloch(free, k)), 1.0);
    if (bands0.size() != 3) {
      o.require(false, "U = 0 spectrum does not split in three at k = " + num(k));
      continue;
    }
    const auto lifted = lifted_upper(geom, k, 0.5 * (bands0[1].hi + bands0[2].lo) + geom.interaction.U);
    if (!lifted) {
      o.require(false, "no lifted states at k = " + num(k));
      continue;
    }
    worst = std::max({worst, std::abs(lifted->lo - bands0[2].lo - 2.0), std::abs(lifted->hi - bands0[2].hi - 2.0)});
  }
  o.detail << "max |edge shift - 2g| over 61 k: " << num(worst) << " ";
  o.require(worst <= 0.1, "band edges not lifted by 2g");
}

// 7 ---------------------------------------------------------------------------

void interface_modes(Outcome& o) {
  const auto geom = bloch::StripeGeometry::diagonal(model::CouplingPattern::alternating(1.0, 3.0), {2.0, 6}, 2, 15);
  auto pairs = spectra::hermitian_eig(bloch::build_stripe_bloch(geom, 0.0));
  const auto parities = spectra::parity_classify_all(pairs, geom, 0.0);
  const auto region = spectra::interface_region(geom);
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (std::abs(pairs[i].energy - 1.0) <= 0.5) window.push_back(i);
  o.detail << window.size() << " levels in [0.5, 1.5]:";
  int sym = 0, anti = 0;
  double min_weight = 1.0;
  for (std::size_t i : window) {
    const double w = spectra::localization_weight(pairs[i], region);
    o.detail << " " << num(pairs[i].energy) << "/" << spectra::to_string(parities[i]).substr(0, 1) << "/" << num(w);
    sym += parities[i] == spectra::Parity::Symmetric;
    anti += parities[i] == spectra::Parity::Antisymmetric;
    min_weight = std::min(min_weight, w);
  }
  o.detail << " ";
  o.require(window.size() >= 4, "fewer than 4 levels");
  o.require(sym == 2 && anti == 2, "parity labels");
  o.require(min_weight > 0.8, "interface weight");
  if (window.size() == 4) {
    // Two doublets: intra-pair splittings well below the spacing between pairs.
    const auto e = [&](int j) { return pairs[window[static_cast<std::size_t>(j)]].energy; };
    const double split = std::max(e(1) - e(0), e(3) - e(2));
    const double spacing = e(2) - e(1);
    o.detail << "doublet splitting " << num(split) << " vs spacing " << num(spacing) << " ";
    o.require(split < 0.5 * spacing, "levels do not form doublets");
    o.require(parities[window[0]] != parities[window[1]] && parities[window[2]] != parities[window[3]],
              "each doublet should hold one S and one A");
    // isolated from the rest of the spectrum
    const double below = window.front() > 0 ? e(0) - pairs[window.front() - 1].energy : INFINITY;
    const double above = window.back() + 1 < pairs.size() ? pairs[window.back() + 1].energy - e(3) : INFINITY;
    o.detail << "isolation " << num(std::min(below, above)) << " ";
    o.require(std::min(below, above) > split, "levels not isolated");
  }
}

// 9 ---------------------------------------------------------------------------

void triplon_spectrum(Outcome& o) {
  const auto geom = bloch::StripeGeometry::diagonal(model::CouplingPattern::uniform(1.0), {12.0, 6}, 3, 15);
  const auto pairs = spectra::hermitian_eig(bloch::build_stripe_bloch(geom, 0.0));
  const std::array<double, 4> targets{5.62, 17.84, 28.85, 41.79};
  const std::array<spectra::Category, 4> expected{spectra::Category::Scattering, spectra::Category::DimerMonomer,
                                                  spectra::Category::WeakTriplon, spectra::Category::TightTriplon};
  bool primary = true;
  o.detail << "nearest:";
  for (std::size_t t = 0; t < 4; ++t) {
    const auto it = std::min_element(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.energy - targets[t]) < std::abs(b.energy - targets[t]);
    });
    const auto label = spectra::classify_band_by_region(*it, geom);
    o.detail << " " << num(it->energy) << " " << spectra::to_string(label.category) << " " << num(label.localization)
             << ";";
    primary = primary && std::abs(it->energy - targets[t]) <= 0.05 && label.category == expected[t] &&
              label.localization > 0.8;
  }

  std::vector<double> levels;
  for (const auto& p : pairs) levels.push_back(p.energy);
  const auto clusters = spectra::cluster_levels(levels, 2.0);
  o.detail << " clusters:";
  for (const auto& c : clusters) o.detail << " [" << num(c.lo) << ", " << num(c.hi) << "]x" << c.count;
  o.detail << ";";
  if (primary) {
    o.detail << " primary check met ";
    o.require(clusters.size() == 4, "four clusters");
    return;
  }
  // Fallback: four clusters, each represented by its level of largest
  // dominant-region weight, classified in ascending order.
  o.detail << " primary window missed, fallback:";
  o.require(clusters.size() == 4, "four clusters");
  if (clusters.size() != 4) return;
  std::size_t begin = 0;
  for (std::size_t c = 0; c < 4; ++c) {
    spectra::ModeLabel best;
    double energy = 0.0;
    for (std::size_t i = begin; i < begin + static_cast<std::size_t>(clusters[c].count); ++i) {
      const auto label = spectra::classify_band_by_region(pairs[i], geom);
      if (label.localization > best.localization) {
        best = label;
        energy = pairs[i].energy;
      }
    }
    begin += static_cast<std::size_t>(clusters[c].count);
    o.detail << " " << num(energy) << " " << spectra::to_string(best.category) << " " << num(best.localization) << ";";
    o.require(best.category == expected[c] && best.localization > 0.8, "cluster " + std::to_string(c + 1));
  }
  o.detail << " ";
}

// 11 --------------------------------------------------------------------------

std::map<std::string, std::string> csv_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".csv") {
      std::ifstream in(entry.path(), std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      files[entry.path().filename().string()] = s.str();
    }
  return files;
}

void determinism(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "synthdim_acceptance";
  int files = 0;
  for (const auto& preset : cli::presets()) {
    std::map<std::string, std::string> runs[2];
    for (int pass = 0; pass < 2; ++pass) {
      nlohmann::json j = preset.config;
      const fs::path dir = root / (preset.name + "_" + std::to_string(pass));
      fs::remove_all(dir);
      j["output_dir"] = dir.string();
      std::ostringstream log;
      cli::run(cli::parse_config(j), log);
      runs[pass] = csv_bytes(dir);
    }
    o.require(!runs[0].empty() && runs[0] == runs[1], preset.name);
    files += static_cast<int>(runs[0].size());
  }
  fs::remove_all(root);
  o.detail << cli::presets().size() << " presets, " << files << " CSV files compared ";
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthdim acceptance suite"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--expect-fail", expect_fail, "criteria known to fail; reported but not fatal");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "analytic band identities", 1.0, analytic_bands},
      {2, "separability", 1.0, separability},
      {3, "oracle equivalence", 120.0, oracle_equivalence},
      {4, "edge modes", 10.0, edge_modes},
      {5, "edge dynamics", 60.0, edge_dynamics},
      {6, "band lifting", 30.0, band_lifting},
      {7, "interface modes", 30.0, interface_modes},
      {8, "interface dynamics", 120.0, interface_dynamics},
      {9, "triplon spectrum", 120.0, triplon_spectrum},
      {10, "conservation", 120.0, conservation},
      {11, "determinism", 600.0, determinism},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    budget(o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), c.limit);
    const bool expected_red = std::find(expect_fail.begin(), expect_fail.end(), c.id) != expect_fail.end();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail.str();
    if (!o.pass && expected_red) std::cout << " [known failure]";
    if (o.pass && expected_red) std::cout << " [listed as known failure but passed]";
    std::cout << std::endl;
    if (!o.pass && !expected_red) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
