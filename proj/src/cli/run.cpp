#include <cmath>
#include <fstream>

#include "synthdim/cli.hpp"
#include "synthdim/dynamics.hpp"
#include "synthdim/eig.hpp"
#include "synthdim/oracle.hpp"
#include "synthdim/spectra.hpp"
#include "synthdim/synth.hpp"

namespace synthdim::cli {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

void write_meta(const RunConfig& c, json extra) {
  json meta = {{"tool", "synthdim"}, {"version", kVersion}, {"mode", to_string(c.mode)}, {"config", c.source}};
  for (auto& [key, value] : extra.items()) meta[key] = value;
  std::ofstream out(c.output_dir / "meta.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write meta.json");
  out << meta.dump(2) << '\n';
}

void run_bands(const RunConfig& c, std::ostream& log) {
  if (c.lattice.interaction.U != 0.0) throw ConfigError("bands mode is non-interacting; set lattice.interaction.U to 0");
  const int n = c.n_bosons;
  const std::vector<double> ks = bloch::uniform_k_grid(c.k_count);
  std::vector<std::string> header;
  for (int i = 1; i <= n; ++i) header.push_back("k_" + std::to_string(i));
  header.insert(header.end(), {"band_index", "energy"});
  CsvWriter csv(c.output_dir / "bulk_bands.csv", header);

  long points = 1;
  for (int i = 0; i < n; ++i) points *= c.k_count;
  std::vector<double> k(static_cast<std::size_t>(n));
  double lo = INFINITY, hi = -INFINITY;
  for (long p = 0; p < points; ++p) {
    for (int i = n - 1, rest = static_cast<int>(p); i >= 0; --i, rest /= c.k_count)
      k[static_cast<std::size_t>(i)] = ks[static_cast<std::size_t>(rest % c.k_count)];
    const Eigen::VectorXd e = spectra::hermitian_eigenvalues(bloch::build_bulk_bloch(c.lattice.pattern, n, k));
    for (Eigen::Index b = 0; b < e.size(); ++b) {
      for (double ki : k) csv.cell(ki);
      csv.cell(static_cast<long>(b)).cell(e(b));
      csv.end_row();
      lo = std::min(lo, e(b));
      hi = std::max(hi, e(b));
    }
  }
  log << "bulk bands: " << points << " k-points, energies in [" << format_number(lo) << ", " << format_number(hi)
      << "]\n";
  write_meta(c, {{"k_points", points}, {"energy_min", lo}, {"energy_max", hi}});
}

void write_bands(const RunConfig& c, const bloch::BandStructure& bands) {
  CsvWriter csv(c.output_dir / "bands.csv", {"k_j", "band_index", "energy"});
  for (int k = 0; k < bands.k_count(); ++k)
    for (int b = 0; b < bands.band_count(); ++b) {
      csv.cell(bands.k_grid[static_cast<std::size_t>(k)]).cell(b).cell(bands.energies(k, b));
      csv.end_row();
    }
}

void run_stripe(const RunConfig& c, std::ostream& log) {
  const bloch::StripeGeometry& geom = *c.geometry;
  const bool classify = c.mode == Mode::Classify;
  if (classify && geom.n_bosons != 3) throw ConfigError("classify mode needs n_bosons = 3");
  const bloch::BandStructure bands = bloch::projected_bands(geom, c.k_count, {true, c.threads});
  write_bands(c, bands);

  const bool with_parity = geom.n_bosons == 2 && geom.is_diagonal() && geom.transverse_min == -geom.transverse_max;
  CsvWriter modes(c.output_dir / "modes.csv", {"k_j", "band", "category", "parity", "localization"});
  std::map<std::string, long> counts;
  for (int k = 0; k < bands.k_count(); ++k) {
    const double kj = bands.k_grid[static_cast<std::size_t>(k)];
    std::vector<spectra::EigenPair> pairs(static_cast<std::size_t>(bands.band_count()));
    for (int b = 0; b < bands.band_count(); ++b)
      pairs[static_cast<std::size_t>(b)] = {bands.energies(k, b), bands.eigvecs[static_cast<std::size_t>(k)].col(b)};
    std::vector<spectra::Parity> parities;
    if (with_parity) parities = spectra::parity_classify_all(pairs, geom, kj);
    for (int b = 0; b < bands.band_count(); ++b) {
      const spectra::EigenPair& pair = pairs[static_cast<std::size_t>(b)];
      const spectra::ModeLabel label =
          classify ? spectra::classify_band_by_region(pair, geom) : spectra::classify_localization(pair, geom);
      const std::string cat = spectra::to_string(label.category);
      ++counts[cat];
      modes.cell(kj).cell(b).cell(cat);
      modes.cell(with_parity ? spectra::to_string(parities[static_cast<std::size_t>(b)]) : std::string());
      modes.cell(label.localization);
      modes.end_row();
    }
  }

  json extra = {{"k_count", bands.k_count()}, {"band_count", bands.band_count()}, {"categories", counts}};
  if (!classify && geom.interaction.U == 0.0) {
    const bloch::BandStructure bulk = bloch::projected_bulk_bands(geom, bands.k_grid, c.bulk_samples);
    const auto gap = spectra::detect_gap_modes(bands, bulk);
    CsvWriter csv(c.output_dir / "gap_modes.csv", {"k_j", "band_index", "energy"});
    for (const spectra::GapMode& m : gap) {
      csv.cell(bands.k_grid[static_cast<std::size_t>(m.k_index)]).cell(m.band_index);
      csv.cell(bands.energies(m.k_index, m.band_index));
      csv.end_row();
    }
    extra["gap_modes"] = gap.size();
    log << "in-gap modes: " << gap.size() << "\n";
  }
  log << "projected bands: " << bands.k_count() << " k-points x " << bands.band_count() << " bands\n";
  write_meta(c, extra);
}

void run_evolve(const RunConfig& c, std::ostream& log) {
  const synth::SyntheticOperator op = synth::build_synthetic_operator(c.lattice, c.n_bosons);
  dynamics::EvolveOptions opt;
  opt.sample_interval = c.sample_interval;
  opt.snapshot_times = c.snapshot_times;
  opt.max_step_norm = c.max_step_norm;
  const dynamics::EvolutionResult res =
      dynamics::evolve(op, dynamics::SourceTerm::from_excitation(*c.excitation), c.t_end, c.dt, opt);

  CsvWriter evo(c.output_dir / "evolution.csv", {"t", "site", "N_k"});
  for (std::size_t i = 0; i < res.times.size(); ++i)
    for (std::size_t s = 0; s < res.boson_numbers[i].size(); ++s) {
      evo.cell(res.times[i]).cell(res.site_min + static_cast<long>(s)).cell(res.boson_numbers[i][s]);
      evo.end_row();
    }
  CsvWriter obs(c.output_dir / "observables.csv", {"t", "norm", "energy", "pair_cell_distance"});
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    obs.cell(res.times[i]).cell(res.final_norm > 0 ? res.norms[i] / res.final_norm : 0.0);
    obs.cell(res.energies[i]).cell(res.pair_distance[i]);
    obs.end_row();
  }
  for (const dynamics::Snapshot& snap : res.snapshots) {
    std::vector<std::string> header;
    for (int i = 1; i <= c.n_bosons; ++i) header.push_back("l_" + std::to_string(i));
    header.push_back("probability");
    CsvWriter csv(c.output_dir / ("snapshot_" + format_number(snap.time) + ".csv"), header);
    for (const auto& [tuple, p] : snap.probabilities) {
      for (int x : tuple) csv.cell(x);
      csv.cell(p);
      csv.end_row();
    }
  }
  log << "evolved " << res.times.size() << " samples; final norm " << format_number(res.final_norm) << "\n";
  write_meta(c, {{"norms", {{"before_normalization", res.final_norm}, {"after_normalization", res.final_norm > 0 ? 1.0 : 0.0}}},
                 {"norm_drift_rate", res.norm_drift_rate},
                 {"energy_drift_rate", res.energy_drift_rate},
                 {"max_symmetry_violation", res.max_symmetry_violation},
                 {"max_count_defect", res.max_count_defect}});
}

void run_oracle(const RunConfig& c, std::ostream& log) {
  const synth::SyntheticOperator op = synth::build_synthetic_operator(c.lattice, c.n_bosons);
  const oracle::FockHamiltonian fock = oracle::build_fock_hamiltonian(c.lattice, c.n_bosons);
  const Eigen::VectorXd a = oracle::fock_spectrum(fock);
  const Eigen::VectorXd b = spectra::hermitian_eigenvalues(synth::symmetric_sector_matrix(op).cast<std::complex<double>>());
  const double spectrum_dev = (a - b).cwiseAbs().maxCoeff();

  dynamics::EvolveOptions opt;
  opt.sample_interval = c.sample_interval;
  opt.max_step_norm = c.max_step_norm;
  opt.keep_fields = true;
  const dynamics::EvolutionResult res =
      dynamics::evolve(op, dynamics::SourceTerm::from_excitation(*c.excitation), c.t_end, c.dt, opt);
  const oracle::FockTrajectory traj = oracle::evolve_fock(fock, *c.excitation, c.t_end, c.dt, c.sample_interval);
  const double traj_dev = oracle::compare_trajectories(res.fields, res.times, fock, traj);

  log << "spectrum deviation " << format_number(spectrum_dev) << ", trajectory deviation " << format_number(traj_dev)
      << "\n";
  const bool ok = spectrum_dev < 1e-9 && traj_dev < 1e-7;
  write_meta(c, {{"fock_dimension", fock.dim()},
                 {"spectrum_deviation", spectrum_dev},
                 {"trajectory_deviation", traj_dev},
                 {"passed", ok}});
  if (!ok) throw spectra::NumericalError("oracle mismatch");
}

}  // namespace

void run(const RunConfig& c, std::ostream& log) {
  fs::create_directories(c.output_dir);
  switch (c.mode) {
    case Mode::Bands: run_bands(c, log); break;
    case Mode::Stripe:
    case Mode::Classify: run_stripe(c, log); break;
    case Mode::Evolve: run_evolve(c, log); break;
    case Mode::OracleCheck: run_oracle(c, log); break;
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e))
    return 2;
  if (dynamic_cast<const spectra::NumericalError*>(&e)) return 3;
  return 1;
}

}  // namespace synthdim::cli
