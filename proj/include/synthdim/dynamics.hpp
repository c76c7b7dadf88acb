#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "synthdim/model.hpp"
#include "synthdim/synth.hpp"

namespace synthdim::dynamics {

using Complex = std::complex<double>;

// eta0 exp(-(t - t0)^2 / tau^2) exp(-i delta_e t)
Complex source_envelope(const model::ExcitationSpec& exc, double t);

struct SourceTerm {
  model::ExcitationSpec excitation;
  std::vector<synth::IndexTuple> target_tuples;  // every ordering of the excited multiset

  static SourceTerm from_excitation(const model::ExcitationSpec& exc);
  synth::IndexTuple canonical_tuple() const;
};

struct Rk4Workspace {
  Eigen::VectorXcd k1, k2, k3, k4, tmp;
};

// One classical RK4 step of dv/dt = f(t, v); f(t, in, out) writes out.
template <class Deriv>
void rk4_step(Eigen::VectorXcd& v, double t, double dt, Deriv&& f, Rk4Workspace& w) {
  const Eigen::Index n = v.size();
  for (Eigen::VectorXcd* k : {&w.k1, &w.k2, &w.k3, &w.k4, &w.tmp})
    if (k->size() != n) k->resize(n);
  f(t, v, w.k1);
  w.tmp = v + (0.5 * dt) * w.k1;
  f(t + 0.5 * dt, w.tmp, w.k2);
  w.tmp = v + (0.5 * dt) * w.k2;
  f(t + 0.5 * dt, w.tmp, w.k3);
  w.tmp = v + dt * w.k3;
  f(t + dt, w.tmp, w.k4);
  v += (dt / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

// Number of fixed steps covering [0, t_end]; t_end must be a multiple of dt.
long step_count(double t_end, double dt);

struct EvolveOptions {
  double sample_interval = 0.1;
  std::vector<double> snapshot_times;
  // Stability bound: dt * |H|_inf must not exceed this.
  double max_step_norm = 0.1;
  // Keep the raw field at every sample (used by the oracle comparison).
  bool keep_fields = false;
};

struct Snapshot {
  double time = 0.0;
  std::vector<std::pair<synth::IndexTuple, double>> probabilities;  // canonical tuples, normalised
};

struct EvolutionResult {
  int site_min = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> boson_numbers;  // normalised by the final norm
  std::vector<double> norms;                       // raw field norm at each sample
  std::vector<double> energies;                    // <v|H|v> / <v|v>
  std::vector<double> pair_distance;               // mean pair cell distance
  std::vector<Snapshot> snapshots;
  std::vector<synth::AmplitudeField> fields;       // raw, only with keep_fields
  double final_norm = 0.0;
  // Measured over samples with t >= t0 + 5 tau.
  double norm_drift_rate = 0.0;    // relative, per unit time
  double energy_drift_rate = 0.0;  // absolute, per unit time
  double max_symmetry_violation = 0.0;  // relative to the largest amplitude
  double max_count_defect = 0.0;        // |sum_k N_k - N |v|^2| / (N |v|^2), raw
};

// Integrates i dv/dt = H v + s(t) from v(0) = 0 with fixed-step RK4.
EvolutionResult evolve(const synth::SyntheticOperator& op, const SourceTerm& source, double t_end, double dt,
                       const EvolveOptions& options = {});

// |u_T|^2 for every canonical tuple T, lexicographic.
std::vector<std::pair<synth::IndexTuple, double>> excitation_probability_map(const synth::AmplitudeField& field);

struct InterfaceScenario {
  model::LatticeSpec lattice;
  model::ExcitationSpec excitation;
  double t_end = 50.0;
  double dt = 0.01;
};

// The four two-boson interface runs 'a'..'d' on the 31-cell SSH chain.
InterfaceScenario interface_scenario(char which);

EvolutionResult run_interface_experiment(char which, const EvolveOptions& options = {});

}  // namespace synthdim::dynamics
