#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "synthdim/dynamics.hpp"
#include "synthdim/model.hpp"
#include "synthdim/synth.hpp"

// Brute-force second-quantised reference in the bosonic occupation basis.

namespace synthdim::oracle {

using FockState = std::vector<int>;  // occupation per site, site_min first

// All occupation vectors of n bosons on k sites, ascending lexicographic order.
std::vector<FockState> fock_basis(int sites, int n_bosons);

// (k + n - 1 choose n)
double fock_dimension(int sites, int n_bosons);

// Positions multiset (raw site labels, ascending) of an occupation vector.
synth::IndexTuple positions(const FockState& state, int site_min);
FockState occupations(const synth::IndexTuple& tuple, int site_min, int sites);

struct FockHamiltonian {
  model::LatticeSpec lattice;
  int n_bosons = 0;
  std::vector<FockState> basis;
  std::map<FockState, Eigen::Index> index;
  Eigen::SparseMatrix<std::complex<double>> matrix;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
  Eigen::Index find(const FockState& s) const;
};

// (U/2) sum_a sum_b [cell distance <= R] (n_a n_b - delta_ab n_a)
double fock_diagonal(const model::LatticeSpec& spec, const FockState& state);

FockHamiltonian build_fock_hamiltonian(const model::LatticeSpec& spec, int n_bosons, double dimension_cap = 2e5);

Eigen::VectorXd fock_spectrum(const FockHamiltonian& h);

struct FockTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
};

// RK4 for i du/dt = H u + s(t), u(0) = 0. The source drives the occupation
// state of the excitation with weight sqrt(N! / prod xi!) times the envelope.
// Samples every `sample_interval`, matching dynamics::evolve.
FockTrajectory evolve_fock(const FockHamiltonian& h, const model::ExcitationSpec& exc, double t_end, double dt,
                           double sample_interval = 0.1);

// Same, from an initial state and without source.
FockTrajectory evolve_fock(const FockHamiltonian& h, const Eigen::VectorXcd& initial, double t_end, double dt,
                           double sample_interval = 0.1);

// max over samples and canonical tuples of |v_to_u(field) - u_fock|.
double compare_trajectories(const std::vector<synth::AmplitudeField>& synthetic, const std::vector<double>& times,
                            const FockHamiltonian& h, const FockTrajectory& fock);

}  // namespace synthdim::oracle
