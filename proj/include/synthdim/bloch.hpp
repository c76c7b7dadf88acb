#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "synthdim/model.hpp"
#include "synthdim/synth.hpp"

namespace synthdim::bloch {

// 2g sum_i cos k_i
double analytic_band_tb(std::span<const double> k, double g);

// The two 1D SSH energies -E(k), +E(k) with E = sqrt(g1^2 + g2^2 + 2 g1 g2 cos k).
std::array<double, 2> ssh_band_1d(double k, double g1, double g2);

// All four sign combinations of the two 1D SSH roots, ascending.
std::array<double, 4> analytic_band_ssh2d(double k_m, double k_n, double g1, double g2);

// Quasi-1D Bloch problem: the infinite N-boson synthetic lattice with
// translation symmetry along `translation` (unit-cell coordinates) and a
// finite window along the remaining directions.
//
// One component of the translation, the anchor, must equal 1. Supercell
// sites are tuples whose anchor particle sits in cell 0; the other N-1 cell
// coordinates are the transverse coordinates. For the diagonal (1,..,1)
// translation these are the pair offsets l = c_n - c_m (and p - m).
struct StripeGeometry {
  model::CouplingPattern pattern;
  model::InteractionSpec interaction;
  int n_bosons = 2;
  std::vector<int> translation;
  int transverse_min = -15;
  int transverse_max = 15;
  // Wrap transverse coordinates modulo the window width instead of dropping
  // hops that leave it. Only meaningful for U = 0.
  bool transverse_periodic = false;

  static StripeGeometry diagonal(model::CouplingPattern pattern, model::InteractionSpec interaction, int n_bosons,
                                 int half_width);
  static StripeGeometry axis(model::CouplingPattern pattern, model::InteractionSpec interaction, int n_bosons,
                             int axis, int half_width);

  void validate() const;
  int anchor() const;
  int sites_per_cell() const { return pattern.sites_per_cell(); }
  int sublattice_count() const;
  bool is_diagonal() const;
  int transverse_width() const { return transverse_max - transverse_min + 1; }
};

struct SupercellSite {
  std::vector<int> transverse;  // cell coordinates of the non-anchor particles
  synth::IndexTuple tuple;      // representative raw-site tuple
};

// Ordered by transverse coordinates (row-major), then sublattice tuple.
std::vector<SupercellSite> supercell_sites(const StripeGeometry& geom);

// Index of a representative tuple in supercell_sites order, or -1 when its
// transverse coordinates leave the window.
long supercell_index(const StripeGeometry& geom, const synth::IndexTuple& rep);

// Splits an arbitrary tuple into q translations plus a representative.
struct Decomposition {
  int q = 0;
  synth::IndexTuple rep;
};
Decomposition decompose(const StripeGeometry& geom, const synth::IndexTuple& tuple);

// Bloch matrix at quasi-momentum k_j along the translation.
Eigen::MatrixXcd build_stripe_bloch(const StripeGeometry& geom, double k_j);

// Bloch matrix of the non-interacting infinite lattice at wave vector k
// (one component per boson); size sublattice^N.
Eigen::MatrixXcd build_bulk_bloch(const model::CouplingPattern& pattern, int n_bosons, std::span<const double> k);

struct BandStructure {
  std::vector<double> k_grid;
  Eigen::MatrixXd energies;                // k-point x band, ascending per row
  std::vector<Eigen::MatrixXcd> eigvecs;   // per k-point, one column per band; empty unless requested

  int k_count() const { return static_cast<int>(k_grid.size()); }
  int band_count() const { return static_cast<int>(energies.cols()); }
};

// count points from -pi to pi inclusive.
std::vector<double> uniform_k_grid(int count);

struct SweepOptions {
  bool keep_vectors = false;
  int threads = 1;
};

BandStructure projected_bands(const StripeGeometry& geom, int k_count, const SweepOptions& options = {});
BandStructure projected_bands(const StripeGeometry& geom, const std::vector<double>& k_grid,
                              const SweepOptions& options = {});

// Bulk energies seen by the stripe at each k_j: the non-interacting bulk
// Bloch spectrum sampled over the transverse momenta on the plane
// sum_i T_i k_i = k_j. Each row holds band_count * samples values, ascending.
BandStructure projected_bulk_bands(const StripeGeometry& geom, const std::vector<double>& k_grid,
                                   int samples_per_axis = 201);

}  // namespace synthdim::bloch
