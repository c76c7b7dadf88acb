#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synthdim/bloch.hpp"
#include "synthdim/eig.hpp"

namespace synthdim::spectra {

enum class Category { Bulk, Edge, Interface, Scattering, DimerMonomer, WeakTriplon, TightTriplon };
enum class Parity { Symmetric, Antisymmetric, Mixed };

std::string to_string(Category c);
std::string to_string(Parity p);

struct ModeLabel {
  Category category = Category::Bulk;
  std::optional<Parity> parity;
  double localization = 0.0;
};

// Sum of |v|^2 over the listed supercell sites.
double localization_weight(const EigenPair& pair, const std::vector<std::size_t>& region);

// Supercell sites whose transverse coordinates satisfy pred.
template <class Pred>
std::vector<std::size_t> region_where(const std::vector<bloch::SupercellSite>& sites, Pred&& pred) {
  std::vector<std::size_t> region;
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (pred(sites[i].transverse)) region.push_back(i);
  return region;
}

// Sites within `shell` cells of either transverse boundary.
std::vector<std::size_t> edge_region(const bloch::StripeGeometry& geom, int shell = 2);

// Sites with ||l| - R| <= shell for some transverse coordinate l.
std::vector<std::size_t> interface_region(const bloch::StripeGeometry& geom, int shell = 2);

struct GapMode {
  int k_index;
  int band_index;
};

// Eigenvalues lying outside every bulk interval at the same k by more than
// `margin`. Bulk intervals are formed by merging sorted bulk energies whose
// spacing is at most `merge_gap`.
std::vector<GapMode> detect_gap_modes(const bloch::BandStructure& bands, const bloch::BandStructure& bulk,
                                      double margin = 0.02, double merge_gap = 0.1);

// Reflection exchanging particles 0 and 1, as a matrix on supercell sites at
// quasi-momentum k_j. Requires a diagonal stripe with a symmetric window.
Eigen::MatrixXcd reflection_operator(const bloch::StripeGeometry& geom, double k_j);

Parity parity_of(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& reflection, double tol = 1e-6);

Parity parity_classify(const EigenPair& pair, const bloch::StripeGeometry& geom, double k_j = 0.0);

// Parities for a full ascending eigenpair list. Groups closer than
// `degeneracy_tol` in energy are first rotated into reflection eigenvectors;
// the rotated vectors replace the originals in `pairs`.
std::vector<Parity> parity_classify_all(std::vector<EigenPair>& pairs, const bloch::StripeGeometry& geom,
                                        double k_j = 0.0, double degeneracy_tol = 1e-8);

// Four-way region count of the three pair distances.
Category triplon_region(int l1, int l2, int R);

// Weight per triplon category, indexed Scattering..TightTriplon.
std::array<double, 4> triplon_weights(const EigenPair& pair, const bloch::StripeGeometry& geom);

ModeLabel classify_band_by_region(const EigenPair& pair, const bloch::StripeGeometry& geom);

// Edge / Interface / Bulk label of a two-boson stripe eigenstate using the
// 0.9 weight threshold on 2-cell shells.
ModeLabel classify_localization(const EigenPair& pair, const bloch::StripeGeometry& geom, double threshold = 0.9);

struct Cluster {
  double lo;
  double hi;
  int count;
};

// Splits ascending levels wherever neighbours are more than `gap` apart.
std::vector<Cluster> cluster_levels(std::vector<double> levels, double gap);

}  // namespace synthdim::spectra
