#pragma once

#include <map>
#include <optional>
#include <span>

// Declarative description of the one-dimensional hosting chain: couplings,
// extended Bose-Hubbard interaction, site window and excitation sources.
//
// Raw site labels: for the alternating (SSH) pattern cell k holds C_k at raw
// index 2k and D_k at 2k+1. For the uniform pattern cells and sites coincide.

namespace synthdim::model {

enum class CouplingKind { Uniform, Alternating };
enum class Boundary { Open, Periodic };

struct CouplingPattern {
  CouplingKind kind = CouplingKind::Uniform;
  double g = 1.0;
  double g1 = 0.0;  // intracell, C_k - D_k
  double g2 = 0.0;  // intercell, D_k - C_{k+1}

  static CouplingPattern uniform(double g);
  static CouplingPattern alternating(double g1, double g2);

  int sites_per_cell() const { return kind == CouplingKind::Alternating ? 2 : 1; }

  // Amplitude of the bond (x, x+1) on the infinite chain.
  double bond(int left_site) const;

  // Cell label of a raw site (floor division for negative labels).
  int cell_of(int site) const;

  void validate() const;
};

struct InteractionSpec {
  double U = 0.0;
  int R = 0;

  // Interaction energy of one particle pair separated by `cells` unit cells.
  double pair(int cells) const { return (cells <= R && cells >= -R) ? U : 0.0; }

  void validate() const;
};

struct LatticeSpec {
  CouplingPattern pattern;
  InteractionSpec interaction;
  int cell_min = 0;
  int cell_max = 0;
  Boundary boundary = Boundary::Open;

  void validate() const;

  int cell_count() const { return cell_max - cell_min + 1; }
  int site_min() const { return cell_min * pattern.sites_per_cell(); }
  int site_max() const { return (cell_max + 1) * pattern.sites_per_cell() - 1; }
  int site_count() const { return site_max() - site_min() + 1; }
  bool contains(int site) const { return site >= site_min() && site <= site_max(); }
  int cell_of(int site) const { return pattern.cell_of(site); }

  // Maps any raw label into the window modulo the chain length.
  int wrap(int site) const;
};

// Hopping amplitude between two neighbouring raw sites. Returns nullopt when
// the bond would cross an open boundary; throws std::domain_error when the
// sites are not nearest neighbours.
std::optional<double> coupling_strength(const LatticeSpec& spec, int site_a, int site_b);

// Unit-cell separation; minimum image under periodic boundaries.
int cell_distance(const LatticeSpec& spec, int site_a, int site_b);

// U when the two sites are within R unit cells, else 0. Both sites must lie
// inside the window (std::out_of_range otherwise).
double pair_potential(const LatticeSpec& spec, int site_a, int site_b);

struct ExcitationSpec {
  std::map<int, int> occupancy;  // raw site -> boson count
  double delta_e = 0.0;
  double t0 = 10.0;
  double tau2 = 10.0;
  double eta0 = 1.0;

  // Builds the occupancy from a site multiset, e.g. {0, 31} or {0, 0}.
  static ExcitationSpec from_sites(std::span<const int> sites, double delta_e, double t0 = 10.0,
                                   double tau2 = 10.0, double eta0 = 1.0);

  int boson_count() const;
  double tau() const;
  void validate(const LatticeSpec& spec, int n_bosons) const;
};

}  // namespace synthdim::model
