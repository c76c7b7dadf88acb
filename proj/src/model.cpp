#include "synthdim/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace synthdim::model {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int floor_mod(int a, int b) { return a - b * floor_div(a, b); }

}  // namespace

CouplingPattern CouplingPattern::uniform(double g) {
  CouplingPattern p;
  p.kind = CouplingKind::Uniform;
  p.g = g;
  return p;
}

CouplingPattern CouplingPattern::alternating(double g1, double g2) {
  CouplingPattern p;
  p.kind = CouplingKind::Alternating;
  p.g = 0.0;
  p.g1 = g1;
  p.g2 = g2;
  return p;
}

double CouplingPattern::bond(int left_site) const {
  if (kind == CouplingKind::Uniform) return g;
  return floor_mod(left_site, 2) == 0 ? g1 : g2;
}

int CouplingPattern::cell_of(int site) const { return floor_div(site, sites_per_cell()); }

void CouplingPattern::validate() const {
  if (kind == CouplingKind::Uniform) {
    if (!std::isfinite(g)) throw std::invalid_argument("coupling g must be finite");
  } else if (!std::isfinite(g1) || !std::isfinite(g2)) {
    throw std::invalid_argument("couplings g1, g2 must be finite");
  }
}

void InteractionSpec::validate() const {
  if (!std::isfinite(U)) throw std::invalid_argument("interaction U must be finite");
  if (R < 0) throw std::invalid_argument("interaction range R must be >= 0");
}

void LatticeSpec::validate() const {
  pattern.validate();
  interaction.validate();
  if (cell_min > cell_max) throw std::invalid_argument("cell_min must not exceed cell_max");
  // A periodic ring needs at least three sites for the two neighbours of a
  // site to be distinct.
  if (boundary == Boundary::Periodic && site_count() < 3)
    throw std::invalid_argument("periodic lattice needs at least 3 sites");
}

int LatticeSpec::wrap(int site) const { return site_min() + floor_mod(site - site_min(), site_count()); }

std::optional<double> coupling_strength(const LatticeSpec& spec, int site_a, int site_b) {
  if (spec.boundary == Boundary::Open) {
    if (std::abs(site_a - site_b) != 1)
      throw std::domain_error("sites " + std::to_string(site_a) + " and " + std::to_string(site_b) +
                              " are not nearest neighbours");
    if (!spec.contains(site_a) || !spec.contains(site_b)) return std::nullopt;
    return spec.pattern.bond(std::min(site_a, site_b));
  }
  const int a = spec.wrap(site_a);
  const int b = spec.wrap(site_b);
  if (spec.wrap(a + 1) == b) return spec.pattern.bond(a);
  if (spec.wrap(b + 1) == a) return spec.pattern.bond(b);
  throw std::domain_error("sites " + std::to_string(site_a) + " and " + std::to_string(site_b) +
                          " are not nearest neighbours");
}

int cell_distance(const LatticeSpec& spec, int site_a, int site_b) {
  int d = std::abs(spec.cell_of(site_a) - spec.cell_of(site_b));
  if (spec.boundary == Boundary::Periodic) {
    const int cells = spec.cell_count();
    d %= cells;
    d = std::min(d, cells - d);
  }
  return d;
}

double pair_potential(const LatticeSpec& spec, int site_a, int site_b) {
  if (!spec.contains(site_a) || !spec.contains(site_b))
    throw std::out_of_range("pair_potential: site outside the lattice window");
  return spec.interaction.pair(cell_distance(spec, site_a, site_b));
}

ExcitationSpec ExcitationSpec::from_sites(std::span<const int> sites, double delta_e, double t0,
                                          double tau2, double eta0) {
  ExcitationSpec e;
  for (int s : sites) ++e.occupancy[s];
  e.delta_e = delta_e;
  e.t0 = t0;
  e.tau2 = tau2;
  e.eta0 = eta0;
  return e;
}

int ExcitationSpec::boson_count() const {
  int n = 0;
  for (const auto& [site, count] : occupancy) n += count;
  return n;
}

double ExcitationSpec::tau() const { return std::sqrt(tau2); }

void ExcitationSpec::validate(const LatticeSpec& spec, int n_bosons) const {
  if (occupancy.empty()) throw std::invalid_argument("excitation has no target sites");
  for (const auto& [site, count] : occupancy) {
    if (count <= 0) throw std::invalid_argument("excitation occupancies must be positive");
    if (!spec.contains(site))
      throw std::invalid_argument("excitation site " + std::to_string(site) + " outside the lattice window");
  }
  if (boson_count() != n_bosons)
    throw std::invalid_argument("excitation occupies " + std::to_string(boson_count()) + " bosons, run has " +
                                std::to_string(n_bosons));
  if (!(tau2 > 0.0) || !std::isfinite(tau2)) throw std::invalid_argument("excitation tau2 must be positive");
  if (!std::isfinite(delta_e) || !std::isfinite(t0) || !std::isfinite(eta0))
    throw std::invalid_argument("excitation parameters must be finite");
}

}  // namespace synthdim::model
