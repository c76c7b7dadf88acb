#include "synthdim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace synthdim::spectra {

std::string to_string(Category c) {
  switch (c) {
    case Category::Bulk: return "Bulk";
    case Category::Edge: return "Edge";
    case Category::Interface: return "Interface";
    case Category::Scattering: return "Scattering";
    case Category::DimerMonomer: return "DimerMonomer";
    case Category::WeakTriplon: return "WeakTriplon";
    case Category::TightTriplon: return "TightTriplon";
  }
  return "Bulk";
}

std::string to_string(Parity p) {
  switch (p) {
    case Parity::Symmetric: return "Symmetric";
    case Parity::Antisymmetric: return "Antisymmetric";
    case Parity::Mixed: return "Mixed";
  }
  return "Mixed";
}

double localization_weight(const EigenPair& pair, const std::vector<std::size_t>& region) {
  if (region.empty()) throw std::invalid_argument("localization region is empty");
  double w = 0.0;
  for (std::size_t i : region) {
    if (i >= static_cast<std::size_t>(pair.vector.size())) throw std::out_of_range("region site outside the vector");
    w += std::norm(pair.vector(static_cast<Eigen::Index>(i)));
  }
  return w;
}

std::vector<std::size_t> edge_region(const bloch::StripeGeometry& geom, int shell) {
  return region_where(bloch::supercell_sites(geom), [&](const std::vector<int>& tr) {
    return std::any_of(tr.begin(), tr.end(), [&](int l) {
      return l <= geom.transverse_min + shell || l >= geom.transverse_max - shell;
    });
  });
}

std::vector<std::size_t> interface_region(const bloch::StripeGeometry& geom, int shell) {
  const int R = geom.interaction.R;
  return region_where(bloch::supercell_sites(geom), [&](const std::vector<int>& tr) {
    return std::any_of(tr.begin(), tr.end(), [&](int l) { return std::abs(std::abs(l) - R) <= shell; });
  });
}

namespace {

struct Interval {
  double lo;
  double hi;
};

std::vector<Interval> merge_levels(const Eigen::VectorXd& row, double merge_gap) {
  std::vector<double> v(row.data(), row.data() + row.size());
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (double e : v) {
    if (out.empty() || e - out.back().hi > merge_gap)
      out.push_back({e, e});
    else
      out.back().hi = e;
  }
  return out;
}

}  // namespace

std::vector<GapMode> detect_gap_modes(const bloch::BandStructure& bands, const bloch::BandStructure& bulk,
                                      double margin, double merge_gap) {
  if (bands.k_grid.size() != bulk.k_grid.size()) throw std::invalid_argument("band structures use different k grids");
  for (std::size_t i = 0; i < bands.k_grid.size(); ++i)
    if (std::abs(bands.k_grid[i] - bulk.k_grid[i]) > 1e-12)
      throw std::invalid_argument("band structures use different k grids");

  std::vector<GapMode> out;
  for (int k = 0; k < bands.k_count(); ++k) {
    const std::vector<Interval> intervals = merge_levels(bulk.energies.row(k).transpose(), merge_gap);
    for (int b = 0; b < bands.band_count(); ++b) {
      const double e = bands.energies(k, b);
      const bool inside = std::any_of(intervals.begin(), intervals.end(), [&](const Interval& iv) {
        return e >= iv.lo - margin && e <= iv.hi + margin;
      });
      if (!inside) out.push_back({k, b});
    }
  }
  return out;
}

Eigen::MatrixXcd reflection_operator(const bloch::StripeGeometry& geom, double k_j) {
  geom.validate();
  if (geom.n_bosons < 2) throw std::invalid_argument("reflection needs at least two bosons");
  if (!geom.is_diagonal()) throw std::invalid_argument("reflection needs a diagonal stripe");
  if (geom.transverse_min != -geom.transverse_max) throw std::invalid_argument("transverse window is not symmetric");

  const std::vector<bloch::SupercellSite> sites = bloch::supercell_sites(geom);
  const auto dim = static_cast<Eigen::Index>(sites.size());
  const std::size_t a = static_cast<std::size_t>(geom.n_bosons - 2);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index row = 0; row < dim; ++row) {
    synth::IndexTuple t = sites[static_cast<std::size_t>(row)].tuple;
    std::swap(t[a], t[a + 1]);
    const bloch::Decomposition d = bloch::decompose(geom, t);
    const long col = bloch::supercell_index(geom, d.rep);
    if (col < 0) throw std::invalid_argument("window is not closed under the particle exchange");
    p(row, static_cast<Eigen::Index>(col)) = std::polar(1.0, d.q * k_j);
  }
  return p;
}

Parity parity_of(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& reflection, double tol) {
  const Eigen::VectorXcd pv = reflection * v;
  if ((v - pv).norm() < tol) return Parity::Symmetric;
  if ((v + pv).norm() < tol) return Parity::Antisymmetric;
  return Parity::Mixed;
}

Parity parity_classify(const EigenPair& pair, const bloch::StripeGeometry& geom, double k_j) {
  return parity_of(pair.vector, reflection_operator(geom, k_j));
}

std::vector<Parity> parity_classify_all(std::vector<EigenPair>& pairs, const bloch::StripeGeometry& geom,
                                        double k_j, double degeneracy_tol) {
  const Eigen::MatrixXcd p = reflection_operator(geom, k_j);
  std::vector<Parity> out(pairs.size());
  std::size_t begin = 0;
  while (begin < pairs.size()) {
    std::size_t end = begin + 1;
    while (end < pairs.size() && pairs[end].energy - pairs[end - 1].energy <= degeneracy_tol) ++end;
    const auto m = static_cast<Eigen::Index>(end - begin);
    if (m > 1) {
      Eigen::MatrixXcd v(p.rows(), m);
      for (Eigen::Index i = 0; i < m; ++i) v.col(i) = pairs[begin + static_cast<std::size_t>(i)].vector;
      Eigen::MatrixXcd block = v.adjoint() * p * v;
      block = 0.5 * (block + block.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);
      const Eigen::MatrixXcd rotated = v * solver.eigenvectors();
      for (Eigen::Index i = 0; i < m; ++i) pairs[begin + static_cast<std::size_t>(i)].vector = rotated.col(i);
    }
    for (std::size_t i = begin; i < end; ++i) out[i] = parity_of(pairs[i].vector, p);
    begin = end;
  }
  return out;
}

Category triplon_region(int l1, int l2, int R) {
  const int c = (std::abs(l1) <= R) + (std::abs(l2) <= R) + (std::abs(l1 - l2) <= R);
  switch (c) {
    case 0: return Category::Scattering;
    case 1: return Category::DimerMonomer;
    case 2: return Category::WeakTriplon;
    default: return Category::TightTriplon;
  }
}

std::array<double, 4> triplon_weights(const EigenPair& pair, const bloch::StripeGeometry& geom) {
  if (geom.n_bosons != 3) throw std::invalid_argument("triplon regions need a three-boson stripe");
  const std::vector<bloch::SupercellSite> sites = bloch::supercell_sites(geom);
  if (static_cast<std::size_t>(pair.vector.size()) != sites.size())
    throw std::invalid_argument("eigenvector does not match the stripe");
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Category c = triplon_region(sites[i].transverse[0], sites[i].transverse[1], geom.interaction.R);
    w[static_cast<std::size_t>(c) - static_cast<std::size_t>(Category::Scattering)] +=
        std::norm(pair.vector(static_cast<Eigen::Index>(i)));
  }
  return w;
}

ModeLabel classify_band_by_region(const EigenPair& pair, const bloch::StripeGeometry& geom) {
  const std::array<double, 4> w = triplon_weights(pair, geom);
  const auto best = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
  ModeLabel label;
  label.category = static_cast<Category>(static_cast<std::size_t>(Category::Scattering) + best);
  label.localization = w[best];
  return label;
}

ModeLabel classify_localization(const EigenPair& pair, const bloch::StripeGeometry& geom, double threshold) {
  ModeLabel label;
  const double edge = localization_weight(pair, edge_region(geom));
  double interface = 0.0;
  if (geom.interaction.U != 0.0 && geom.is_diagonal()) interface = localization_weight(pair, interface_region(geom));
  if (edge > threshold) {
    label.category = Category::Edge;
    label.localization = edge;
  } else if (interface > threshold) {
    label.category = Category::Interface;
    label.localization = interface;
  } else {
    label.category = Category::Bulk;
    label.localization = std::max(edge, interface);
  }
  return label;
}

std::vector<Cluster> cluster_levels(std::vector<double> levels, double gap) {
  std::sort(levels.begin(), levels.end());
  std::vector<Cluster> out;
  for (double e : levels) {
    if (out.empty() || e - out.back().hi > gap)
      out.push_back({e, e, 1});
    else {
      out.back().hi = e;
      ++out.back().count;
    }
  }
  return out;
}

}  // namespace synthdim::spectra
