#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "synthdim/model.hpp"

// The 1D -> N-D mapping. N bosons on the chain become one particle on the
// N-fold product of the site window; the wavefunction v(l_1..l_N) lives on
// that grid and stays exchange symmetric.

namespace synthdim::synth {

using Complex = std::complex<double>;
using IndexTuple = std::vector<int>;  // raw site labels, one per boson

bool is_canonical(const IndexTuple& tuple);
IndexTuple canonical(IndexTuple tuple);

// Occupation counts xi_i of the distinct sites of a tuple, in ascending site order.
std::vector<int> multiplicities(const IndexTuple& tuple);

// Number of distinct orderings of the tuple, N! / prod xi_i!.
double permutation_count(const IndexTuple& tuple);

// Row-major N-fold product of the raw-site range [site_min, site_min + extent).
class GridShape {
 public:
  GridShape() = default;
  GridShape(int n, int site_min, int extent);

  int n() const { return n_; }
  int site_min() const { return site_min_; }
  int site_max() const { return site_min_ + extent_ - 1; }
  int extent() const { return extent_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  bool contains(std::span<const int> tuple) const;
  std::size_t flat(std::span<const int> tuple) const;
  IndexTuple tuple(std::size_t flat) const;

  bool operator==(const GridShape&) const = default;

 private:
  int n_ = 0;
  int site_min_ = 0;
  int extent_ = 0;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;
};

// Calls fn(tuple) for every sorted tuple of the grid in lexicographic order.
template <class Fn>
void for_each_canonical(const GridShape& shape, Fn&& fn) {
  const int n = shape.n();
  IndexTuple t(static_cast<std::size_t>(n), shape.site_min());
  if (n == 0) return;
  while (true) {
    fn(static_cast<const IndexTuple&>(t));
    int axis = n - 1;
    while (axis >= 0 && t[static_cast<std::size_t>(axis)] == shape.site_max()) --axis;
    if (axis < 0) return;
    const int next = t[static_cast<std::size_t>(axis)] + 1;
    for (int i = axis; i < n; ++i) t[static_cast<std::size_t>(i)] = next;
  }
}

struct AmplitudeField {
  GridShape shape;
  std::vector<Complex> data;
  double time = 0.0;

  AmplitudeField() = default;
  explicit AmplitudeField(const GridShape& s) : shape(s), data(s.size()) {}

  Complex at(std::span<const int> tuple) const { return data[shape.flat(tuple)]; }
  Complex& at(std::span<const int> tuple) { return data[shape.flat(tuple)]; }
  double norm_squared() const;
};

struct Hop {
  std::size_t row;
  std::size_t col;
  double amplitude;
};

// Sparse real symmetric operator on the full N-D grid: nearest-neighbour
// hops along each axis plus the interaction potential on the diagonal.
class SyntheticOperator {
 public:
  SyntheticOperator() = default;
  SyntheticOperator(model::LatticeSpec lattice, GridShape shape, std::vector<Hop> hops,
                    std::vector<double> diag);

  const model::LatticeSpec& lattice() const { return lattice_; }
  const GridShape& shape() const { return shape_; }
  std::size_t dim() const { return shape_.size(); }
  const std::vector<Hop>& hops() const { return hops_; }
  const std::vector<double>& diag() const { return diag_; }

  // out = H in
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  // max_r (|diag_r| + sum_c |H_rc|); Gershgorin bound on the spectral radius.
  double infinity_norm() const;

  // Every hop has a bit-identical transposed partner.
  bool is_hermitian() const;

  Eigen::MatrixXd dense() const;

 private:
  model::LatticeSpec lattice_;
  GridShape shape_;
  std::vector<Hop> hops_;  // sorted by (row, col)
  std::vector<std::size_t> row_begin_;
  std::vector<double> diag_;
};

SyntheticOperator build_synthetic_operator(const model::LatticeSpec& spec, int n_bosons);

GridShape grid_for(const model::LatticeSpec& spec, int n_bosons);

// U times the number of unordered particle pairs within R unit cells.
double onsite_potential(const model::LatticeSpec& spec, const IndexTuple& tuple);

// Fock amplitude of the occupation pattern named by a canonical tuple:
// u = sqrt(N! / prod xi_i!) v.
Complex v_to_u(const AmplitudeField& field, const IndexTuple& tuple);

// Averages every grid value over the permutations of its tuple.
AmplitudeField symmetrize(const GridShape& shape, std::span<const Complex> raw);

double correlation(const AmplitudeField& field, const IndexTuple& tuple);

struct BosonNumbers {
  std::vector<double> counts;  // indexed by raw site - site_min
  double norm_squared = 0.0;
};

// Average occupation of every chain site, N_k = sum_T occ_k(T) |u_T|^2.
BosonNumbers boson_number_distribution(const AmplitudeField& field);

// max |v(t) - v(t')| over tuples t' differing from t by a transposition of
// neighbouring axes.
double exchange_asymmetry(const AmplitudeField& field);

// Probability-weighted mean unit-cell distance over all particle pairs,
// normalised by the field norm.
double mean_pair_cell_distance(const AmplitudeField& field, const model::LatticeSpec& spec);

// The operator restricted to the exchange-symmetric subspace, written in the
// orthonormal basis of symmetrised canonical tuples (lexicographic order).
Eigen::MatrixXd symmetric_sector_matrix(const SyntheticOperator& op);

std::vector<IndexTuple> canonical_tuples(const GridShape& shape);

}  // namespace synthdim::synth
