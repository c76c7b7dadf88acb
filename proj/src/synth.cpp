#include "synthdim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace synthdim::synth {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

bool is_canonical(const IndexTuple& tuple) { return std::is_sorted(tuple.begin(), tuple.end()); }

IndexTuple canonical(IndexTuple tuple) {
  std::sort(tuple.begin(), tuple.end());
  return tuple;
}

std::vector<int> multiplicities(const IndexTuple& tuple) {
  std::map<int, int> counts;
  for (int s : tuple) ++counts[s];
  std::vector<int> xi;
  xi.reserve(counts.size());
  for (const auto& [site, c] : counts) xi.push_back(c);
  return xi;
}

double permutation_count(const IndexTuple& tuple) {
  double p = factorial(static_cast<int>(tuple.size()));
  for (int xi : multiplicities(tuple)) p /= factorial(xi);
  return p;
}

GridShape::GridShape(int n, int site_min, int extent) : n_(n), site_min_(site_min), extent_(extent) {
  if (n < 1) throw std::invalid_argument("grid needs at least one axis");
  if (extent < 1) throw std::invalid_argument("grid window is empty");
  strides_.assign(static_cast<std::size_t>(n), 1);
  for (int axis = n - 2; axis >= 0; --axis)
    strides_[static_cast<std::size_t>(axis)] =
        strides_[static_cast<std::size_t>(axis) + 1] * static_cast<std::size_t>(extent);
  size_ = strides_[0] * static_cast<std::size_t>(extent);
}

bool GridShape::contains(std::span<const int> tuple) const {
  if (tuple.size() != static_cast<std::size_t>(n_)) return false;
  return std::all_of(tuple.begin(), tuple.end(),
                     [&](int s) { return s >= site_min_ && s < site_min_ + extent_; });
}

std::size_t GridShape::flat(std::span<const int> tuple) const {
  if (!contains(tuple)) throw std::out_of_range("index tuple outside the grid");
  std::size_t f = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    f += static_cast<std::size_t>(tuple[i] - site_min_) * strides_[i];
  return f;
}

IndexTuple GridShape::tuple(std::size_t flat) const {
  IndexTuple t(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = site_min_ + static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return t;
}

double AmplitudeField::norm_squared() const {
  double s = 0.0;
  for (const Complex& z : data) s += std::norm(z);
  return s;
}

SyntheticOperator::SyntheticOperator(model::LatticeSpec lattice, GridShape shape, std::vector<Hop> hops,
                                     std::vector<double> diag)
    : lattice_(std::move(lattice)), shape_(std::move(shape)), hops_(std::move(hops)), diag_(std::move(diag)) {
  if (diag_.size() != shape_.size()) throw std::invalid_argument("diagonal size does not match the grid");
  std::sort(hops_.begin(), hops_.end(),
            [](const Hop& a, const Hop& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  row_begin_.assign(shape_.size() + 1, 0);
  for (const Hop& h : hops_) {
    if (h.row >= shape_.size() || h.col >= shape_.size()) throw std::out_of_range("hop outside the grid");
    ++row_begin_[h.row + 1];
  }
  for (std::size_t r = 0; r < shape_.size(); ++r) row_begin_[r + 1] += row_begin_[r];
}

void SyntheticOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t n = dim();
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc = diag_[r] * in[r];
    for (std::size_t e = row_begin_[r]; e < row_begin_[r + 1]; ++e) acc += hops_[e].amplitude * in[hops_[e].col];
    out[r] = acc;
  }
}

double SyntheticOperator::infinity_norm() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) {
    double s = std::abs(diag_[r]);
    for (std::size_t e = row_begin_[r]; e < row_begin_[r + 1]; ++e) s += std::abs(hops_[e].amplitude);
    best = std::max(best, s);
  }
  return best;
}

bool SyntheticOperator::is_hermitian() const {
  for (const Hop& h : hops_) {
    const auto first = hops_.begin() + static_cast<std::ptrdiff_t>(row_begin_[h.col]);
    const auto last = hops_.begin() + static_cast<std::ptrdiff_t>(row_begin_[h.col + 1]);
    const auto it = std::lower_bound(first, last, h.row, [](const Hop& x, std::size_t c) { return x.col < c; });
    if (it == last || it->col != h.row || it->amplitude != h.amplitude) return false;
  }
  return std::all_of(diag_.begin(), diag_.end(), [](double d) { return std::isfinite(d); });
}

Eigen::MatrixXd SyntheticOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < dim(); ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = diag_[r];
  for (const Hop& h : hops_) m(static_cast<Eigen::Index>(h.row), static_cast<Eigen::Index>(h.col)) += h.amplitude;
  return m;
}

GridShape grid_for(const model::LatticeSpec& spec, int n_bosons) {
  spec.validate();
  if (n_bosons < 1) throw std::invalid_argument("boson number must be positive");
  return GridShape(n_bosons, spec.site_min(), spec.site_count());
}

double onsite_potential(const model::LatticeSpec& spec, const IndexTuple& tuple) {
  double v = 0.0;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    for (std::size_t j = i + 1; j < tuple.size(); ++j) v += model::pair_potential(spec, tuple[i], tuple[j]);
  return v;
}

SyntheticOperator build_synthetic_operator(const model::LatticeSpec& spec, int n_bosons) {
  const GridShape shape = grid_for(spec, n_bosons);
  std::vector<double> diag(shape.size());
  std::vector<Hop> hops;
  hops.reserve(shape.size() * static_cast<std::size_t>(2 * n_bosons));

  for (std::size_t row = 0; row < shape.size(); ++row) {
    IndexTuple t = shape.tuple(row);
    diag[row] = onsite_potential(spec, t);
    for (std::size_t axis = 0; axis < t.size(); ++axis) {
      const int site = t[axis];
      for (int step : {-1, +1}) {
        const auto amp = model::coupling_strength(spec, site, site + step);
        if (!amp) continue;
        t[axis] = spec.wrap(site + step);
        hops.push_back({row, shape.flat(t), *amp});
        t[axis] = site;
      }
    }
  }
  // A two-site periodic ring would connect the same pair twice; validate()
  // rules that out, so every (row, col) pair appears once.
  return SyntheticOperator(spec, shape, std::move(hops), std::move(diag));
}

Complex v_to_u(const AmplitudeField& field, const IndexTuple& tuple) {
  if (!is_canonical(tuple)) throw std::invalid_argument("v_to_u expects a canonical (sorted) tuple");
  return std::sqrt(permutation_count(tuple)) * field.at(tuple);
}

AmplitudeField symmetrize(const GridShape& shape, std::span<const Complex> raw) {
  if (raw.size() != shape.size()) throw std::invalid_argument("raw array size does not match the grid");
  AmplitudeField out(shape);
  std::vector<std::size_t> orbit;
  std::vector<bool> done(shape.size(), false);
  for (std::size_t f = 0; f < shape.size(); ++f) {
    if (done[f]) continue;
    IndexTuple t = canonical(shape.tuple(f));
    orbit.clear();
    Complex sum = 0.0;
    do {
      const std::size_t g = shape.flat(t);
      orbit.push_back(g);
      sum += raw[g];
    } while (std::next_permutation(t.begin(), t.end()));
    const Complex mean = sum / static_cast<double>(orbit.size());
    for (std::size_t g : orbit) {
      out.data[g] = mean;
      done[g] = true;
    }
  }
  return out;
}

double correlation(const AmplitudeField& field, const IndexTuple& tuple) { return std::norm(field.at(tuple)); }

BosonNumbers boson_number_distribution(const AmplitudeField& field) {
  const GridShape& shape = field.shape;
  BosonNumbers out;
  out.counts.assign(static_cast<std::size_t>(shape.extent()), 0.0);
  // Summing |v|^2 over every ordering of a tuple reproduces the canonical
  // weight |u|^2 = (N!/prod xi!) |v|^2, so the full grid can be walked directly.
  for (std::size_t f = 0; f < shape.size(); ++f) {
    const double p = std::norm(field.data[f]);
    if (p == 0.0) continue;
    out.norm_squared += p;
    std::size_t rest = f;
    for (int axis = 0; axis < shape.n(); ++axis) {
      const std::size_t s = shape.stride(axis);
      out.counts[rest / s] += p;
      rest %= s;
    }
  }
  return out;
}

double exchange_asymmetry(const AmplitudeField& field) {
  const GridShape& shape = field.shape;
  double worst = 0.0;
  for (std::size_t f = 0; f < shape.size(); ++f) {
    IndexTuple t = shape.tuple(f);
    for (std::size_t axis = 0; axis + 1 < t.size(); ++axis) {
      if (t[axis] >= t[axis + 1]) continue;
      std::swap(t[axis], t[axis + 1]);
      worst = std::max(worst, std::abs(field.data[f] - field.at(t)));
      std::swap(t[axis], t[axis + 1]);
    }
  }
  return worst;
}

double mean_pair_cell_distance(const AmplitudeField& field, const model::LatticeSpec& spec) {
  const GridShape& shape = field.shape;
  const int n = shape.n();
  if (n < 2) return 0.0;
  const double pairs = n * (n - 1) / 2.0;
  double acc = 0.0;
  double norm = 0.0;
  for (std::size_t f = 0; f < shape.size(); ++f) {
    const double p = std::norm(field.data[f]);
    if (p == 0.0) continue;
    const IndexTuple t = shape.tuple(f);
    double d = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        d += model::cell_distance(spec, t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]);
    acc += p * d / pairs;
    norm += p;
  }
  return norm > 0.0 ? acc / norm : 0.0;
}

std::vector<IndexTuple> canonical_tuples(const GridShape& shape) {
  std::vector<IndexTuple> out;
  for_each_canonical(shape, [&](const IndexTuple& t) { out.push_back(t); });
  return out;
}

Eigen::MatrixXd symmetric_sector_matrix(const SyntheticOperator& op) {
  const GridShape& shape = op.shape();
  const std::vector<IndexTuple> basis = canonical_tuples(shape);
  std::map<IndexTuple, Eigen::Index> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<Eigen::Index>(i));

  // <e_T| H |e_T'> with e_T = (1/sqrt(P_T)) sum over orderings of T. Applying
  // H to e_T' and reading off the component at the canonical ordering of T
  // gives (H e_T')(T) = <e_T|H|e_T'> / sqrt(P_T).
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<Complex> in(shape.size()), out(shape.size());
  for (Eigen::Index c = 0; c < dim; ++c) {
    std::fill(in.begin(), in.end(), Complex{});
    IndexTuple t = basis[static_cast<std::size_t>(c)];
    const double w = 1.0 / std::sqrt(permutation_count(t));
    do {
      in[shape.flat(t)] = w;
    } while (std::next_permutation(t.begin(), t.end()));
    op.apply(in, out);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const IndexTuple& row = basis[static_cast<std::size_t>(r)];
      const Complex val = out[shape.flat(row)];
      if (val != Complex{}) m(r, c) = val.real() * std::sqrt(permutation_count(row));
    }
  }
  return m;
}

}  // namespace synthdim::synth
