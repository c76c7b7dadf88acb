#include "synthdim/bloch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "synthdim/eig.hpp"

namespace synthdim::bloch {

namespace {

using Complex = std::complex<double>;

int floor_mod(int a, int b) {
  const int r = a % b;
  return r < 0 ? r + b : r;
}

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<int> transverse_axes(const StripeGeometry& geom) {
  std::vector<int> axes;
  const int a = geom.anchor();
  for (int i = 0; i < geom.n_bosons; ++i)
    if (i != a) axes.push_back(i);
  return axes;
}

double stripe_diagonal(const StripeGeometry& geom, const synth::IndexTuple& t) {
  double v = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      v += geom.interaction.pair(geom.pattern.cell_of(t[i]) - geom.pattern.cell_of(t[j]));
  return v;
}

}  // namespace

double analytic_band_tb(std::span<const double> k, double g) {
  double e = 0.0;
  for (double ki : k) e += 2.0 * g * std::cos(ki);
  return e;
}

std::array<double, 2> ssh_band_1d(double k, double g1, double g2) {
  const double e = std::sqrt(std::max(0.0, g1 * g1 + g2 * g2 + 2.0 * g1 * g2 * std::cos(k)));
  return {-e, e};
}

std::array<double, 4> analytic_band_ssh2d(double k_m, double k_n, double g1, double g2) {
  const double a = ssh_band_1d(k_m, g1, g2)[1];
  const double b = ssh_band_1d(k_n, g1, g2)[1];
  std::array<double, 4> e{-a - b, -a + b, a - b, a + b};
  std::sort(e.begin(), e.end());
  return e;
}

StripeGeometry StripeGeometry::diagonal(model::CouplingPattern pattern, model::InteractionSpec interaction,
                                        int n_bosons, int half_width) {
  StripeGeometry g;
  g.pattern = pattern;
  g.interaction = interaction;
  g.n_bosons = n_bosons;
  g.translation.assign(static_cast<std::size_t>(n_bosons), 1);
  g.transverse_min = -half_width;
  g.transverse_max = half_width;
  return g;
}

StripeGeometry StripeGeometry::axis(model::CouplingPattern pattern, model::InteractionSpec interaction,
                                    int n_bosons, int axis, int half_width) {
  StripeGeometry g = diagonal(pattern, interaction, n_bosons, half_width);
  g.translation.assign(static_cast<std::size_t>(n_bosons), 0);
  g.translation.at(static_cast<std::size_t>(axis)) = 1;
  return g;
}

int StripeGeometry::anchor() const {
  for (std::size_t i = 0; i < translation.size(); ++i)
    if (translation[i] == 1) return static_cast<int>(i);
  throw std::invalid_argument("translation needs a component equal to 1");
}

int StripeGeometry::sublattice_count() const { return ipow(sites_per_cell(), n_bosons); }

bool StripeGeometry::is_diagonal() const {
  return std::all_of(translation.begin(), translation.end(), [](int t) { return t == 1; });
}

void StripeGeometry::validate() const {
  pattern.validate();
  interaction.validate();
  if (n_bosons < 1) throw std::invalid_argument("stripe needs at least one boson");
  if (translation.size() != static_cast<std::size_t>(n_bosons))
    throw std::invalid_argument("translation must have one component per boson");
  anchor();
  if (transverse_min > transverse_max) throw std::invalid_argument("transverse window is empty");
}

std::vector<SupercellSite> supercell_sites(const StripeGeometry& geom) {
  geom.validate();
  const int n = geom.n_bosons;
  const int s = geom.sites_per_cell();
  const std::vector<int> axes = transverse_axes(geom);
  const int width = geom.transverse_width();
  const int n_trans = ipow(width, n - 1);
  const int n_sub = geom.sublattice_count();

  std::vector<SupercellSite> sites;
  sites.reserve(static_cast<std::size_t>(n_trans) * static_cast<std::size_t>(n_sub));
  for (int t = 0; t < n_trans; ++t) {
    std::vector<int> trans(axes.size());
    for (int i = static_cast<int>(axes.size()) - 1, rest = t; i >= 0; --i, rest /= width)
      trans[static_cast<std::size_t>(i)] = geom.transverse_min + rest % width;
    std::vector<int> cells(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < axes.size(); ++i) cells[static_cast<std::size_t>(axes[i])] = trans[i];
    for (int sub = 0; sub < n_sub; ++sub) {
      synth::IndexTuple tuple(static_cast<std::size_t>(n));
      for (int i = n - 1, rest = sub; i >= 0; --i, rest /= s)
        tuple[static_cast<std::size_t>(i)] = cells[static_cast<std::size_t>(i)] * s + rest % s;
      sites.push_back({trans, std::move(tuple)});
    }
  }
  return sites;
}

long supercell_index(const StripeGeometry& geom, const synth::IndexTuple& rep) {
  const int s = geom.sites_per_cell();
  const int width = geom.transverse_width();
  if (geom.pattern.cell_of(rep.at(static_cast<std::size_t>(geom.anchor()))) != 0)
    throw std::invalid_argument("tuple is not a supercell representative");
  long trans = 0;
  for (int axis : transverse_axes(geom)) {
    int c = geom.pattern.cell_of(rep[static_cast<std::size_t>(axis)]);
    if (geom.transverse_periodic) {
      c = geom.transverse_min + floor_mod(c - geom.transverse_min, width);
    } else if (c < geom.transverse_min || c > geom.transverse_max) {
      return -1;
    }
    trans = trans * width + (c - geom.transverse_min);
  }
  long sub = 0;
  for (int x : rep) sub = sub * s + (x - s * geom.pattern.cell_of(x));
  return trans * geom.sublattice_count() + sub;
}

Decomposition decompose(const StripeGeometry& geom, const synth::IndexTuple& tuple) {
  const int s = geom.sites_per_cell();
  Decomposition d;
  d.q = geom.pattern.cell_of(tuple.at(static_cast<std::size_t>(geom.anchor())));
  d.rep = tuple;
  for (std::size_t i = 0; i < tuple.size(); ++i) d.rep[i] -= d.q * geom.translation[i] * s;
  return d;
}

Eigen::MatrixXcd build_stripe_bloch(const StripeGeometry& geom, double k_j) {
  if (!(std::abs(k_j) <= std::numbers::pi + 1e-12)) throw std::invalid_argument("k_j outside [-pi, pi]");
  const std::vector<SupercellSite> sites = supercell_sites(geom);
  const int s = geom.sites_per_cell();
  const auto dim = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

  for (Eigen::Index a = 0; a < dim; ++a) {
    synth::IndexTuple t = sites[static_cast<std::size_t>(a)].tuple;

    // Translation symmetry of the diagonal and of every bond touching t.
    synth::IndexTuple shifted = t;
    for (std::size_t i = 0; i < t.size(); ++i) shifted[i] += geom.translation[i] * s;
    const double diag = stripe_diagonal(geom, t);
    if (stripe_diagonal(geom, shifted) != diag)
      throw std::invalid_argument("translation does not preserve the interaction potential");
    h(a, a) += diag;

    for (std::size_t axis = 0; axis < t.size(); ++axis) {
      const int x = t[axis];
      for (int step : {-1, +1}) {
        const int left = std::min(x, x + step);
        const double amp = geom.pattern.bond(left);
        if (geom.pattern.bond(left + geom.translation[axis] * s) != amp)
          throw std::invalid_argument("translation does not preserve the couplings");
        t[axis] = x + step;
        const Decomposition d = decompose(geom, t);
        t[axis] = x;
        if (std::abs(d.q) > 1) throw std::invalid_argument("hop spans more than one supercell");
        const long b = supercell_index(geom, d.rep);
        if (b < 0) continue;
        h(a, static_cast<Eigen::Index>(b)) += amp * std::polar(1.0, d.q * k_j);
      }
    }
  }
  return h;
}

Eigen::MatrixXcd build_bulk_bloch(const model::CouplingPattern& pattern, int n_bosons, std::span<const double> k) {
  if (n_bosons < 1) throw std::invalid_argument("bulk Bloch matrix needs at least one boson");
  if (k.size() != static_cast<std::size_t>(n_bosons)) throw std::invalid_argument("need one k component per boson");
  const int s = pattern.sites_per_cell();
  const int dim = ipow(s, n_bosons);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    std::vector<int> sub(static_cast<std::size_t>(n_bosons));
    for (int i = n_bosons - 1, rest = row; i >= 0; --i, rest /= s) sub[static_cast<std::size_t>(i)] = rest % s;
    for (int axis = 0; axis < n_bosons; ++axis) {
      const int x = sub[static_cast<std::size_t>(axis)];
      for (int step : {-1, +1}) {
        const int y = x + step;
        const int dc = pattern.cell_of(y);
        std::vector<int> to = sub;
        to[static_cast<std::size_t>(axis)] = y - s * dc;
        int col = 0;
        for (int v : to) col = col * s + v;
        h(row, col) += pattern.bond(std::min(x, y)) * std::polar(1.0, dc * k[static_cast<std::size_t>(axis)]);
      }
    }
  }
  return h;
}

std::vector<double> uniform_k_grid(int count) {
  if (count < 2) throw std::invalid_argument("k grid needs at least two points");
  std::vector<double> k(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) k[static_cast<std::size_t>(i)] = -std::numbers::pi + 2.0 * std::numbers::pi * i / (count - 1);
  k.back() = std::numbers::pi;
  return k;
}

namespace {

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

BandStructure projected_bands(const StripeGeometry& geom, int k_count, const SweepOptions& options) {
  return projected_bands(geom, uniform_k_grid(k_count), options);
}

BandStructure projected_bands(const StripeGeometry& geom, const std::vector<double>& k_grid,
                              const SweepOptions& options) {
  geom.validate();
  if (k_grid.empty()) throw std::invalid_argument("empty k grid");
  const auto dim = static_cast<Eigen::Index>(supercell_sites(geom).size());
  BandStructure bands;
  bands.k_grid = k_grid;
  bands.energies.resize(static_cast<Eigen::Index>(k_grid.size()), dim);
  if (options.keep_vectors) bands.eigvecs.resize(k_grid.size());

  parallel_for(static_cast<int>(k_grid.size()), options.threads, [&](int i) {
    const Eigen::MatrixXcd h = build_stripe_bloch(geom, k_grid[static_cast<std::size_t>(i)]);
    if (options.keep_vectors) {
      const auto pairs = spectra::hermitian_eig(h);
      Eigen::MatrixXcd vecs(dim, dim);
      for (Eigen::Index b = 0; b < dim; ++b) {
        bands.energies(i, b) = pairs[static_cast<std::size_t>(b)].energy;
        vecs.col(b) = pairs[static_cast<std::size_t>(b)].vector;
      }
      bands.eigvecs[static_cast<std::size_t>(i)] = std::move(vecs);
    } else {
      bands.energies.row(i) = spectra::hermitian_eigenvalues(h).transpose();
    }
  });
  return bands;
}

BandStructure projected_bulk_bands(const StripeGeometry& geom, const std::vector<double>& k_grid,
                                   int samples_per_axis) {
  geom.validate();
  if (samples_per_axis < 2) throw std::invalid_argument("need at least two transverse samples");
  const int n = geom.n_bosons;
  const int a = geom.anchor();
  const std::vector<int> axes = transverse_axes(geom);
  const std::vector<double> ks = uniform_k_grid(samples_per_axis);
  const int combos = ipow(samples_per_axis, n - 1);
  const int bands_per_k = geom.sublattice_count();

  BandStructure out;
  out.k_grid = k_grid;
  out.energies.resize(static_cast<Eigen::Index>(k_grid.size()), static_cast<Eigen::Index>(combos) * bands_per_k);
  std::vector<double> k(static_cast<std::size_t>(n));
  for (std::size_t row = 0; row < k_grid.size(); ++row) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(combos * bands_per_k));
    for (int c = 0; c < combos; ++c) {
      double rest_sum = 0.0;
      for (int i = static_cast<int>(axes.size()) - 1, rest = c; i >= 0; --i, rest /= samples_per_axis) {
        const int axis = axes[static_cast<std::size_t>(i)];
        k[static_cast<std::size_t>(axis)] = ks[static_cast<std::size_t>(rest % samples_per_axis)];
        rest_sum += geom.translation[static_cast<std::size_t>(axis)] * k[static_cast<std::size_t>(axis)];
      }
      k[static_cast<std::size_t>(a)] = k_grid[row] - rest_sum;
      const Eigen::VectorXd e = spectra::hermitian_eigenvalues(build_bulk_bloch(geom.pattern, n, k));
      values.insert(values.end(), e.data(), e.data() + e.size());
    }
    std::sort(values.begin(), values.end());
    for (std::size_t b = 0; b < values.size(); ++b)
      out.energies(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(b)) = values[b];
  }
  return out;
}

}  // namespace synthdim::bloch
