#include "synthdim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "synthdim/eig.hpp"

namespace synthdim::oracle {

namespace {

using Complex = std::complex<double>;

void compositions(int sites, int remaining, FockState& current, int pos, std::vector<FockState>& out) {
  if (pos == sites - 1) {
    current[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(current);
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    current[static_cast<std::size_t>(pos)] = n;
    compositions(sites, remaining - n, current, pos + 1, out);
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<FockState> fock_basis(int sites, int n_bosons) {
  if (sites < 1 || n_bosons < 0) throw std::invalid_argument("invalid Fock basis size");
  std::vector<FockState> out;
  FockState current(static_cast<std::size_t>(sites), 0);
  compositions(sites, n_bosons, current, 0, out);
  return out;
}

double fock_dimension(int sites, int n_bosons) {
  double d = 1.0;
  for (int i = 1; i <= n_bosons; ++i) d = d * (sites + i - 1) / i;
  return std::round(d);
}

synth::IndexTuple positions(const FockState& state, int site_min) {
  synth::IndexTuple t;
  for (std::size_t k = 0; k < state.size(); ++k)
    t.insert(t.end(), static_cast<std::size_t>(state[k]), site_min + static_cast<int>(k));
  return t;
}

FockState occupations(const synth::IndexTuple& tuple, int site_min, int sites) {
  FockState s(static_cast<std::size_t>(sites), 0);
  for (int x : tuple) {
    const int k = x - site_min;
    if (k < 0 || k >= sites) throw std::out_of_range("tuple site outside the lattice window");
    ++s[static_cast<std::size_t>(k)];
  }
  return s;
}

Eigen::Index FockHamiltonian::find(const FockState& s) const {
  const auto it = index.find(s);
  if (it == index.end()) throw std::out_of_range("occupation vector not in the Fock basis");
  return it->second;
}

double fock_diagonal(const model::LatticeSpec& spec, const FockState& state) {
  const double U = spec.interaction.U;
  double acc = 0.0;
  const int smin = spec.site_min();
  for (std::size_t a = 0; a < state.size(); ++a) {
    if (state[a] == 0) continue;
    for (std::size_t b = 0; b < state.size(); ++b) {
      if (state[b] == 0) continue;
      if (model::cell_distance(spec, smin + static_cast<int>(a), smin + static_cast<int>(b)) > spec.interaction.R)
        continue;
      acc += static_cast<double>(state[a]) * state[b] - (a == b ? state[a] : 0);
    }
  }
  return 0.5 * U * acc;
}

FockHamiltonian build_fock_hamiltonian(const model::LatticeSpec& spec, int n_bosons, double dimension_cap) {
  spec.validate();
  if (n_bosons < 1) throw std::invalid_argument("boson number must be positive");
  const int sites = spec.site_count();
  const double dim = fock_dimension(sites, n_bosons);
  if (dim > dimension_cap)
    throw std::invalid_argument("Fock dimension " + std::to_string(static_cast<long long>(dim)) +
                                " exceeds the cap");

  FockHamiltonian h;
  h.lattice = spec;
  h.n_bosons = n_bosons;
  h.basis = fock_basis(sites, n_bosons);
  for (std::size_t i = 0; i < h.basis.size(); ++i) h.index.emplace(h.basis[i], static_cast<Eigen::Index>(i));

  // Bonds as (left, right) window offsets.
  std::vector<std::pair<int, int>> bonds;
  const int last = spec.boundary == model::Boundary::Periodic ? sites : sites - 1;
  for (int a = 0; a < last; ++a) bonds.emplace_back(a, (a + 1) % sites);

  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::size_t col = 0; col < h.basis.size(); ++col) {
    const FockState& s = h.basis[col];
    const double d = fock_diagonal(spec, s);
    if (d != 0.0) entries.emplace_back(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col), d);
    for (const auto& [a, b] : bonds) {
      const auto amp = model::coupling_strength(spec, spec.site_min() + a, spec.site_min() + a + 1);
      if (!amp) continue;
      for (const auto& [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
        const int n_from = s[static_cast<std::size_t>(from)];
        if (n_from == 0) continue;
        const int n_to = s[static_cast<std::size_t>(to)];
        FockState moved = s;
        --moved[static_cast<std::size_t>(from)];
        ++moved[static_cast<std::size_t>(to)];
        entries.emplace_back(h.find(moved), static_cast<Eigen::Index>(col),
                             *amp * std::sqrt(static_cast<double>(n_from)) * std::sqrt(n_to + 1.0));
      }
    }
  }
  h.matrix.resize(h.dim(), h.dim());
  h.matrix.setFromTriplets(entries.begin(), entries.end());
  return h;
}

Eigen::VectorXd fock_spectrum(const FockHamiltonian& h) {
  return spectra::hermitian_eigenvalues(Eigen::MatrixXcd(h.matrix));
}

namespace {

template <class SourceFn>
FockTrajectory integrate(const FockHamiltonian& h, Eigen::VectorXcd u, double t_end, double dt, double sample_interval,
                         SourceFn&& add_source) {
  const long steps = dynamics::step_count(t_end, dt);
  const long stride = std::max(1L, std::lround(sample_interval / dt));
  auto deriv = [&](double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    out = h.matrix * in;
    add_source(t, out);
    out *= Complex(0.0, -1.0);
  };
  FockTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  dynamics::Rk4Workspace work;
  for (long n = 0; n < steps; ++n) {
    dynamics::rk4_step(u, static_cast<double>(n) * dt, dt, deriv, work);
    const long step = n + 1;
    if (step % stride == 0 || step == steps) {
      traj.times.push_back(static_cast<double>(step) * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

}  // namespace

FockTrajectory evolve_fock(const FockHamiltonian& h, const model::ExcitationSpec& exc, double t_end, double dt,
                           double sample_interval) {
  exc.validate(h.lattice, h.n_bosons);
  FockState target(static_cast<std::size_t>(h.lattice.site_count()), 0);
  double weight = factorial(h.n_bosons);
  for (const auto& [site, count] : exc.occupancy) {
    target[static_cast<std::size_t>(site - h.lattice.site_min())] = count;
    weight /= factorial(count);
  }
  const Eigen::Index row = h.find(target);
  weight = std::sqrt(weight);
  return integrate(h, Eigen::VectorXcd::Zero(h.dim()), t_end, dt, sample_interval,
                   [&](double t, Eigen::VectorXcd& out) { out(row) += weight * dynamics::source_envelope(exc, t); });
}

FockTrajectory evolve_fock(const FockHamiltonian& h, const Eigen::VectorXcd& initial, double t_end, double dt,
                           double sample_interval) {
  if (initial.size() != h.dim()) throw std::invalid_argument("initial state has the wrong dimension");
  return integrate(h, initial, t_end, dt, sample_interval, [](double, Eigen::VectorXcd&) {});
}

double compare_trajectories(const std::vector<synth::AmplitudeField>& synthetic, const std::vector<double>& times,
                            const FockHamiltonian& h, const FockTrajectory& fock) {
  if (synthetic.size() != fock.states.size() || times.size() != fock.times.size() || times.size() != synthetic.size())
    throw std::invalid_argument("trajectories have different sample counts");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - fock.times[i]) > 1e-9) throw std::invalid_argument("trajectories use different time grids");

  const int smin = h.lattice.site_min();
  const int sites = h.lattice.site_count();
  double worst = 0.0;
  for (std::size_t i = 0; i < synthetic.size(); ++i) {
    const synth::AmplitudeField& field = synthetic[i];
    if (field.shape.n() != h.n_bosons || field.shape.site_min() != smin || field.shape.extent() != sites)
      throw std::invalid_argument("synthetic grid does not match the Fock lattice");
    synth::for_each_canonical(field.shape, [&](const synth::IndexTuple& t) {
      const Complex u = synth::v_to_u(field, t);
      const Complex f = fock.states[i](h.find(occupations(t, smin, sites)));
      worst = std::max(worst, std::abs(u - f));
    });
  }
  return worst;
}

}  // namespace synthdim::oracle
