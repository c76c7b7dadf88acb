#include "synthdim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace synthdim::dynamics {

Complex source_envelope(const model::ExcitationSpec& exc, double t) {
  const double dt0 = t - exc.t0;
  return exc.eta0 * std::exp(-dt0 * dt0 / exc.tau2) * std::polar(1.0, -exc.delta_e * t);
}

SourceTerm SourceTerm::from_excitation(const model::ExcitationSpec& exc) {
  SourceTerm s;
  s.excitation = exc;
  synth::IndexTuple t;
  for (const auto& [site, count] : exc.occupancy) t.insert(t.end(), static_cast<std::size_t>(count), site);
  do {
    s.target_tuples.push_back(t);
  } while (std::next_permutation(t.begin(), t.end()));
  return s;
}

synth::IndexTuple SourceTerm::canonical_tuple() const {
  if (target_tuples.empty()) return {};
  return synth::canonical(target_tuples.front());
}

long step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  const double steps = t_end / dt;
  const long n = std::lround(steps);
  if (std::abs(steps - static_cast<double>(n)) > 1e-6 * std::max(1.0, steps))
    throw std::invalid_argument("t_end must be a whole number of steps");
  return n;
}

std::vector<std::pair<synth::IndexTuple, double>> excitation_probability_map(const synth::AmplitudeField& field) {
  std::vector<std::pair<synth::IndexTuple, double>> out;
  synth::for_each_canonical(field.shape, [&](const synth::IndexTuple& t) {
    out.emplace_back(t, std::norm(synth::v_to_u(field, t)));
  });
  return out;
}

namespace {

synth::AmplitudeField as_field(const synth::GridShape& shape, const Eigen::VectorXcd& v, double t) {
  synth::AmplitudeField f(shape);
  std::copy(v.data(), v.data() + v.size(), f.data.begin());
  f.time = t;
  return f;
}

double value_span(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

}  // namespace

EvolutionResult evolve(const synth::SyntheticOperator& op, const SourceTerm& source, double t_end, double dt,
                       const EvolveOptions& options) {
  if (!op.is_hermitian()) throw std::invalid_argument("operator is not Hermitian");
  const model::ExcitationSpec& exc = source.excitation;
  const synth::GridShape& shape = op.shape();
  exc.validate(op.lattice(), shape.n());
  const long steps = step_count(t_end, dt);
  const double h_norm = op.infinity_norm();
  if (dt * h_norm > options.max_step_norm * (1.0 + 1e-12))
    throw std::invalid_argument("dt = " + std::to_string(dt) + " exceeds the stability bound " +
                                std::to_string(options.max_step_norm) + " / |H| = " +
                                std::to_string(options.max_step_norm / h_norm));
  if (!(t_end > exc.t0 + 5.0 * exc.tau())) throw std::invalid_argument("t_end must exceed t0 + 5 tau");
  if (!(options.sample_interval > 0.0)) throw std::invalid_argument("sample interval must be positive");
  const long stride = std::max(1L, std::lround(options.sample_interval / dt));

  std::vector<std::size_t> targets;
  for (const synth::IndexTuple& t : source.target_tuples) targets.push_back(shape.flat(t));
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<long> snapshot_steps;
  for (double ts : options.snapshot_times) {
    if (ts < 0.0 || ts > t_end + 0.5 * dt) throw std::invalid_argument("snapshot time outside [0, t_end]");
    snapshot_steps.push_back(std::lround(ts / dt));
  }

  const auto dim = static_cast<Eigen::Index>(shape.size());
  auto deriv = [&](double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    op.apply(std::span<const Complex>(in.data(), static_cast<std::size_t>(dim)),
             std::span<Complex>(out.data(), static_cast<std::size_t>(dim)));
    const Complex eta = source_envelope(exc, t);
    for (std::size_t f : targets) out(static_cast<Eigen::Index>(f)) += eta;
    out *= Complex(0.0, -1.0);
  };

  EvolutionResult res;
  res.site_min = shape.site_min();
  const double n_bosons = shape.n();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd hv(dim);
  std::vector<synth::AmplitudeField> snap_fields;

  auto record = [&](long step) {
    const double t = static_cast<double>(step) * dt;
    const synth::AmplitudeField field = as_field(shape, v, t);
    const synth::BosonNumbers bn = synth::boson_number_distribution(field);
    const double norm2 = bn.norm_squared;
    res.times.push_back(t);
    res.boson_numbers.push_back(bn.counts);
    res.norms.push_back(std::sqrt(norm2));
    op.apply(std::span<const Complex>(v.data(), static_cast<std::size_t>(dim)),
             std::span<Complex>(hv.data(), static_cast<std::size_t>(dim)));
    res.energies.push_back(norm2 > 0.0 ? v.dot(hv).real() / norm2 : 0.0);
    res.pair_distance.push_back(synth::mean_pair_cell_distance(field, op.lattice()));
    if (norm2 > 0.0) {
      double total = 0.0;
      for (double c : bn.counts) total += c;
      res.max_count_defect = std::max(res.max_count_defect, std::abs(total - n_bosons * norm2) / (n_bosons * norm2));
      const double vmax = v.cwiseAbs().maxCoeff();
      res.max_symmetry_violation = std::max(res.max_symmetry_violation, synth::exchange_asymmetry(field) / vmax);
    }
    if (options.keep_fields) res.fields.push_back(field);
  };

  auto maybe_snapshot = [&](long step) {
    if (std::find(snapshot_steps.begin(), snapshot_steps.end(), step) == snapshot_steps.end()) return;
    snap_fields.push_back(as_field(shape, v, static_cast<double>(step) * dt));
  };

  Rk4Workspace work;
  record(0);
  maybe_snapshot(0);
  for (long n = 0; n < steps; ++n) {
    rk4_step(v, static_cast<double>(n) * dt, dt, deriv, work);
    const long step = n + 1;
    if (step % stride == 0 || step == steps) record(step);
    maybe_snapshot(step);
  }

  res.final_norm = std::sqrt(v.squaredNorm());
  const double scale = res.final_norm > 0.0 ? 1.0 / (res.final_norm * res.final_norm) : 1.0;
  for (auto& row : res.boson_numbers)
    for (double& x : row) x *= scale;

  for (std::size_t i = 0; i < snap_fields.size(); ++i) {
    Snapshot snap;
    snap.time = snap_fields[i].time;
    snap.probabilities = excitation_probability_map(snap_fields[i]);
    for (auto& entry : snap.probabilities) entry.second *= scale;
    res.snapshots.push_back(std::move(snap));
  }

  const double quiet_from = exc.t0 + 5.0 * exc.tau();
  std::vector<double> quiet_norms, quiet_energies;
  double first = -1.0, last = 0.0;
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    if (res.times[i] + 1e-12 < quiet_from) continue;
    if (first < 0.0) first = res.times[i];
    last = res.times[i];
    quiet_norms.push_back(res.norms[i]);
    quiet_energies.push_back(res.energies[i]);
  }
  if (quiet_norms.size() >= 2 && last > first && quiet_norms.front() > 0.0) {
    res.norm_drift_rate = value_span(quiet_norms) / quiet_norms.front() / (last - first);
    res.energy_drift_rate = value_span(quiet_energies) / (last - first);
  }
  return res;
}

InterfaceScenario interface_scenario(char which) {
  InterfaceScenario s;
  s.lattice.cell_min = -15;
  s.lattice.cell_max = 15;
  s.lattice.boundary = model::Boundary::Open;
  s.lattice.interaction = {2.0, 6};
  s.lattice.pattern = model::CouplingPattern::alternating(1.0, 3.0);
  std::vector<int> sites{0, 13};
  double delta_e = 1.0;
  switch (which) {
    case 'a': break;
    case 'b': s.lattice.pattern = model::CouplingPattern::alternating(3.0, 1.0); break;
    case 'c': sites = {0, 0}; break;
    case 'd':
      s.lattice.interaction.U = 0.0;
      delta_e = 0.0;
      break;
    default: throw std::invalid_argument(std::string("unknown interface scenario '") + which + "'");
  }
  s.excitation = model::ExcitationSpec::from_sites(sites, delta_e);
  return s;
}

EvolutionResult run_interface_experiment(char which, const EvolveOptions& options) {
  const InterfaceScenario s = interface_scenario(which);
  const synth::SyntheticOperator op = synth::build_synthetic_operator(s.lattice, 2);
  return evolve(op, SourceTerm::from_excitation(s.excitation), s.t_end, s.dt, options);
}

}  // namespace synthdim::dynamics
