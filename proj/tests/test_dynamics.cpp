#include <doctest.h>

#include <cmath>
#include <numbers>

#include "synthdim/dynamics.hpp"

using namespace synthdim;
using dynamics::Complex;

namespace {

model::LatticeSpec chain(int sites, double g = 1.0) {
  model::LatticeSpec s;
  s.pattern = model::CouplingPattern::uniform(g);
  s.cell_min = 0;
  s.cell_max = sites - 1;
  return s;
}

}  // namespace

TEST_CASE("source envelope") {
  const std::vector<int> site{0};
  auto exc = model::ExcitationSpec::from_sites(site, 0.0, 10.0, 10.0, 2.0);
  CHECK(dynamics::source_envelope(exc, 10.0) == Complex(2.0));
  CHECK(std::abs(dynamics::source_envelope(exc, 10.0 + exc.tau())) == doctest::Approx(2.0 / std::numbers::e));
  CHECK(std::abs(dynamics::source_envelope(exc, 10.0 - exc.tau())) == doctest::Approx(2.0 / std::numbers::e));
  CHECK(std::abs(dynamics::source_envelope(exc, 10.0 + 10.0 * exc.tau())) < 1e-43 * 2.0);
  exc.delta_e = 1.5;
  CHECK(std::abs(dynamics::source_envelope(exc, 10.0) - 2.0 * std::exp(Complex(0.0, -15.0))) < 1e-14);
}

TEST_CASE("source term covers every ordering") {
  const std::vector<int> sites{3, 0, 3};
  const auto src = dynamics::SourceTerm::from_excitation(model::ExcitationSpec::from_sites(sites, 0.0));
  CHECK(src.target_tuples.size() == 3);
  CHECK(src.canonical_tuple() == synth::IndexTuple{0, 3, 3});
}

TEST_CASE("step count") {
  CHECK(dynamics::step_count(50.0, 0.01) == 5000);
  CHECK_THROWS_AS(dynamics::step_count(1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(dynamics::step_count(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero source gives a zero trajectory") {
  const auto op = synth::build_synthetic_operator(chain(6), 2);
  const std::vector<int> sites{1, 4};
  const auto exc = model::ExcitationSpec::from_sites(sites, 0.5, 10.0, 10.0, 0.0);
  dynamics::EvolveOptions opt;
  opt.keep_fields = true;
  const auto res = dynamics::evolve(op, dynamics::SourceTerm::from_excitation(exc), 30.0, 0.01, opt);
  CHECK(res.final_norm == 0.0);
  for (const auto& f : res.fields)
    for (auto z : f.data) CHECK(z == Complex(0.0));
}

TEST_CASE("dimer resonance selects the symmetric mode") {
  const auto op = synth::build_synthetic_operator(chain(2), 1);
  const std::vector<int> site{0};
  for (double de : {1.0, -1.0}) {
    const auto exc = model::ExcitationSpec::from_sites(site, de);
    dynamics::EvolveOptions opt;
    opt.keep_fields = true;
    const auto res = dynamics::evolve(op, dynamics::SourceTerm::from_excitation(exc), 60.0, 0.01, opt);
    const auto& v = res.fields.back().data;
    const double sym = std::norm(v[0] + v[1]) / 2.0;
    const double anti = std::norm(v[0] - v[1]) / 2.0;
    // eigenvalue +g belongs to (1, 1), -g to (1, -1)
    if (de > 0)
      CHECK(sym / (sym + anti) > 0.999);
    else
      CHECK(anti / (sym + anti) > 0.999);
  }
}

TEST_CASE("evolve rejects unstable steps and short runs") {
  const auto op = synth::build_synthetic_operator(chain(8), 2);
  const std::vector<int> sites{0, 1};
  const auto src = dynamics::SourceTerm::from_excitation(model::ExcitationSpec::from_sites(sites, 0.0));
  CHECK_THROWS_AS(dynamics::evolve(op, src, 30.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dynamics::evolve(op, src, 20.0, 0.01), std::invalid_argument);
  CHECK_NOTHROW(dynamics::evolve(op, src, 30.0, 0.02));
}

TEST_CASE("conservation after the source turns off") {
  model::LatticeSpec ssh;
  ssh.pattern = model::CouplingPattern::alternating(1.0, 3.0);
  ssh.interaction = {2.0, 2};
  ssh.cell_min = -5;
  ssh.cell_max = 5;
  const auto op = synth::build_synthetic_operator(ssh, 2);
  const std::vector<int> sites{0, 5};
  const auto src = dynamics::SourceTerm::from_excitation(model::ExcitationSpec::from_sites(sites, 1.0));
  dynamics::EvolveOptions opt;
  opt.snapshot_times = {40.0};
  const auto res = dynamics::evolve(op, src, 40.0, 0.01, opt);
  CHECK(res.final_norm > 0.0);
  CHECK(std::abs(res.norm_drift_rate) < 1e-8);
  CHECK(std::abs(res.energy_drift_rate) < 1e-8);
  CHECK(res.max_symmetry_violation < 1e-14);
  CHECK(res.max_count_defect < 1e-10);
  double total = 0.0;
  for (double n : res.boson_numbers.back()) total += n;
  CHECK(total == doctest::Approx(2.0).epsilon(1e-10));

  REQUIRE(res.snapshots.size() == 1);
  double p = 0.0;
  for (const auto& [t, w] : res.snapshots[0].probabilities) p += w;
  CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("probability map of a pinned pair") {
  synth::AmplitudeField f(synth::GridShape(2, 0, 3));
  f.at(std::vector<int>{0, 0}) = 1.0;
  const auto map = dynamics::excitation_probability_map(f);
  CHECK(map.size() == 6);
  for (const auto& [t, p] : map) CHECK(p == (t == synth::IndexTuple{0, 0} ? 1.0 : 0.0));
}

TEST_CASE("wave packet moves at the group velocity") {
  const int sites = 400;
  const auto op = synth::build_synthetic_operator(chain(sites), 1);
  for (double k : {std::numbers::pi / 2, 1.0, 2.3}) {
    const double x0 = 250.0, sigma = 20.0;
    Eigen::VectorXcd v(sites);
    for (int x = 0; x < sites; ++x)
      v(x) = std::exp(-0.5 * (x - x0) * (x - x0) / (sigma * sigma)) * std::exp(Complex(0.0, k * x));
    auto f = [&](double, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
      op.apply(std::span<const Complex>(in.data(), sites), std::span<Complex>(out.data(), sites));
      out *= Complex(0.0, -1.0);
    };
    auto mean_x = [&] {
      double m = 0.0, n = 0.0;
      for (int x = 0; x < sites; ++x) {
        m += x * std::norm(v(x));
        n += std::norm(v(x));
      }
      return m / n;
    };
    dynamics::Rk4Workspace w;
    const double t = 30.0, dt = 0.02;
    const double start = mean_x();
    for (int s = 0; s < 1500; ++s) rk4_step(v, s * dt, dt, f, w);
    const double velocity = (mean_x() - start) / t;
    const double expected = -2.0 * std::sin(k);
    CHECK(std::abs(velocity - expected) < 0.05 * std::abs(expected));
  }
}

TEST_CASE("interface scenarios") {
  const auto a = dynamics::interface_scenario('a');
  CHECK(a.lattice.cell_min == -15);
  CHECK(a.lattice.cell_max == 15);
  CHECK(a.lattice.interaction.U == 2.0);
  CHECK(a.lattice.interaction.R == 6);
  CHECK(a.lattice.pattern.g1 == 1.0);
  CHECK(a.lattice.pattern.g2 == 3.0);
  CHECK(a.excitation.occupancy == std::map<int, int>{{0, 1}, {13, 1}});
  CHECK(a.excitation.delta_e == 1.0);
  CHECK(dynamics::interface_scenario('b').lattice.pattern.g1 == 3.0);
  CHECK(dynamics::interface_scenario('c').excitation.occupancy == std::map<int, int>{{0, 2}});
  CHECK(dynamics::interface_scenario('d').lattice.interaction.U == 0.0);
  CHECK_THROWS_AS(dynamics::interface_scenario('e'), std::invalid_argument);
}
