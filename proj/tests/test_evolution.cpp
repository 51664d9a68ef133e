#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <string>

#include "multibarrier/evolution.hpp"

using namespace mbp;
using cplx = std::complex<double>;

namespace {

double free_evolution_error(double dx, double dt, double t_final) {
  const GridSpec g = make_grid(-40.0, 60.0, dx, dt);
  const PacketParams p;
  const ComplexField initial = analytic_packet(p, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.t_final = t_final;
  const ComplexField evolved = evolve(initial, layout, 0.0, cfg);  // height 0 = free
  const ComplexField exact = analytic_packet(p, g, t_final);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    const double rho_h = std::norm(evolved.values[i]);
    const double rho = std::norm(exact.values[i]);
    worst = std::max(worst, std::abs(rho_h - rho));
  }
  return worst;
}

}  // namespace

TEST_CASE("t_final = 0 returns the initial field") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.t_final = 0.0;
  const ComplexField out = evolve(initial, layout, 2.0, cfg);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(out.values[i] - initial.values[i]));
  CHECK(worst < 1e-50);  // only the (already negligible) wall values are pinned
}

TEST_CASE("free Crank-Nicolson tracks the analytic packet and converges") {
  const double e_base = free_evolution_error(1.0 / 7.0, 1.0 / 50.0, 6.0);
  CHECK(e_base < 5e-2);  // dispersion-error level at the default resolution
  const double e_half = free_evolution_error(1.0 / 14.0, 1.0 / 100.0, 6.0);
  CHECK(e_base / e_half >= 3.5);  // second order in dx and dt
}

TEST_CASE("Crank-Nicolson conserves the norm over 300 steps") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  const ComplexField out = evolve(initial, layout, 2.0, EvolutionConfig{});
  const double n0 = l2_norm(initial);
  CHECK(std::abs(l2_norm(out) - n0) / n0 < 1e-10);
}

TEST_CASE("step_once basics") {
  const GridSpec g = make_grid(-5.0, 5.0, 1.0 / 7.0, 1.0 / 50.0);
  const std::vector<double> v(g.n_points, 0.0);

  const StepOperator cn = StepOperator::prepare(g, v, Scheme::crank_nicolson, 0.5);
  ComplexField zero{g, std::vector<cplx>(g.n_points, 0.0)};
  for (const auto& z : step_once(cn, zero).values) CHECK(z == cplx(0.0, 0.0));

  // norm preservation on a random interior field
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  ComplexField noise{g, std::vector<cplx>(g.n_points)};
  for (int i = 1; i + 1 < g.n_points; ++i) noise.values[i] = cplx(ud(rng), ud(rng));
  const ComplexField stepped = step_once(cn, noise);
  const double n0 = l2_norm(noise);
  CHECK(std::abs(l2_norm(stepped) - n0) / n0 < 1e-12);

  // explicit step on a smooth field stays finite
  const StepOperator ex = StepOperator::prepare(g, v, Scheme::paper_explicit, 0.5);
  const ComplexField smooth = analytic_packet(PacketParams{0.0, 1.0, 0.5, 0.5}, g, 0.0);
  for (const auto& z : step_once(ex, smooth).values) {
    CHECK(std::isfinite(z.real()));
    CHECK(std::isfinite(z.imag()));
  }
}

TEST_CASE("explicit scheme refuses dx^2 <= dt") {
  const GridSpec g = make_grid(-40.0, 60.0, 1.0 / 8.0, 1.0 / 50.0);  // 1/64 < 1/50
  const std::vector<double> v(g.n_points, 0.0);
  CHECK_THROWS_AS((void)StepOperator::prepare(g, v, Scheme::paper_explicit, 0.5),
                  std::invalid_argument);

  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.scheme = Scheme::paper_explicit;
  CHECK_THROWS_AS((void)evolve(initial, layout, 2.0, cfg), std::invalid_argument);
}

TEST_CASE("explicit scheme completes t=6 finite at paper resolution") {
  const GridSpec g = default_grid();  // dx^2 = 1/49 > dt = 1/50
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.scheme = Scheme::paper_explicit;
  const ComplexField out = evolve(initial, layout, 2.0, cfg);
  for (const auto& z : out.values) {
    CHECK(std::isfinite(z.real()));
    CHECK(std::isfinite(z.imag()));
  }
}

TEST_CASE("explicit blowup is caught with a step index") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.scheme = Scheme::paper_explicit;
  cfg.t_final = 12.0;  // enough steps for the instability to overflow
  try {
    (void)evolve(initial, layout, 2.0, cfg);
    FAIL("expected a runtime_error");
  } catch (const std::runtime_error& ex) {
    CHECK(std::string(ex.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("symmetric packet stays even through the symmetric array") {
  const GridSpec g = make_grid(-50.0, 50.0, 1.0 / 7.0, 1.0 / 50.0);
  PacketParams p;
  p.x0 = 0.0;
  p.p0 = 0.0;
  const ComplexField initial = analytic_packet(p, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.t_final = 2.0;
  const ComplexField out = evolve(initial, layout, 2.0, cfg);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    const int j = g.n_points - 1 - i;
    worst = std::max(worst, std::abs(std::norm(out.values[i]) - std::norm(out.values[j])));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("regression snapshot: ten barriers at c=1 spread the packet into lobes") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  const ComplexField out = evolve(initial, layout, 2.0, EvolutionConfig{});
  const RealField rho = density(out);

  double peak = 0.0;
  for (double v : rho.values) peak = std::max(peak, v);
  int lobes = 0;
  for (int i = 1; i + 1 < g.n_points; ++i)
    if (rho.values[i] > 0.05 * peak && rho.values[i] > rho.values[i - 1] &&
        rho.values[i] >= rho.values[i + 1])
      ++lobes;
  int lo = 0, hi = g.n_points - 1;
  while (lo < hi && rho.values[lo] < 1e-3 * peak) ++lo;
  while (hi > lo && rho.values[hi] < 1e-3 * peak) --hi;

  // frozen on first computation: the packet leaves the array deformed and
  // far wider than the initial 7.4-unit support
  CHECK(peak == doctest::Approx(0.156013388644).epsilon(1e-9));
  CHECK(lobes == 5);
  CHECK(g.x(lo) == doctest::Approx(-39.857143).epsilon(1e-6));
  CHECK(g.x(hi) == doctest::Approx(48.428571).epsilon(1e-6));
}

TEST_CASE("evolve is deterministic") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({7, 2.0 / 3.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.t_final = 1.0;
  const ComplexField a = evolve(initial, layout, 2.0, cfg);
  const ComplexField b = evolve(initial, layout, 2.0, cfg);
  for (int i = 0; i < g.n_points; ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("snapshots arrive on the configured stride") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.t_final = 2.0;  // 100 steps
  cfg.snapshot_stride = 40;
  std::vector<int> steps;
  ComplexField last{g, {}};
  const ComplexField out = evolve(initial, layout, 2.0, cfg,
                                  [&](int step, const ComplexField& f) {
                                    steps.push_back(step);
                                    last = f;
                                  });
  CHECK(steps == std::vector<int>{0, 40, 80, 100});
  for (int i = 0; i < g.n_points; ++i) CHECK(last.values[i] == out.values[i]);
}

TEST_CASE("config validation") {
  const GridSpec g = default_grid();
  const ComplexField initial = analytic_packet(PacketParams{}, g, 0.0);
  const BarrierLayout layout = build_layout({10, 1.0, 20.0, 2.0});
  EvolutionConfig cfg;
  cfg.t_final = 0.03;  // not a multiple of dt = 0.02
  CHECK_THROWS_AS((void)evolve(initial, layout, 2.0, cfg), std::invalid_argument);

  const GridSpec small = make_grid(-5.0, 5.0, 1.0 / 7.0, 1.0 / 50.0);
  const ComplexField tiny = analytic_packet(PacketParams{}, small, 0.0);
  CHECK_THROWS_AS((void)evolve(tiny, layout, 2.0, EvolutionConfig{}),
                  std::invalid_argument);  // grid does not contain the array
}
