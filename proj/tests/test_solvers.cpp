#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tpstokes/manufactured.hpp"
#include "tpstokes/residuals.hpp"
#include "tpstokes/stokes_solver.hpp"

using namespace tpstokes;

namespace {

BoundaryData single_mode_boundary(const GridPtr& g, int dk, int dj1, int dj2,
                                  const std::vector<cdouble>& comps) {
  BoundaryModes m(g, g->dim());
  for (int c = 0; c < g->dim(); ++c)
    m.set_hermitian(c, g->time_zero_index() + dk, g->tang_zero_index() + dj1,
                    g->dim() == 3 ? g->tang_zero_index() + dj2 : 0, comps[static_cast<std::size_t>(c)]);
  return BoundaryData(std::move(m));
}

// evaluates the per-mode momentum/divergence residual profiles of a
// velocity/pressure pair at the grid nodes
double max_mode_residual(const VelocityPressure& vp) {
  const auto& g = vp.velocity.grid();
  ProfileField zero_f(vp.velocity.grid_ptr(), g.dim());
  ProfileField mom = momentum_residual_field(vp.velocity, vp.pressure, zero_f);
  ProfileField div = vp.velocity.divergence();
  double worst = 0.0;
  for (const auto* field : {&mom, &div})
    for (const auto& [key, profs] : field->modes())
      for (const auto& p : profs)
        for (double x : g.normal_nodes()) worst = std::max(worst, std::abs(p.eval(x)));
  return worst;
}

}  // namespace

TEST_CASE("oscillatory boundary solve: zero data, zero solution") {
  auto g = tptest::small_grid_2d();
  BoundaryData H{BoundaryModes(g, 2)};
  auto out = solve_boundary_oscillatory(H);
  REQUIRE(out.velocity.mode_count() == 0);
  REQUIRE(out.pressure.mode_count() == 0);
}

TEST_CASE("oscillatory boundary solve: preconditions") {
  auto g = tptest::small_grid_2d();
  // time-independent datum
  auto steady = single_mode_boundary(g, 0, 1, 0, {cdouble{1.0, 0.0}, cdouble{}});
  REQUIRE_THROWS_AS(solve_boundary_oscillatory(steady), precondition_error);
  // normal datum with nonzero tangential mean at k != 0
  auto bad = single_mode_boundary(g, 1, 0, 0, {cdouble{}, cdouble{0.3, 0.1}});
  REQUIRE_THROWS_MATCHES(solve_boundary_oscillatory(bad), precondition_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("k index")));
}

TEST_CASE("oscillatory boundary solve: exact trace, divergence, momentum") {
  for (auto g : {tptest::small_grid_2d(), tptest::small_grid_3d()}) {
    BoundaryModes m(g, g->dim());
    // several modes including a xi = 0 mode with tangential-only datum
    m.set_hermitian(0, g->time_zero_index() + 1, g->tang_zero_index() + 2,
                    g->dim() == 3 ? g->tang_zero_index() + 1 : 0, cdouble{0.7, -0.2});
    m.set_hermitian(g->dim() - 1, g->time_zero_index() + 1, g->tang_zero_index() + 2,
                    g->dim() == 3 ? g->tang_zero_index() + 1 : 0, cdouble{-0.4, 0.9});
    m.set_hermitian(0, g->time_zero_index() + 2, g->tang_zero_index(), 0, cdouble{0.5, 0.5});
    BoundaryData H(std::move(m));
    auto out = solve_boundary_oscillatory(H);

    // trace reproduces H
    BoundaryModes tr = out.velocity.trace();
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.raw().size(); ++i)
      worst = std::max(worst, std::abs(tr.raw()[i] - H.modes.raw()[i]));
    REQUIRE(worst < 1e-12);

    // purely oscillatory output, Hermitian closure, exact identities
    REQUIRE(out.velocity.steady_magnitude() == 0.0);
    REQUIRE(out.velocity.hermitian_defect() < 1e-12);
    REQUIRE(max_mode_residual(out) < 1e-12);
  }
}

TEST_CASE("heat lift: zero forcing, single odd mode, boundary trace") {
  auto g = tptest::small_grid_2d();
  ProfileField zero(g, 2);
  REQUIRE(solve_heat_dirichlet_zero(zero).mode_count() == 0);

  // single odd-in-x_n mode: v_hat = f_hat / (ik + |xi_bar|^2)
  ProfileField f(g, 2);
  const int it = g->time_zero_index() + 2, j1 = g->tang_zero_index() + 1;
  const int m = 4;
  const cdouble amp{1.3, -0.8};
  f.add_hermitian(it, j1, 0, {Profile::sine(m, amp, g->x_max()), Profile()});
  auto v = solve_heat_dirichlet_zero(f);
  const double k = g->time_freq(it), xi = g->tang_freq(j1);
  const double zeta = pi * m / g->x_max();
  const cdouble expect = amp / cdouble{xi * xi + zeta * zeta, k};
  REQUIRE(std::abs(v.find(it, j1, 0)->at(0).sin_c[m] - expect) < 1e-14 * std::abs(expect));

  // substituting back into the heat equation recovers f
  ProfileField heat_res = v.derivative_time();
  heat_res += cdouble{-1.0, 0.0} * v.laplacian();
  heat_res += cdouble{-1.0, 0.0} * f;
  REQUIRE(lq_norm_profile(heat_res, 2.0) < 1e-13);

  // Dirichlet-zero boundary value
  REQUIRE(v.trace().max_abs() < 1e-12);

  // steady content rejected
  ProfileField fs(g, 2);
  fs.add_hermitian(g->time_zero_index(), j1, 0, {Profile::sine(1, cdouble{1, 0}, g->x_max()), Profile()});
  REQUIRE_THROWS_AS(solve_heat_dirichlet_zero(fs), precondition_error);
}

TEST_CASE("divergence corrector: formulas, exact divergence, odd symmetry") {
  auto g = tptest::small_grid_2d();
  ProfileField zero(g, 1);
  auto none = solve_divergence_corrector(zero);
  REQUIRE(none.velocity.mode_count() == 0);

  ProfileField G(g, 1);
  const int it = g->time_zero_index() + 1, j1 = g->tang_zero_index() + 2;
  const int m = 3;
  const cdouble amp{0.6, 0.2};
  G.add_hermitian(it, j1, 0, {Profile::cosine(m, amp, g->x_max())});
  auto out = solve_divergence_corrector(G);

  const double k = g->time_freq(it), xi = g->tang_freq(j1);
  const double zeta = pi * m / g->x_max();
  const double b2 = xi * xi + zeta * zeta;
  const auto& vel = *out.velocity.find(it, j1, 0);
  REQUIRE(std::abs(vel[0].cos_c[m] - (-iunit * xi * amp / b2)) < 1e-14);
  REQUIRE(std::abs(vel[1].sin_c[m] - zeta * amp / b2) < 1e-14);
  REQUIRE(std::abs(out.pressure.find(it, j1, 0)->at(0).cos_c[m] - cdouble{b2, k} / b2 * amp) < 1e-14);

  // div w = G exactly; w_n vanishes on the boundary by odd symmetry
  ProfileField dv = out.velocity.divergence();
  dv += cdouble{-1.0, 0.0} * G;
  REQUIRE(lq_norm_profile(dv, 2.0) < 1e-14);
  BoundaryModes tw = out.velocity.trace();
  REQUIRE(std::abs(tw.at(1, it, j1, 0)) == 0.0);

  // momentum with its own pressure is satisfied
  ProfileField zf(g, 2);
  REQUIRE(lq_norm_profile(momentum_residual_field(out.velocity, out.pressure, zf), 2.0) < 1e-13);

  // random mean-free G: spectral divergence identity
  ProfileField G2(g, 1);
  Profile mix = Profile::cosine(1, cdouble{0.3, -0.5}, g->x_max());
  mix += Profile::cosine(4, cdouble{-0.2, 0.15}, g->x_max());
  G2.add_hermitian(g->time_zero_index() + 3, g->tang_zero_index() - 1, 0, {mix});
  auto out2 = solve_divergence_corrector(G2);
  ProfileField dv2 = out2.velocity.divergence();
  dv2 += cdouble{-1.0, 0.0} * G2;
  REQUIRE(lq_norm_profile(dv2, 2.0) < 1e-14);

  // nonzero extension mean at xi = 0 is singular
  ProfileField bad(g, 1);
  bad.add_hermitian(it, g->tang_zero_index(), 0, {Profile::cosine(0, cdouble{1.0, 0.0}, g->x_max())});
  REQUIRE_THROWS_MATCHES(solve_divergence_corrector(bad), precondition_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("extension mean")));
}

TEST_CASE("steady solve: zero data, pure pressure, precondition errors") {
  auto g = tptest::small_grid_2d();
  ProfileField f0(g, 2), g0(g, 1);
  BoundaryData h0{BoundaryModes(g, 2)};
  auto none = solve_steady(f0, g0, h0);
  REQUIRE(none.velocity.mode_count() == 0);

  // pure-pressure forcing: f0 = grad Phi, Phi = e^{-s x} plane wave
  const int j1 = g->tang_zero_index() + 2;
  const double xi = g->tang_freq(j1);
  const double s = std::abs(xi);
  ProfileField fp(g, 2);
  fp.add_hermitian(g->time_zero_index(), j1, 0,
                   {Profile::exponential(iunit * xi, cdouble{s, 0.0}),
                    Profile::exponential(cdouble{-s, 0.0}, cdouble{s, 0.0})});
  auto out = solve_steady(fp, g0, h0);
  REQUIRE(lq_norm_profile(out.velocity, 2.0) < 1e-13);
  // grad Pi recovers f0
  ProfileField gradp = pressure_gradient(out.pressure);
  gradp += cdouble{-1.0, 0.0} * fp;
  REQUIRE(lq_norm_profile(gradp, 2.0) < 1e-8);

  // incompatible xi = 0 normal datum
  BoundaryModes badm(g, 2);
  badm.set_hermitian(1, g->time_zero_index(), g->tang_zero_index(), 0, cdouble{0.4, 0.0});
  REQUIRE_THROWS_AS(solve_steady(f0, g0, BoundaryData(std::move(badm))), precondition_error);

  // time-dependent data rejected
  ProfileField fosc(g, 2);
  fosc.add_hermitian(g->time_zero_index() + 1, j1, 0,
                     {Profile::exponential(cdouble{1, 0}, cdouble{1, 0}), Profile()});
  REQUIRE_THROWS_AS(solve_steady(fosc, g0, h0), precondition_error);
}

TEST_CASE("steady solve satisfies the steady system for mixed data") {
  for (auto g : {tptest::small_grid_2d(), tptest::small_grid_3d()}) {
    const int n = g->dim();
    const int it = g->time_zero_index();
    ProfileField f0(g, n), g0(g, 1);
    BoundaryModes hm(g, n);

    // exponential forcing (resonant and non-resonant rates), trig divergence
    const int j1 = g->tang_zero_index() + 2;
    const int j2 = n == 3 ? g->tang_zero_index() - 1 : 0;
    const auto xi = g->tang_freqs(j1, j2);
    const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
    std::vector<Profile> fv(static_cast<std::size_t>(n));
    fv[0] = Profile::exponential(cdouble{0.8, -0.1}, cdouble{1.7, 0.0});
    fv[0] += Profile::exponential(cdouble{-0.3, 0.4}, cdouble{s, 0.0});  // resonant branch
    fv[static_cast<std::size_t>(n - 1)] = Profile::exponential(cdouble{0.2, 0.6}, cdouble{2.3, 0.0});
    f0.add_hermitian(it, j1, j2, fv);
    g0.add_hermitian(it, j1, j2, {Profile::cosine(2, cdouble{0.5, -0.2}, g->x_max())});
    hm.set_hermitian(0, it, j1, j2, cdouble{0.9, 0.3});
    hm.set_hermitian(n - 1, it, j1, j2, cdouble{-0.1, 0.7});
    BoundaryData h0(std::move(hm));

    auto out = solve_steady(f0, g0, h0);

    // residuals of the steady system (momentum without d_t)
    ProfileField mom = cdouble{-1.0, 0.0} * out.velocity.laplacian();
    mom += pressure_gradient(out.pressure);
    mom += cdouble{-1.0, 0.0} * f0;
    REQUIRE(lq_norm_profile(mom, 2.0) < 1e-11);

    ProfileField dv = out.velocity.divergence();
    dv += cdouble{-1.0, 0.0} * g0;
    REQUIRE(lq_norm_profile(dv, 2.0) < 1e-11);

    BoundaryModes tr = out.velocity.trace();
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.raw().size(); ++i)
      worst = std::max(worst, std::abs(tr.raw()[i] - h0.modes.raw()[i]));
    REQUIRE(worst < 1e-12);
  }
}

TEST_CASE("solve_full: boundary-only data short-circuits to the boundary stage") {
  auto g = tptest::small_grid_2d();
  ProfileField f(g, 2), gd(g, 1);
  auto H = single_mode_boundary(g, 1, 2, 0, {cdouble{0.8, -0.4}, cdouble{0.5, 0.25}});
  auto sol = solve_full(f, gd, H);
  auto direct = solve_boundary_oscillatory(H);

  ProfileField diff = sol.u;
  diff += cdouble{-1.0, 0.0} * direct.velocity;
  REQUIRE(lq_norm_profile(diff, 2.0) < 1e-13);
  REQUIRE(sol.stage("heat_lift")->velocity.mode_count() == 0);
  REQUIRE(sol.stage("corrector")->velocity.mode_count() == 0);
}

TEST_CASE("solve_full: divergence matches g spectrally") {
  auto g = tptest::small_grid_2d();
  ProfileField f(g, 2), gd(g, 1);
  gd.add_hermitian(g->time_zero_index() + 1, g->tang_zero_index() + 1, 0,
                   {Profile::cosine(2, cdouble{0.7, 0.1}, g->x_max())});
  BoundaryData h{BoundaryModes(g, 2)};
  auto sol = solve_full(f, gd, h);
  ProfileField dv = sol.u.divergence();
  dv += cdouble{-1.0, 0.0} * gd;
  REQUIRE(lq_norm_profile(dv, 2.0) < 1e-10);
}

TEST_CASE("solve_full is linear in the data") {
  auto g = tptest::small_grid_2d();
  auto b1 = recipe_single_mode_swirl(g);
  auto b2 = recipe_divergence_pump(g);

  const double a = 2.0;  // real scaling keeps data real
  ProfileField f = b1.f;
  f += cdouble{a, 0.0} * ProfileField(b2.f);
  ProfileField gd = b1.g;
  gd += cdouble{a, 0.0} * ProfileField(b2.g);
  BoundaryData h = b1.h;
  for (std::size_t i = 0; i < h.modes.raw().size(); ++i)
    h.modes.raw()[i] += a * b2.h.modes.raw()[i];

  auto sol = solve_full(f, gd, h);
  auto s1 = solve_full(b1.f, b1.g, b1.h);
  auto s2 = solve_full(b2.f, b2.g, b2.h);

  ProfileField expect = s1.u;
  expect += cdouble{a, 0.0} * ProfileField(s2.u);
  ProfileField diff = sol.u;
  diff += cdouble{-1.0, 0.0} * expect;
  const double scale = std::max(1.0, expect.max_coef_magnitude());
  REQUIRE(lq_norm_profile(diff, 2.0) < 1e-12 * scale);
}

TEST_CASE("uniqueness: two lifting paths agree; pressure gauge is time-only") {
  auto g = tptest::small_grid_2d();
  auto bundle = recipe_mixed_ensemble(g);
  auto osc_f = bundle.f.oscillatory_part();
  auto osc_g = bundle.g.oscillatory_part();
  auto osc_h = boundary_oscillatory_part(bundle.h);

  // path A: standard composition
  auto a = solve_full(osc_f, osc_g, osc_h);

  // path B: boundary lift first, then heat + corrector, then a second
  // boundary solve for the corrector's trace
  auto ub = solve_boundary_oscillatory(osc_h);
  auto v = solve_heat_dirichlet_zero(osc_f);
  ProfileField G = osc_g;
  ProfileField dvv = v.divergence();
  G += cdouble{-1.0, 0.0} * dvv;
  G.compact(1e-15 * std::max(1.0, G.max_coef_magnitude()));
  auto corr = solve_divergence_corrector(G);
  BoundaryData h2{BoundaryModes(g, 2)};
  BoundaryModes tw = corr.velocity.trace();
  for (std::size_t i = 0; i < h2.modes.raw().size(); ++i) h2.modes.raw()[i] = -tw.raw()[i];
  auto ub2 = solve_boundary_oscillatory(h2);

  ProfileField u_b = ub.velocity;
  u_b += v;
  u_b += corr.velocity;
  u_b += ub2.velocity;
  ProfileField p_b = ub.pressure;
  p_b += corr.pressure;
  p_b += ub2.pressure;
  // inject a pure time-function pressure shift: the gauge the theory mods out
  p_b.mode(g->time_zero_index() + 1, g->tang_zero_index(), 0)[0] +=
      Profile::exponential(cdouble{0.5, 0.0}, cdouble{});
  p_b.mode(g->time_zero_index() - 1, g->tang_zero_index(), 0)[0] +=
      Profile::exponential(cdouble{0.5, 0.0}, cdouble{});

  ProfileField du = a.u;
  du += cdouble{-1.0, 0.0} * u_b;
  REQUIRE(lq_norm_profile(du, 2.0) < 1e-8);

  ProfileField dp = a.p;
  dp += cdouble{-1.0, 0.0} * p_b;
  REQUIRE(lq_norm_profile(pressure_gradient(dp), 2.0) < 1e-8);
  REQUIRE(lq_norm_profile(dp, 2.0) > 0.1);  // the gauge itself is visible
}

TEST_CASE("uniqueness under box doubling with in-band data") {
  auto g1 = tptest::small_grid_2d();
  auto g2 = make_grid(g1->tau(), 2, g1->time_half_modes(), 2 * g1->tang_half_modes(),
                      g1->box_length(), graded_normal_grid(2.0 * g1->x_max(), 48));
  // NB: tangential resolution is irrelevant here; frequencies are identified
  // by their offset from the zero index on each grid.

  // normal-component sine forcing: its odd extension and the induced
  // divergence (a cosine series) are the same global functions on both
  // boxes, so the two liftings solve the same problem exactly
  ProfileField f1(g1, 2), g1d(g1, 1);
  f1.add_hermitian(g1->time_zero_index() + 1, g1->tang_zero_index() + 1, 0,
                   {Profile(), Profile::sine(3, cdouble{0.4, -0.2}, g1->x_max())});
  auto h = single_mode_boundary(g1, 1, 2, 0, {cdouble{0.3, 0.6}, cdouble{-0.2, 0.1}});
  auto sol1 = solve_full(f1, g1d, h);

  ProfileField f2(g2, 2), g2d(g2, 1);
  for (const auto& [key, profs] : f1.modes()) {
    const int it2 = key[0] - g1->time_zero_index() + g2->time_zero_index();
    const int jx2 = key[1] - g1->tang_zero_index() + g2->tang_zero_index();
    f2.mode(it2, jx2, 0) = {profs[0].reboxed(g2->x_max()), profs[1].reboxed(g2->x_max())};
  }

  BoundaryModes hm2(g2, 2);
  hm2.set_hermitian(0, g2->time_zero_index() + 1, g2->tang_zero_index() + 2, 0, cdouble{0.3, 0.6});
  hm2.set_hermitian(1, g2->time_zero_index() + 1, g2->tang_zero_index() + 2, 0, cdouble{-0.2, 0.1});
  auto sol2 = solve_full(f2, g2d, BoundaryData(std::move(hm2)));

  double worst = 0.0;
  for (const auto& [key, profs] : sol1.u.modes()) {
    const int it2 = key[0] - g1->time_zero_index() + g2->time_zero_index();
    const int jx2 = key[1] - g1->tang_zero_index() + g2->tang_zero_index();
    const auto* other = sol2.u.find(it2, jx2, 0);
    REQUIRE(other != nullptr);
    for (int c = 0; c < 2; ++c)
      for (double x : g1->normal_nodes())
        worst = std::max(worst, std::abs(profs[static_cast<std::size_t>(c)].eval(x) -
                                         (*other)[static_cast<std::size_t>(c)].eval(x)));
  }
  REQUIRE(worst < 1e-8);
}
