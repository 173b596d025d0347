#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tpstokes/estimates.hpp"
#include "tpstokes/manufactured.hpp"

using namespace tpstokes;

namespace {

double relative_field_error(const ProfileField& got, const ProfileField& expect, double q = 2.0) {
  ProfileField diff = got;
  diff += cdouble{-1.0, 0.0} * expect;
  const double denom = lq_norm_profile(expect, q);
  return denom == 0.0 ? lq_norm_profile(diff, q) : lq_norm_profile(diff, q) / denom;
}

}  // namespace

TEST_CASE("pressure gauge recipe: all data vanish") {
  auto g = tptest::small_grid_2d();
  auto b = recipe_pressure_gauge(g);
  REQUIRE(b.f.mode_count() == 0);
  REQUIRE(b.g.mode_count() == 0);
  REQUIRE(b.h.modes.max_abs() == 0.0);
  REQUIRE(lq_norm_profile(b.p, 2.0) > 0.0);
}

TEST_CASE("every recipe is self-consistent to 1e-12") {
  for (auto g : {tptest::small_grid_2d(), tptest::small_grid_3d()}) {
    for (const auto& name : manufactured_catalogue()) {
      auto b = manufactured_solution(name, g);
      auto rep = residual_check(b.u, b.p, b.f, b.g, b.h);
      INFO("recipe " << name << " on n=" << g->dim() << ": momentum " << rep.momentum
                     << " div " << rep.divergence << " trace " << rep.trace);
      REQUIRE(rep.worst() < 1e-12);
    }
  }
}

TEST_CASE("unknown recipe names are rejected") {
  auto g = tptest::small_grid_2d();
  REQUIRE_THROWS_AS(manufactured_solution("no_such_recipe", g), std::invalid_argument);
}

TEST_CASE("insufficient decay within the box is an error") {
  auto g = tptest::small_grid_2d();
  ManufacturedBundle b;
  b.name = "slow";
  b.u = ProfileField(g, 2);
  b.p = ProfileField(g, 1);
  b.u.add_hermitian(g->time_zero_index() + 1, g->tang_zero_index() + 1, 0,
                    {Profile::exponential(cdouble{1.0, 0.0}, cdouble{0.05, 0.0}), Profile()});
  REQUIRE_THROWS_MATCHES(detail::finalize_bundle(b), precondition_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("decays insufficiently")));
}

TEST_CASE("solve_full recovers every catalogue recipe to 1e-6") {
  for (auto g : {tptest::small_grid_2d(), tptest::small_grid_3d()}) {
    for (const auto& name : manufactured_catalogue()) {
      auto b = manufactured_solution(name, g);
      auto sol = solve_full(b.f, b.g, b.h);
      const double eu = relative_field_error(sol.u, b.u);
      const double ep = relative_field_error(pressure_gradient(sol.p), pressure_gradient(b.p));
      INFO("recipe " << name << " n=" << g->dim() << ": |u-u*| " << eu << " |grad(p-p*)| " << ep);
      REQUIRE(eu < 1e-6);
      REQUIRE(ep < 1e-6);

      // residuals of the computed solution against the data
      auto rep = residual_check(sol, b.f, b.g, b.h);
      REQUIRE(rep.worst() < 1e-10);
    }
  }
}

TEST_CASE("residual_check: zero candidate against nonzero forcing") {
  auto g = tptest::small_grid_2d();
  auto b = recipe_interior_heat_mode(g);
  ProfileField zero_u(g, 2), zero_p(g, 1);
  auto rep = residual_check(zero_u, zero_p, b.f, b.g, b.h);
  REQUIRE(rep.momentum == Catch::Approx(lq_norm_profile(b.f, 2.0)).epsilon(1e-12));
  REQUIRE(rep.divergence == Catch::Approx(lq_norm_profile(b.g, 2.0)).epsilon(1e-12));
}

TEST_CASE("residual_check rejects mismatched grids") {
  auto g1 = tptest::small_grid_2d();
  auto g2 = tptest::small_grid_2d(4, 10);
  auto b = recipe_single_mode_swirl(g1);
  ProfileField u(g2, 2), p(g2, 1);
  REQUIRE_THROWS_AS(residual_check(u, p, b.f, b.g, b.h), std::invalid_argument);
}

TEST_CASE("residuals drop tenfold per resolution doubling until the floor") {
  const std::uint64_t seed = 2024;
  auto ref = tptest::small_grid_2d(16, 32);
  auto data_ref = spectral_tail_data(ref, seed);

  double prev = -1.0;
  int drops = 0;
  for (int level = 0; level < 3; ++level) {
    const int K = 2 << level;     // 2, 4, 8
    const int N = 2 * (2 << level);
    auto gr = tptest::small_grid_2d(K, N);
    auto data = spectral_tail_data(gr, seed);
    auto sol = solve_full(data.f, data.g, data.h);
    auto rep = residual_check(sol.u.regrid(ref), sol.p.regrid(ref), data_ref.f, data_ref.g,
                              data_ref.h);
    const double worst = rep.worst();
    INFO("level " << level << " residual " << worst);
    if (prev > 0.0 && prev > 1e-10) {
      REQUIRE(worst < prev / 10.0);
      ++drops;
    }
    prev = worst;
  }
  REQUIRE(drops >= 2);
}

TEST_CASE("perturbed q0 breaks manufactured recovery") {
  auto g = tptest::small_grid_2d();
  auto b = recipe_mixed_ensemble(g);
  SolverOptions opt;
  opt.boundary.perturb = Q0Perturbation::flip_xi_hn_sign;
  auto sol = solve_full(b.f, b.g, b.h, opt);
  REQUIRE(relative_field_error(sol.u, b.u) > 1e-3);
}
