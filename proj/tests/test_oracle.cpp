#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tpstokes/boundary_solver.hpp"
#include "tpstokes/bvp_oracle.hpp"

using namespace tpstokes;

namespace {

// closed-form boundary-stage profiles for one oscillatory mode
VelocityPressure analytic_mode(const GridPtr& g, int dk, int dj1,
                               const std::array<cdouble, 2>& hp, cdouble hn,
                               Q0Perturbation perturb = Q0Perturbation::none) {
  BoundaryModes m(g, g->dim());
  m.set_hermitian(0, g->time_zero_index() + dk, g->tang_zero_index() + dj1, 0, hp[0]);
  m.set_hermitian(g->dim() - 1, g->time_zero_index() + dk, g->tang_zero_index() + dj1, 0, hn);
  BoundarySolverOptions opt;
  opt.perturb = perturb;
  return solve_boundary_oscillatory(BoundaryData(std::move(m)), opt);
}

}  // namespace

TEST_CASE("oracle: zero boundary data gives zero profiles") {
  const ModePoint mode{1.0, {1.0, 0.0}};
  auto sol = bvp_oracle(mode, {cdouble{}, cdouble{}}, cdouble{}, 1, OracleOptions{512, 5.0, 20.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.nodes.size(); ++i)
    worst = std::max({worst, std::abs(sol.v[0][i]), std::abs(sol.w[i]), std::abs(sol.p[i])});
  REQUIRE(worst < 1e-12);
}

TEST_CASE("oracle preconditions") {
  REQUIRE_THROWS_AS(bvp_oracle(ModePoint{1.0, {1.0, 0.0}}, {cdouble{1, 0}, cdouble{}},
                               cdouble{}, 1, OracleOptions{256, 5.0, 20.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      bvp_oracle(ModePoint{1.0, {0.0, 0.0}}, {cdouble{1, 0}, cdouble{}}, cdouble{}, 1),
      precondition_error);
}

TEST_CASE("oracle agrees with the analytic solution formulas") {
  auto g = tptest::small_grid_2d(4, 12);
  struct Case {
    int dk, dj;
    std::array<cdouble, 2> hp;
    cdouble hn;
  };
  const std::vector<Case> cases = {
      {1, 1, {cdouble{1.0, 0.0}, cdouble{}}, cdouble{}},
      {1, 2, {cdouble{0.3, -0.7}, cdouble{}}, cdouble{0.4, 0.2}},
      {2, -3, {cdouble{-0.5, 0.1}, cdouble{}}, cdouble{0.0, 0.9}},
      {4, 5, {cdouble{0.2, 0.2}, cdouble{}}, cdouble{-0.3, 0.5}},
  };
  for (const auto& c : cases) {
    auto vp = analytic_mode(g, c.dk, c.dj, c.hp, c.hn);
    const int it = g->time_zero_index() + c.dk;
    const int j1 = g->tang_zero_index() + c.dj;
    const ModePoint mode{g->time_freq(it), {g->tang_freq(j1), 0.0}};
    auto oracle = bvp_oracle(mode, c.hp, c.hn, 1, OracleOptions{4096, 6.0, g->x_max()});
    const auto& vel = *vp.velocity.find(it, j1, 0);
    const auto& prs = vp.pressure.find(it, j1, 0)->at(0);
    const double dist = oracle_profile_distance(oracle, vel, prs);
    INFO("mode dk=" << c.dk << " dj=" << c.dj << " dist=" << dist);
    REQUIRE(dist < 1e-6);
  }
}

TEST_CASE("oracle validates the steady (k = 0) boundary profiles") {
  auto g = tptest::small_grid_2d(4, 12);
  BoundaryModes m(g, 2);
  const int j1 = g->tang_zero_index() + 2;
  m.set_hermitian(0, g->time_zero_index(), j1, 0, cdouble{0.8, -0.3});
  m.set_hermitian(1, g->time_zero_index(), j1, 0, cdouble{0.2, 0.5});
  auto vp = solve_boundary_steady(BoundaryData(m));
  const ModePoint mode{0.0, {g->tang_freq(j1), 0.0}};
  auto oracle = bvp_oracle(mode, {cdouble{0.8, -0.3}, cdouble{}}, cdouble{0.2, 0.5}, 1,
                           OracleOptions{4096, 6.0, g->x_max()});
  const auto& vel = *vp.velocity.find(g->time_zero_index(), j1, 0);
  const auto& prs = vp.pressure.find(g->time_zero_index(), j1, 0)->at(0);
  REQUIRE(oracle_profile_distance(oracle, vel, prs) < 1e-6);
}

TEST_CASE("oracle self-convergence is second order") {
  const ModePoint mode{2.0, {1.0, 0.0}};
  const std::array<cdouble, 2> hp{cdouble{0.6, -0.2}, cdouble{}};
  const cdouble hn{0.3, 0.4};
  std::array<OracleModeSolution, 3> sols;
  const std::array<int, 3> sizes{512, 1024, 2048};
  for (int r = 0; r < 3; ++r)
    sols[static_cast<std::size_t>(r)] =
        bvp_oracle(mode, hp, hn, 1, OracleOptions{sizes[static_cast<std::size_t>(r)], 6.0, 20.0});

  // velocity nodes nest under refinement (the pressure midpoints do not)
  auto diff = [&](const OracleModeSolution& a, const OracleModeSolution& b, int stride) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      worst = std::max(worst, std::abs(a.v[0][i] - b.v[0][i * static_cast<std::size_t>(stride)]));
      worst = std::max(worst, std::abs(a.w[i] - b.w[i * static_cast<std::size_t>(stride)]));
    }
    return worst;
  };
  const double e01 = diff(sols[0], sols[1], 2);
  const double e12 = diff(sols[1], sols[2], 2);
  const double order = std::log2(e01 / e12);
  INFO("e01=" << e01 << " e12=" << e12 << " order=" << order);
  REQUIRE(order > 1.8);
  REQUIRE(order < 2.2);
}

TEST_CASE("oracle detects an injected q0 sign error") {
  auto g = tptest::small_grid_2d(4, 12);
  const std::array<cdouble, 2> hp{cdouble{0.3, -0.7}, cdouble{}};
  const cdouble hn{0.4, 0.2};
  auto bad = analytic_mode(g, 1, 2, hp, hn, Q0Perturbation::flip_xi_hn_sign);
  const int it = g->time_zero_index() + 1;
  const int j1 = g->tang_zero_index() + 2;
  const ModePoint mode{g->time_freq(it), {g->tang_freq(j1), 0.0}};
  auto oracle = bvp_oracle(mode, hp, hn, 1, OracleOptions{4096, 6.0, g->x_max()});
  const auto& vel = *bad.velocity.find(it, j1, 0);
  const auto& prs = bad.pressure.find(it, j1, 0)->at(0);
  REQUIRE(oracle_profile_distance(oracle, vel, prs) > 1e-3);
}
