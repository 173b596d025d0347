#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tpstokes/norms.hpp"
#include "tpstokes/profiles.hpp"

using namespace tpstokes;

namespace {
cdouble fd_derivative(const Profile& p, double x, double h = 1e-6) {
  return (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
}
}  // namespace

TEST_CASE("profile evaluation, derivative, trace") {
  Profile p = Profile::exponential(cdouble{2.0, -1.0}, cdouble{0.7, 0.4}, 2);
  p += Profile::sine(2, cdouble{0.5, 0.0}, 10.0);
  p += Profile::cosine(3, cdouble{0.0, 0.25}, 10.0);

  const Profile d = p.derivative();
  for (double x : {0.2, 1.0, 3.7, 8.9}) {
    REQUIRE(std::abs(d.eval(x) - fd_derivative(p, x)) < 1e-7);
  }
  REQUIRE(std::abs(p.trace() - p.eval(0.0)) == 0.0);
}

TEST_CASE("antiderivative inverts the derivative and decays") {
  Profile p = Profile::exponential(cdouble{1.0, 2.0}, cdouble{1.2, -0.3}, 3);
  p += Profile::sine(4, cdouble{0.3, -0.1}, 10.0);
  const Profile a = p.antiderivative();
  const Profile back = a.derivative();
  for (double x : {0.1, 0.9, 4.2}) REQUIRE(std::abs(back.eval(x) - p.eval(x)) < 1e-12);
  // the exponential part of the antiderivative decays (trig terms are box-periodic)
  Profile pure_exp = Profile::exponential(cdouble{1.0, 2.0}, cdouble{1.2, -0.3}, 3);
  REQUIRE(std::abs(pure_exp.antiderivative().eval(60.0)) < 1e-12);

  Profile growing = Profile::exponential(cdouble{1.0, 0.0}, cdouble{-0.5, 0.0});
  REQUIRE_THROWS_AS(growing.antiderivative(), precondition_error);
  Profile constant = Profile::cosine(0, cdouble{1.0, 0.0}, 10.0);
  REQUIRE_THROWS_AS(constant.antiderivative(), precondition_error);
}

TEST_CASE("resolvent solves (D^2 - s^2) y = f") {
  const double s = 1.3;
  auto check = [&](const Profile& f) {
    const Profile y = f.resolvent(s);
    const Profile lhs = y.derivative().derivative() + cdouble{-s * s, 0.0} * y;
    const double scale = std::max(1.0, f.coef_magnitude());
    for (double x : {0.05, 0.7, 2.4, 6.0})
      REQUIRE(std::abs(lhs.eval(x) - f.eval(x)) < 1e-11 * scale);
  };
  check(Profile::exponential(cdouble{1.5, -0.2}, cdouble{2.4, 1.1}, 0));   // non-resonant
  check(Profile::exponential(cdouble{0.3, 0.8}, cdouble{2.4, 1.1}, 3));    // polynomial
  check(Profile::exponential(cdouble{1.0, 0.5}, cdouble{s, 0.0}, 0));     // resonant
  check(Profile::exponential(cdouble{-0.7, 0.1}, cdouble{s, 0.0}, 2));    // resonant, power
  Profile trig = Profile::sine(3, cdouble{1.0, -1.0}, 10.0);
  trig += Profile::cosine(0, cdouble{0.4, 0.0}, 10.0);
  check(trig);
}

TEST_CASE("rebox maps trig modes exactly onto the doubled box") {
  Profile p = Profile::sine(3, cdouble{1.0, 0.5}, 10.0);
  p += Profile::cosine(2, cdouble{-0.3, 0.1}, 10.0);
  const Profile r = p.reboxed(20.0);
  for (double x : {0.3, 4.4, 9.8}) REQUIRE(std::abs(r.eval(x) - p.eval(x)) < 1e-14);
  REQUIRE_THROWS_AS(p.reboxed(15.0), std::invalid_argument);
}

TEST_CASE("profile-field calculus: derivatives and divergence") {
  auto g = tptest::small_grid_2d();
  ProfileField u(g, 2);
  std::vector<Profile> comp{Profile::exponential(cdouble{1.0, 0.2}, cdouble{1.0, 0.0}),
                            Profile::exponential(cdouble{-0.4, 0.9}, cdouble{2.0, 0.5})};
  const int it = g->time_zero_index() + 2;
  const int j = g->tang_zero_index() + 3;
  u.add_hermitian(it, j, 0, comp);

  const auto dt = u.derivative_time();
  const double k = g->time_freq(it);
  REQUIRE(std::abs(dt.find(it, j, 0)->at(0).eval(1.0) - iunit * k * comp[0].eval(1.0)) < 1e-14);

  const auto div = u.divergence();
  const double xi = g->tang_freq(j);
  const cdouble expect = iunit * xi * comp[0].eval(0.5) + comp[1].derivative().eval(0.5);
  REQUIRE(std::abs(div.find(it, j, 0)->at(0).eval(0.5) - expect) < 1e-14);

  REQUIRE(u.hermitian_defect() < 1e-15);
  auto phys = u.to_physical();
  REQUIRE(phys.all_finite());
}
