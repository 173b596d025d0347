#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tpstokes/marcinkiewicz.hpp"
#include "tpstokes/symbols.hpp"

using namespace tpstokes;

TEST_CASE("principal root: lambda^2 = |xi|^2 + ik, Re lambda > 0 off the origin") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (int trial = 0; trial < 5000; ++trial) {
    ModePoint m{dist(rng), {dist(rng), dist(rng)}};
    if (m.is_origin()) continue;
    const cdouble lam = m.lambda();
    const cdouble target{m.xi_norm2(), m.k};
    REQUIRE(std::abs(lam * lam - target) <= 1e-12 * std::abs(target));
    REQUIRE(lam.real() > 0.0);
  }
}

TEST_CASE("q0 formula: paper substitution values at k = 1, xi = (1, 0)") {
  const ModePoint m{1.0, {1.0, 0.0}};
  const cdouble root = std::sqrt(cdouble{1.0, 1.0});

  // h' = 0, h_n = 1  ->  q0 = sqrt(1+i) + 1 + i
  const cdouble a = q0_symbol(m, {cdouble{}, cdouble{}}, cdouble{1.0, 0.0});
  REQUIRE(std::abs(a - (root + cdouble{1.0, 1.0})) < 1e-14);

  // h' = (1, 0), h_n = 0  ->  q0 = -i (1 + sqrt(1+i))
  const cdouble b = q0_symbol(m, {cdouble{1.0, 0.0}, cdouble{}}, cdouble{});
  REQUIRE(std::abs(b - (-iunit * (cdouble{1.0, 0.0} + root))) < 1e-14);

  // zero data -> zero
  REQUIRE(q0_symbol(m, {cdouble{}, cdouble{}}, cdouble{}) == cdouble{});
}

TEST_CASE("q0 preconditions") {
  REQUIRE_THROWS_AS(q0_symbol(ModePoint{0.0, {1.0, 0.0}}, std::array<cdouble, 2>{cdouble{1, 0}, cdouble{}}, cdouble{}),
                    precondition_error);
  REQUIRE_THROWS_AS(q0_symbol(ModePoint{1.0, {0.0, 0.0}}, std::array<cdouble, 2>{}, cdouble{1.0, 0.0}),
                    precondition_error);
  // xi = 0 with h_n = 0 is fine and gives q0 = 0
  REQUIRE(q0_symbol(ModePoint{1.0, {0.0, 0.0}}, std::array<cdouble, 2>{cdouble{2.0, 1.0}, cdouble{}}, cdouble{}) == cdouble{});
}

TEST_CASE("q1 + q2 recompose q0; q2 = (ik/|xi|) h_n") {
  const ModePoint m{1.0, {1.0, 0.0}};
  const auto [q1, q2] = q1_q2_split(m, {cdouble{}, cdouble{}}, cdouble{1.0, 0.0});
  REQUIRE(std::abs(q2 - iunit) < 1e-15);

  // h_n = 0 -> q2 = 0 and q1 = q0
  const auto [p1, p2] = q1_q2_split(m, {cdouble{0.3, -1.2}, cdouble{}}, cdouble{});
  REQUIRE(p2 == cdouble{});
  REQUIRE(std::abs(p1 - q0_symbol(m, {cdouble{0.3, -1.2}, cdouble{}}, cdouble{})) < 1e-15);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int trial = 0; trial < 3000; ++trial) {
    ModePoint mode{dist(rng), {dist(rng), dist(rng)}};
    if (mode.k == 0.0 || mode.xi_norm() < 1e-3) continue;
    const std::array<cdouble, 2> hp{cdouble{dist(rng), dist(rng)}, cdouble{dist(rng), dist(rng)}};
    const cdouble hn{dist(rng), dist(rng)};
    const cdouble q0 = q0_symbol(mode, hp, hn);
    const auto [r1, r2] = q1_q2_split(mode, hp, hn);
    REQUIRE(std::abs(r1 + r2 - q0) <= 1e-14 * std::max(1.0, std::abs(q0)));
  }
}

TEST_CASE("perturbed q0 differs from the true symbol") {
  const ModePoint m{1.0, {1.0, 0.0}};
  const cdouble good = q0_symbol(m, std::array<cdouble, 2>{}, cdouble{1.0, 0.0});
  const cdouble bad = q0_symbol(m, std::array<cdouble, 2>{}, cdouble{1.0, 0.0}, Q0Perturbation::flip_xi_hn_sign);
  REQUIRE(std::abs(good - bad) == Catch::Approx(2.0));
}

TEST_CASE("multiplier symbols M, M1, M2") {
  REQUIRE(std::abs(symbol_M(0.0, 2.7) - cdouble{1.0, 0.0}) < 1e-15);
  REQUIRE(std::abs(std::abs(symbol_M2(3.1, 0.0)) - 1.0) < 1e-14);
  REQUIRE_THROWS_AS(symbol_M(1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(symbol_M1(1.0, {0.0, 0.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(symbol_M2(0.0, 0.0), std::invalid_argument);

  // |M| <= 1 over a log-spaced sweep
  double worst = 0.0;
  for (int a = -40; a <= 40; ++a)
    for (int b = -40; b <= 40; ++b) {
      const double eta = (a < 0 ? -1 : 1) * std::pow(10.0, std::abs(a) / 8.0 - 3.0);
      const double xi = std::pow(10.0, std::abs(b) / 8.0 - 3.0);
      worst = std::max(worst, std::abs(symbol_M(eta, xi)));
    }
  REQUIRE(worst <= 1.0 + 1e-12);

  // M1 magnitude equals |M2| for n = 2 (unit tangential direction)
  const auto m1 = symbol_M1(2.0, {1.5, 0.0});
  REQUIRE(std::abs(std::abs(m1[0]) - std::abs(symbol_M2(2.0, 1.5))) < 1e-14);
}

TEST_CASE("heat-profile symbol values and x_n sweep") {
  REQUIRE(symbol_heat_profile(1.0, 2.0, 0.0, 0) == cdouble{1.0, 0.0});
  REQUIRE(symbol_heat_profile(1.0, 2.0, 0.0, 3) == cdouble{});
  REQUIRE_THROWS_AS(symbol_heat_profile(1.0, 2.0, -0.5, 0), std::invalid_argument);

  // sup over x_n of |(lambda x) e^{-lambda x}| stays finite and decays
  for (double eta : {0.0, 0.5, 8.0}) {
    for (double xi : {0.25, 1.0, 16.0}) {
      double sup = 0.0;
      for (double x = 0.0; x <= 100.0; x += 0.05)
        sup = std::max(sup, std::abs(symbol_heat_profile(eta, xi, x, 1)));
      REQUIRE(std::isfinite(sup));
      REQUIRE(sup < 10.0);
      REQUIRE(std::abs(symbol_heat_profile(eta, xi, 100.0, 1)) < 1e-9);
    }
  }
}

TEST_CASE("marcinkiewicz audit: constant symbol") {
  auto report = marcinkiewicz_audit(
      [](double, const std::array<double, 2>&) { return cdouble{1.0, 0.0}; }, "one", 1);
  for (const auto& e : report.entries) {
    if (e.mask == 0) {
      REQUIRE(e.sup == Catch::Approx(1.0));
    } else {
      REQUIRE(e.sup < 1e-8);
    }
  }
  REQUIRE_FALSE(report.suspected_unbounded);
}

TEST_CASE("marcinkiewicz audit: M, M1, M2 finite and refinement-stable") {
  const std::vector<std::pair<std::string, SymbolFn>> symbols = {
      {"M", [](double eta, const std::array<double, 2>& xi) {
         return symbol_M(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
       }},
      {"M1", [](double eta, const std::array<double, 2>& xi) { return symbol_M1(eta, xi)[0]; }},
      {"M2", [](double eta, const std::array<double, 2>& xi) {
         return symbol_M2(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
       }}};
  for (const auto& [name, fn] : symbols) {
    auto coarse = marcinkiewicz_audit(fn, name, 1, 1);
    auto fine = marcinkiewicz_audit(fn, name, 1, 2);
    REQUIRE_FALSE(coarse.suspected_unbounded);
    REQUIRE(std::isfinite(coarse.max_sup()));
    REQUIRE(fine.max_sup() >= coarse.max_sup() - 1e-12);
    REQUIRE(fine.max_sup() <= coarse.max_sup() * 1.05);
  }
}

TEST_CASE("marcinkiewicz audit flags 1/|xi|") {
  auto report = marcinkiewicz_audit(
      [](double, const std::array<double, 2>& xi) {
        return cdouble{1.0 / std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]), 0.0};
      },
      "inv_xi", 1);
  REQUIRE(report.suspected_unbounded);
}

TEST_CASE("marcinkiewicz audit: x_n profile family uniformly bounded") {
  double sup = 0.0;
  for (double xn : {0.01, 0.1, 1.0, 10.0}) {
    auto rep = marcinkiewicz_audit(
        [xn](double eta, const std::array<double, 2>& xi) {
          return symbol_heat_profile(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]), xn, 1);
        },
        "heat_profile", 1);
    REQUIRE_FALSE(rep.suspected_unbounded);
    sup = std::max(sup, rep.max_sup());
  }
  REQUIRE(std::isfinite(sup));
  REQUIRE(sup < 1e3);
}
