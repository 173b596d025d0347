#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tpstokes/estimates.hpp"

using namespace tpstokes;

TEST_CASE("zero bundles are reported as degenerate") {
  auto g = tptest::small_grid_2d();
  std::vector<DataBundle> bundles{
      {ProfileField(g, 2), ProfileField(g, 1), BoundaryData{BoundaryModes(g, 2)}}};
  auto report = estimate_constant_sweep(bundles, 2.0);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) REQUIRE(row.degenerate);
}

TEST_CASE("seeded ensembles give finite ratios at q = 2 and q = 4") {
  auto g = tptest::small_grid_2d(4, 12);
  auto bundles = random_bundle_ensemble(g, 6, 77, 3, 4);
  for (double q : {2.0, 4.0}) {
    auto report = estimate_constant_sweep(bundles, q);
    int rated = 0;
    for (const auto& row : report.rows) {
      if (row.degenerate) continue;
      REQUIRE(std::isfinite(row.ratio));
      REQUIRE(row.ratio > 0.0);
      ++rated;
    }
    REQUIRE(rated >= 6);
    REQUIRE(report.max_ratio("oscillatory") > 0.0);
    REQUIRE(report.median_ratio("oscillatory") <= report.max_ratio("oscillatory"));
  }
}

TEST_CASE("ratios are exactly invariant under data scaling") {
  auto g = tptest::small_grid_2d(4, 12);
  auto bundles = random_bundle_ensemble(g, 2, 11, 3, 4);
  std::vector<DataBundle> scaled;
  for (const auto& b : bundles) scaled.push_back(scale_bundle(b, 7.0));
  for (double q : {2.0, 4.0}) {
    auto r1 = estimate_constant_sweep(bundles, q);
    auto r2 = estimate_constant_sweep(scaled, q);
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
      if (r1.rows[i].degenerate) continue;
      REQUIRE(r2.rows[i].ratio ==
              Catch::Approx(r1.rows[i].ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("ratios are exactly invariant under grid-tick time translation") {
  auto g = tptest::small_grid_2d(4, 12);
  auto bundles = random_bundle_ensemble(g, 2, 23, 3, 4);
  std::vector<DataBundle> shifted;
  for (const auto& b : bundles) shifted.push_back(translate_bundle_time(b, 3));
  for (double q : {2.0, 4.0}) {
    auto r1 = estimate_constant_sweep(bundles, q);
    auto r2 = estimate_constant_sweep(shifted, q);
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
      if (r1.rows[i].degenerate) continue;
      REQUIRE(r2.rows[i].ratio ==
              Catch::Approx(r1.rows[i].ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("ensemble max ratio is stable under resolution doubling") {
  auto coarse = tptest::small_grid_2d(3, 8);
  auto fine = tptest::small_grid_2d(6, 16);
  auto bc = random_bundle_ensemble(coarse, 5, 99, 3, 4);
  auto bf = random_bundle_ensemble(fine, 5, 99, 3, 4);
  for (double q : {2.0, 4.0}) {
    auto rc = estimate_constant_sweep(bc, q);
    auto rf = estimate_constant_sweep(bf, q);
    for (const std::string kind : {"oscillatory", "steady"}) {
      const double mc = rc.max_ratio(kind);
      const double mf = rf.max_ratio(kind);
      INFO("q=" << q << " kind=" << kind << " coarse " << mc << " fine " << mf);
      REQUIRE(std::abs(mf - mc) <= 0.10 * std::max(mc, mf));
    }
  }
}

TEST_CASE("spectral tail data is resolution-consistent") {
  const std::uint64_t seed = 5;
  auto g1 = tptest::small_grid_2d(2, 4);
  auto g2 = tptest::small_grid_2d(4, 8);
  auto d1 = spectral_tail_data(g1, seed);
  auto d2 = spectral_tail_data(g2, seed);
  // the coarse data equals the fine data restricted to the coarse lattice
  for (const auto& [key, profs] : d1.f.modes()) {
    const int it2 = key[0] - g1->time_zero_index() + g2->time_zero_index();
    const int jx2 = key[1] - g1->tang_zero_index() + g2->tang_zero_index();
    const auto* other = d2.f.find(it2, jx2, 0);
    REQUIRE(other != nullptr);
    for (int c = 0; c < 2; ++c)
      for (double x : {0.4, 2.0})
        REQUIRE(std::abs(profs[static_cast<std::size_t>(c)].eval(x) -
                         (*other)[static_cast<std::size_t>(c)].eval(x)) < 1e-15);
  }
}
