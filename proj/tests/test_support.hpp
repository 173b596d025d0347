#ifndef TPSTOKES_TEST_SUPPORT_HPP
#define TPSTOKES_TEST_SUPPORT_HPP

#include <random>

#include "tpstokes/field.hpp"
#include "tpstokes/grid.hpp"

namespace tptest {

using namespace tpstokes;

inline GridPtr small_grid_2d(int K = 3, int N = 8, double tau = 2.0 * pi,
                             double L = 2.0 * pi, double x_max = 20.0, int cells = 24) {
  return make_grid(tau, 2, K, N, L, graded_normal_grid(x_max, cells));
}

inline GridPtr small_grid_3d(int K = 2, int N = 4, double tau = 2.0 * pi,
                             double L = 2.0 * pi, double x_max = 20.0, int cells = 16) {
  return make_grid(tau, 3, K, N, L, graded_normal_grid(x_max, cells));
}

inline PhysicalField random_field(const GridPtr& g, int comps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PhysicalField f(g, comps);
  for (auto& v : f.raw()) v = dist(rng);
  return f;
}

inline SpectralField random_hermitian_spectrum(const GridPtr& g, int comps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SpectralField s(g, comps);
  for (int c = 0; c < comps; ++c)
    for (int it = 0; it < g->nt(); ++it)
      for (int j1 = 0; j1 < g->nx(); ++j1)
        for (int j2 = 0; j2 < g->nx2(); ++j2)
          for (int iz = 0; iz < g->nz(); ++iz) {
            cdouble v{dist(rng), dist(rng)};
            const int itc = g->time_conj_index(it);
            const int j1c = g->tang_conj_index(j1);
            const int j2c = g->dim() == 3 ? g->tang_conj_index(j2) : 0;
            if (itc == it && j1c == j1 && j2c == j2) v = cdouble{v.real(), 0.0};
            s.at(c, it, j1, j2, iz) = v;
            s.at(c, itc, j1c, j2c, iz) = std::conj(v);
          }
  return s;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace tptest

#endif
