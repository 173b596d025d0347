#ifndef TPSTOKES_MANUFACTURED_HPP
#define TPSTOKES_MANUFACTURED_HPP

#include <string>
#include <vector>

#include "tpstokes/residuals.hpp"

namespace tpstokes {

// A manufactured data/solution bundle: (u*, p*) chosen in closed form, and
// f* = d_t u* - Lap u* + grad p*, g* = div u*, h* = trace u* computed by
// forward application of the operator in the profile algebra. The solver is
// never consulted while building a bundle.
struct ManufacturedBundle {
  std::string name;
  ProfileField u, p;  // exact solution (velocity, pressure)
  ProfileField f, g;  // induced data
  BoundaryData h;
};

inline const std::vector<std::string>& manufactured_catalogue() {
  static const std::vector<std::string> names = {
      "pressure_gauge", "single_mode_swirl", "interior_heat_mode", "divergence_pump",
      "steady_shear",   "mixed_ensemble"};
  return names;
}

namespace detail {

// Local replica of the oscillatory boundary solution used only to write
// down exact solution fields; kept separate from the production solver so a
// fault injected there is visible against these bundles.
inline void manufactured_boundary_mode(const TorusPlaneGrid& g, int it, int j1, int j2,
                                       const std::array<cdouble, 2>& hp, cdouble hn,
                                       std::vector<Profile>& vel, Profile& prs) {
  const double k = g.time_freq(it);
  const auto xi = g.tang_freqs(j1, j2);
  const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
  const cdouble lam = std::sqrt(cdouble{s * s, k});
  const int n = g.dim();
  if (s == 0.0) {
    for (int c = 0; c < n - 1; ++c)
      vel[static_cast<std::size_t>(c)] += Profile::exponential(hp[static_cast<std::size_t>(c)], lam);
    return;
  }
  const cdouble xi_dot_hp = xi[0] * hp[0] + xi[1] * hp[1];
  const cdouble q0 = -iunit * (s + lam) * (xi_dot_hp / s) + lam * hn + s * hn +
                     (iunit * k / s) * hn;
  const cdouble ik{0.0, k};
  for (int c = 0; c < n - 1; ++c) {
    const cdouble slow = -xi[static_cast<std::size_t>(c)] * q0 / k;
    vel[static_cast<std::size_t>(c)] += Profile::exponential(slow, cdouble{s, 0.0});
    vel[static_cast<std::size_t>(c)] += Profile::exponential(hp[static_cast<std::size_t>(c)] - slow, lam);
  }
  const cdouble wslow = s * q0 / ik;
  vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(wslow, cdouble{s, 0.0});
  vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(hn - wslow, lam);
  prs += Profile::exponential(q0, cdouble{s, 0.0});
}

// Local replica of the steady double-root boundary solution.
inline void manufactured_steady_mode(const TorusPlaneGrid& g, int j1, int j2,
                                     const std::array<cdouble, 2>& A, cdouble B,
                                     std::vector<Profile>& vel, Profile& prs) {
  const auto xi = g.tang_freqs(j1, j2);
  const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
  const int n = g.dim();
  const cdouble c0 = 2.0 * (s * B - iunit * (xi[0] * A[0] + xi[1] * A[1]));
  prs += Profile::exponential(c0, cdouble{s, 0.0});
  for (int c = 0; c < n - 1; ++c) {
    vel[static_cast<std::size_t>(c)] += Profile::exponential(A[static_cast<std::size_t>(c)], cdouble{s, 0.0});
    vel[static_cast<std::size_t>(c)] +=
        Profile::exponential(-iunit * xi[static_cast<std::size_t>(c)] * c0 / (2.0 * s),
                             cdouble{s, 0.0}, 1);
  }
  vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(B, cdouble{s, 0.0});
  vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(0.5 * c0, cdouble{s, 0.0}, 1);
}

inline void finalize_bundle(ManufacturedBundle& b, double decay_tol = 1e-10) {
  const auto& g = b.u.grid();
  // induced data by forward operator application
  ProfileField f = b.u.derivative_time();
  f += cdouble{-1.0, 0.0} * b.u.laplacian();
  f += pressure_gradient(b.p);
  ProfileField gd = b.u.divergence();
  const double scale = std::max({1.0, b.u.max_coef_magnitude(), b.p.max_coef_magnitude()});
  f.compact(1e-14 * scale);
  gd.compact(1e-14 * scale);
  b.f = std::move(f);
  b.g = std::move(gd);
  b.h = BoundaryData(b.u.trace());

  // the exponential parts must have died out before the box end
  const double X = g.x_max();
  for (const auto& [key, profs] : b.u.modes())
    for (const auto& p : profs)
      if (p.exp_tail_at(X) > decay_tol * scale)
        throw precondition_error("manufactured bundle '" + b.name +
                                 "' decays insufficiently within X_max (tail " +
                                 std::to_string(p.exp_tail_at(X)) + ")");
}

}  // namespace detail

// u* = 0, p* = sin(2 pi t / tau): pure pressure gauge, all data vanish.
inline ManufacturedBundle recipe_pressure_gauge(const GridPtr& grid) {
  ManufacturedBundle b;
  b.name = "pressure_gauge";
  const auto& g = *grid;
  b.u = ProfileField(grid, g.dim());
  b.p = ProfileField(grid, 1);
  const int k0 = g.time_zero_index();
  b.p.mode(k0 + 1, g.tang_zero_index(), g.dim() == 3 ? g.tang_zero_index() : 0)[0] +=
      Profile::exponential(cdouble{0.0, -0.5}, cdouble{});
  b.p.mode(k0 - 1, g.tang_zero_index(), g.dim() == 3 ? g.tang_zero_index() : 0)[0] +=
      Profile::exponential(cdouble{0.0, 0.5}, cdouble{});
  detail::finalize_bundle(b);
  return b;
}

// Single-mode boundary-driven flow: exponential-profile solution of the
// homogeneous oscillatory system, written from the closed forms above.
inline ManufacturedBundle recipe_single_mode_swirl(const GridPtr& grid) {
  ManufacturedBundle b;
  b.name = "single_mode_swirl";
  const auto& g = *grid;
  const int n = g.dim();
  b.u = ProfileField(grid, n);
  b.p = ProfileField(grid, 1);
  const int it = g.time_zero_index() + 1;
  const int j1 = g.tang_zero_index() + 2;
  const int j2 = n == 3 ? g.tang_zero_index() + 1 : 0;
  std::vector<Profile> vel(static_cast<std::size_t>(n));
  Profile prs;
  const std::array<cdouble, 2> hp{cdouble{0.8, -0.4}, n == 3 ? cdouble{0.3, 0.2} : cdouble{}};
  const cdouble hn{0.5, 0.25};
  detail::manufactured_boundary_mode(g, it, j1, j2, hp, hn, vel, prs);
  b.u.add_hermitian(it, j1, j2, vel);
  b.p.add_hermitian(it, j1, j2, {prs});
  detail::finalize_bundle(b);
  return b;
}

// Interior sine-profile field with p* = 0: the induced forcing is exactly
// band-limited in the odd extension, so the heat stage is exercised without
// truncation error.
inline ManufacturedBundle recipe_interior_heat_mode(const GridPtr& grid) {
  ManufacturedBundle b;
  b.name = "interior_heat_mode";
  const auto& g = *grid;
  const int n = g.dim();
  b.u = ProfileField(grid, n);
  b.p = ProfileField(grid, 1);
  const int it = g.time_zero_index() + 1;
  const int j1 = g.tang_zero_index() + 1;
  const int j2 = n == 3 ? g.tang_zero_index() - 1 : 0;
  const double X = g.x_max();
  std::vector<Profile> vel(static_cast<std::size_t>(n));
  vel[0] = Profile::sine(3, cdouble{0.6, 0.3}, X);
  if (n == 3) vel[1] = Profile::sine(3, cdouble{-0.2, 0.5}, X);
  vel[static_cast<std::size_t>(n - 1)] = Profile::sine(3, cdouble{0.1, -0.7}, X);
  b.u.add_hermitian(it, j1, j2, vel);
  detail::finalize_bundle(b);
  return b;
}

// Forced-divergence flow: f* = 0, g* a single cosine mode. u* is the
// whole-space corrector solution plus the boundary fix, both in closed form.
inline ManufacturedBundle recipe_divergence_pump(const GridPtr& grid) {
  ManufacturedBundle b;
  b.name = "divergence_pump";
  const auto& g = *grid;
  const int n = g.dim();
  b.u = ProfileField(grid, n);
  b.p = ProfileField(grid, 1);
  const int it = g.time_zero_index() + 1;
  const int j1 = g.tang_zero_index() + 2;  // |xi| >= 2 so the slow branch dies off in the box
  const int j2 = n == 3 ? g.tang_zero_index() + 1 : 0;
  const double X = g.x_max();
  const int m = 2;
  const double zeta = pi * m / X;
  const auto xi = g.tang_freqs(j1, j2);
  const double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
  const double beta2 = xi2 + zeta * zeta;
  const double k = g.time_freq(it);
  const cdouble d{0.9, -0.35};

  std::vector<Profile> vel(static_cast<std::size_t>(n));
  Profile prs;
  for (int c = 0; c < n - 1; ++c)
    vel[static_cast<std::size_t>(c)] =
        Profile::cosine(m, -iunit * xi[static_cast<std::size_t>(c)] * d / beta2, X);
  vel[static_cast<std::size_t>(n - 1)] = Profile::sine(m, zeta * d / beta2, X);
  prs = Profile::cosine(m, cdouble{beta2, k} / beta2 * d, X);

  // cancel the tangential trace with a boundary-driven solution
  std::array<cdouble, 2> hp{};
  for (int c = 0; c < n - 1; ++c)
    hp[static_cast<std::size_t>(c)] = iunit * xi[static_cast<std::size_t>(c)] * d / beta2;
  detail::manufactured_boundary_mode(g, it, j1, j2, hp, cdouble{}, vel, prs);

  b.u.add_hermitian(it, j1, j2, vel);
  b.p.add_hermitian(it, j1, j2, {prs});
  detail::finalize_bundle(b);
  return b;
}

// Steady boundary-driven shear plus a pure-pressure forcing f0 = grad Phi
// with Phi resonant with the slow branch.
inline ManufacturedBundle recipe_steady_shear(const GridPtr& grid) {
  ManufacturedBundle b;
  b.name = "steady_shear";
  const auto& g = *grid;
  const int n = g.dim();
  b.u = ProfileField(grid, n);
  b.p = ProfileField(grid, 1);
  const int it = g.time_zero_index();
  const int j1 = g.tang_zero_index() + 2;
  const int j2 = n == 3 ? g.tang_zero_index() + 1 : 0;

  std::vector<Profile> vel(static_cast<std::size_t>(n));
  Profile prs;
  const std::array<cdouble, 2> A{cdouble{0.7, 0.1}, n == 3 ? cdouble{-0.2, 0.4} : cdouble{}};
  const cdouble B{0.3, -0.6};
  detail::manufactured_steady_mode(g, j1, j2, A, B, vel, prs);

  // pressure part Phi e^{-s x}: adds grad Phi to f* and leaves u* unchanged
  const auto xi = g.tang_freqs(j1, j2);
  const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
  prs += Profile::exponential(cdouble{0.45, 0.2}, cdouble{s, 0.0});

  b.u.add_hermitian(it, j1, j2, vel);
  b.p.add_hermitian(it, j1, j2, {prs});
  detail::finalize_bundle(b);
  return b;
}

// Sum of the nontrivial recipes: every solver stage active at once.
inline ManufacturedBundle recipe_mixed_ensemble(const GridPtr& grid) {
  ManufacturedBundle b;
  b.name = "mixed_ensemble";
  b.u = ProfileField(grid, grid->dim());
  b.p = ProfileField(grid, 1);
  for (auto* make : {&recipe_single_mode_swirl, &recipe_interior_heat_mode,
                     &recipe_divergence_pump, &recipe_steady_shear}) {
    ManufacturedBundle part = (*make)(grid);
    b.u += part.u;
    b.p += part.p;
  }
  ManufacturedBundle gauge = recipe_pressure_gauge(grid);
  b.p += gauge.p;
  detail::finalize_bundle(b);
  return b;
}

inline ManufacturedBundle manufactured_solution(const std::string& recipe, const GridPtr& grid) {
  if (recipe == "pressure_gauge") return recipe_pressure_gauge(grid);
  if (recipe == "single_mode_swirl") return recipe_single_mode_swirl(grid);
  if (recipe == "interior_heat_mode") return recipe_interior_heat_mode(grid);
  if (recipe == "divergence_pump") return recipe_divergence_pump(grid);
  if (recipe == "steady_shear") return recipe_steady_shear(grid);
  if (recipe == "mixed_ensemble") return recipe_mixed_ensemble(grid);
  throw std::invalid_argument("manufactured_solution: unknown recipe '" + recipe + "'");
}

}  // namespace tpstokes

#endif  // TPSTOKES_MANUFACTURED_HPP
