#ifndef TPSTOKES_STEADY_SOLVER_HPP
#define TPSTOKES_STEADY_SOLVER_HPP

#include <string>

#include "tpstokes/boundary_solver.hpp"

namespace tpstokes {

struct SteadySolverOptions {
  double compat_tol = 1e-10;  // relative, on the xi = 0 solvability checks
};

// Steady Stokes solver on the half-space, per tangential mode, entirely in
// the profile algebra. For xi != 0 (s = |xi|):
//   1. Pi_p solves (D^2 - s^2) Pi = i xi . f' + D f_n + (D^2 - s^2) g,
//   2. v_p solves (D^2 - s^2) v = i xi Pi_p - f',
//   3. w_p integrates the divergence equation w' = g - i xi . v_p,
//   4. the homogeneous double-root family (a + b x) e^{-s x} matches the
//      Dirichlet datum, with the pressure constant fixed by zero divergence.
// At xi = 0 the divergence equation determines w up to compatibility with
// the normal datum (which must vanish there); the tangential components keep
// their boundary value into the interior (zero-shear gauge) and the pressure
// integrates the normal momentum balance.
inline VelocityPressure solve_steady(const ProfileField& f0, const ProfileField& g0,
                                     const BoundaryData& h0,
                                     const SteadySolverOptions& opt = {}) {
  const auto& g = f0.grid();
  const GridPtr grid = f0.grid_ptr();
  const int n = g.dim();
  require_same_grid(g, g0.grid(), "solve_steady");
  require_same_grid(g, h0.modes.grid(), "solve_steady");

  const double scale =
      std::max({1.0, f0.max_coef_magnitude(), g0.max_coef_magnitude(), h0.modes.max_abs()});
  if (f0.oscillatory_magnitude() > opt.compat_tol * scale ||
      g0.oscillatory_magnitude() > opt.compat_tol * scale)
    throw precondition_error("solve_steady: data must be time-independent");
  {
    BoundaryModes osc = h0.modes;
    for (int c = 0; c < n; ++c)
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2) osc.at(c, g.time_zero_index(), j1, j2) = cdouble{};
    if (osc.max_abs() > opt.compat_tol * scale)
      throw precondition_error("solve_steady: boundary datum must be time-independent");
  }

  const int it = g.time_zero_index();
  VelocityPressure out{ProfileField(grid, n), ProfileField(grid, 1)};

  for (int j1 = 0; j1 < g.nx(); ++j1)
    for (int j2 = 0; j2 < g.nx2(); ++j2) {
      const auto xi = g.tang_freqs(j1, j2);
      const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);

      const auto* fm = f0.find(it, j1, j2);
      const auto* gm = g0.find(it, j1, j2);
      std::array<Profile, 2> fp;
      Profile fn, gd;
      if (fm) {
        for (int c = 0; c < n - 1; ++c) fp[static_cast<std::size_t>(c)] = (*fm)[static_cast<std::size_t>(c)];
        fn = (*fm)[static_cast<std::size_t>(n - 1)];
      }
      if (gm) gd = (*gm)[0];
      std::array<cdouble, 2> hA{h0.modes.at(0, it, j1, j2),
                                n == 3 ? h0.modes.at(1, it, j1, j2) : cdouble{}};
      const cdouble hB = h0.modes.at(n - 1, it, j1, j2);

      const bool have_data = fm || gm || std::abs(hA[0]) != 0.0 || std::abs(hA[1]) != 0.0 ||
                             std::abs(hB) != 0.0;
      if (!have_data) continue;

      auto& vel = out.velocity.mode(it, j1, j2);
      auto& pre = out.pressure.mode(it, j1, j2);

      if (s == 0.0) {
        // w' = g, decaying/box-periodic antiderivative; must meet h0_n(0)
        Profile w = gd.empty() ? Profile{} : gd.antiderivative();
        const cdouble wb = w.empty() ? cdouble{} : w.trace();
        if (std::abs(wb - hB) > opt.compat_tol * scale)
          throw precondition_error(
              "solve_steady: incompatible xi = 0 data (normal datum vs divergence mean)");
        // v'' = -f', boundary value continues constantly (zero-shear gauge)
        for (int c = 0; c < n - 1; ++c) {
          Profile vp;
          if (!fp[static_cast<std::size_t>(c)].empty()) {
            vp = cdouble{-1.0, 0.0} *
                 fp[static_cast<std::size_t>(c)].antiderivative().antiderivative();
          }
          const cdouble a = hA[static_cast<std::size_t>(c)] - vp.trace();
          vp += Profile::exponential(a, cdouble{});
          vel[static_cast<std::size_t>(c)] += vp;
        }
        vel[static_cast<std::size_t>(n - 1)] += w;
        // Pi' = f_n + g'
        Profile rhs = fn;
        rhs += gd.derivative();
        if (!rhs.empty()) pre[0] += rhs.antiderivative();
        continue;
      }

      // pressure Poisson right-hand side: i xi . f' + D f_n + (D^2 - s^2) g
      Profile rhsPi;
      for (int c = 0; c < n - 1; ++c)
        rhsPi += (iunit * xi[static_cast<std::size_t>(c)]) * fp[static_cast<std::size_t>(c)];
      rhsPi += fn.derivative();
      if (!gd.empty()) {
        rhsPi += gd.derivative().derivative();
        rhsPi += cdouble{-s * s, 0.0} * gd;
      }
      Profile Pi_p = rhsPi.empty() ? Profile{} : rhsPi.resolvent(s);

      std::array<Profile, 2> v_p;
      for (int c = 0; c < n - 1; ++c) {
        Profile rhs = (iunit * xi[static_cast<std::size_t>(c)]) * Pi_p;
        rhs += cdouble{-1.0, 0.0} * fp[static_cast<std::size_t>(c)];
        if (!rhs.empty()) v_p[static_cast<std::size_t>(c)] = rhs.resolvent(s);
      }

      Profile wprime = gd;
      for (int c = 0; c < n - 1; ++c)
        wprime += (-iunit * xi[static_cast<std::size_t>(c)]) * v_p[static_cast<std::size_t>(c)];
      Profile w_p = wprime.empty() ? Profile{} : wprime.antiderivative();

      // homogeneous correction
      const std::array<cdouble, 2> A{hA[0] - v_p[0].trace(),
                                     n == 3 ? hA[1] - v_p[1].trace() : cdouble{}};
      const cdouble B = hB - w_p.trace();
      const cdouble xi_dot_A = xi[0] * A[0] + xi[1] * A[1];
      const cdouble c0 = 2.0 * (s * B - iunit * xi_dot_A);

      pre[0] += Pi_p;
      pre[0] += Profile::exponential(c0, cdouble{s, 0.0});
      for (int c = 0; c < n - 1; ++c) {
        Profile v = v_p[static_cast<std::size_t>(c)];
        v += Profile::exponential(A[static_cast<std::size_t>(c)], cdouble{s, 0.0});
        v += Profile::exponential(-iunit * xi[static_cast<std::size_t>(c)] * c0 / (2.0 * s),
                                  cdouble{s, 0.0}, 1);
        vel[static_cast<std::size_t>(c)] += v;
      }
      Profile w = w_p;
      w += Profile::exponential(B, cdouble{s, 0.0});
      w += Profile::exponential(0.5 * c0, cdouble{s, 0.0}, 1);
      vel[static_cast<std::size_t>(n - 1)] += w;
    }

  out.velocity.compact();
  out.pressure.compact();
  return out;
}

}  // namespace tpstokes

#endif  // TPSTOKES_STEADY_SOLVER_HPP
