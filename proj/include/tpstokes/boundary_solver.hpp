#ifndef TPSTOKES_BOUNDARY_SOLVER_HPP
#define TPSTOKES_BOUNDARY_SOLVER_HPP

#include <string>

#include "tpstokes/profile_field.hpp"
#include "tpstokes/symbols.hpp"

namespace tpstokes {

struct VelocityPressure {
  ProfileField velocity;
  ProfileField pressure;
};

struct BoundarySolverOptions {
  Q0Perturbation perturb = Q0Perturbation::none;
  double compat_tol = 1e-11;  // relative to the data magnitude
};

// Oscillatory boundary stage: solves the homogeneous Stokes system with
// Dirichlet datum H, mode by mode. For k != 0, |xi| > 0:
//   p(x) = q0 e^{-|xi| x},
//   v(x) = -(xi q0 / k) e^{-|xi| x} + (h' + xi q0 / k) e^{-lambda x},
//   w(x) = (|xi| q0 / (ik)) e^{-|xi| x} + (h_n - |xi| q0 / (ik)) e^{-lambda x},
// with lambda = sqrt(|xi|^2 + ik). The xi = 0 modes carry no pressure and
// require h_n = 0; there v = h' e^{-lambda x}, w = 0. The trace reproduces H
// and the spectral divergence vanishes identically.
inline VelocityPressure solve_boundary_oscillatory(const BoundaryData& H,
                                                   const BoundarySolverOptions& opt = {}) {
  const auto& g = H.modes.grid();
  const GridPtr grid = H.modes.grid_ptr();
  const int n = g.dim();
  const double scale = std::max(1.0, H.modes.max_abs());

  if (H.modes.steady_magnitude() > opt.compat_tol * scale)
    throw precondition_error(
        "solve_boundary_oscillatory: datum has steady (k = 0) content; project it off first");
  int bad_k = 0;
  if (H.compat_normal_defect(&bad_k) > opt.compat_tol * scale)
    throw precondition_error(
        "solve_boundary_oscillatory: normal datum has nonzero tangential mean at k index " +
        std::to_string(bad_k) + " (compatibility condition violated)");

  VelocityPressure out{ProfileField(grid, n), ProfileField(grid, 1)};
  const int k0 = g.time_zero_index();
  for (int it = 0; it < g.nt(); ++it) {
    if (it == k0) continue;
    const double k = g.time_freq(it);
    for (int j1 = 0; j1 < g.nx(); ++j1)
      for (int j2 = 0; j2 < g.nx2(); ++j2) {
        const auto xi = g.tang_freqs(j1, j2);
        std::array<cdouble, 2> hp{H.modes.at(0, it, j1, j2),
                                  n == 3 ? H.modes.at(1, it, j1, j2) : cdouble{}};
        const cdouble hn = H.modes.at(n - 1, it, j1, j2);
        if (std::abs(hp[0]) == 0.0 && std::abs(hp[1]) == 0.0 && std::abs(hn) == 0.0) continue;

        const ModePoint mode{k, xi};
        const double s = mode.xi_norm();
        const cdouble lam = mode.lambda();
        auto& vel = out.velocity.mode(it, j1, j2);
        auto& pre = out.pressure.mode(it, j1, j2);

        if (s == 0.0) {
          if (std::abs(hn) > opt.compat_tol * scale)
            throw precondition_error(
                "solve_boundary_oscillatory: nonzero normal datum at xi = 0, k index " +
                std::to_string(it - k0));
          for (int c = 0; c < n - 1; ++c)
            vel[static_cast<std::size_t>(c)] += Profile::exponential(hp[static_cast<std::size_t>(c)], lam);
          continue;
        }

        const cdouble q0 = q0_symbol(mode, hp, hn, opt.perturb);
        const cdouble ik{0.0, k};
        for (int c = 0; c < n - 1; ++c) {
          const cdouble slow = -xi[static_cast<std::size_t>(c)] * q0 / k;
          vel[static_cast<std::size_t>(c)] += Profile::exponential(slow, cdouble{s, 0.0});
          vel[static_cast<std::size_t>(c)] +=
              Profile::exponential(hp[static_cast<std::size_t>(c)] - slow, lam);
        }
        const cdouble wslow = s * q0 / ik;
        vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(wslow, cdouble{s, 0.0});
        vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(hn - wslow, lam);
        pre[0] += Profile::exponential(q0, cdouble{s, 0.0});
      }
  }
  return out;
}

// Steady boundary stage: the k = 0 system has the double characteristic
// root |xi|, with decaying solutions
//   Pi(x) = c e^{-s x},
//   v(x)  = (A - i xi c x / (2s)) e^{-s x},
//   w(x)  = (B + c x / 2) e^{-s x},     c = 2 (s B - i xi . A),
// matched to the Dirichlet datum by A = h0', B = h0_n. At xi = 0 the datum
// must have h0_n = 0; the tangential components continue constantly into the
// interior (the zero-shear gauge, null family a x_n fixed to a = 0).
inline VelocityPressure solve_boundary_steady(const BoundaryData& H0,
                                              const BoundarySolverOptions& opt = {}) {
  const auto& g = H0.modes.grid();
  const GridPtr grid = H0.modes.grid_ptr();
  const int n = g.dim();
  const double scale = std::max(1.0, H0.modes.max_abs());
  if (H0.modes.max_abs() > 0.0) {
    // only the k = 0 row may be populated
    BoundaryModes osc = H0.modes;
    for (int c = 0; c < n; ++c)
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2) osc.at(c, g.time_zero_index(), j1, j2) = cdouble{};
    if (osc.max_abs() > opt.compat_tol * scale)
      throw precondition_error("solve_boundary_steady: datum must be time-independent");
  }

  VelocityPressure out{ProfileField(grid, n), ProfileField(grid, 1)};
  const int it = g.time_zero_index();
  for (int j1 = 0; j1 < g.nx(); ++j1)
    for (int j2 = 0; j2 < g.nx2(); ++j2) {
      const auto xi = g.tang_freqs(j1, j2);
      std::array<cdouble, 2> A{H0.modes.at(0, it, j1, j2),
                               n == 3 ? H0.modes.at(1, it, j1, j2) : cdouble{}};
      const cdouble B = H0.modes.at(n - 1, it, j1, j2);
      if (std::abs(A[0]) == 0.0 && std::abs(A[1]) == 0.0 && std::abs(B) == 0.0) continue;

      const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
      auto& vel = out.velocity.mode(it, j1, j2);
      auto& pre = out.pressure.mode(it, j1, j2);
      if (s == 0.0) {
        if (std::abs(B) > opt.compat_tol * scale)
          throw precondition_error(
              "solve_boundary_steady: nonzero normal datum at xi = 0 (no decaying solution)");
        for (int c = 0; c < n - 1; ++c)
          vel[static_cast<std::size_t>(c)] += Profile::exponential(A[static_cast<std::size_t>(c)], cdouble{});
        continue;
      }
      const cdouble xi_dot_A = xi[0] * A[0] + xi[1] * A[1];
      const cdouble c0 = 2.0 * (s * B - iunit * xi_dot_A);
      pre[0] += Profile::exponential(c0, cdouble{s, 0.0});
      for (int c = 0; c < n - 1; ++c) {
        vel[static_cast<std::size_t>(c)] += Profile::exponential(A[static_cast<std::size_t>(c)], cdouble{s, 0.0});
        vel[static_cast<std::size_t>(c)] +=
            Profile::exponential(-iunit * xi[static_cast<std::size_t>(c)] * c0 / (2.0 * s),
                                 cdouble{s, 0.0}, 1);
      }
      vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(B, cdouble{s, 0.0});
      vel[static_cast<std::size_t>(n - 1)] += Profile::exponential(0.5 * c0, cdouble{s, 0.0}, 1);
    }
  return out;
}

}  // namespace tpstokes

#endif  // TPSTOKES_BOUNDARY_SOLVER_HPP
