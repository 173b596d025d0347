#ifndef TPSTOKES_STOKES_SOLVER_HPP
#define TPSTOKES_STOKES_SOLVER_HPP

#include <string>
#include <vector>

#include "tpstokes/box_solvers.hpp"
#include "tpstokes/steady_solver.hpp"

namespace tpstokes {

// One stage of the composed solution, kept for provenance and residual
// breakdowns: "steady", "heat_lift", "corrector", "boundary".
struct SolutionStage {
  std::string name;
  ProfileField velocity;
  ProfileField pressure;
};

struct StokesSolution {
  ProfileField u;  // n components
  ProfileField p;  // scalar
  std::vector<SolutionStage> stages;

  const SolutionStage* stage(const std::string& name) const {
    for (const auto& s : stages)
      if (s.name == name) return &s;
    return nullptr;
  }
};

struct SolverOptions {
  BoxStageOptions box;                 // x_n extension bandwidth and tolerances
  BoundarySolverOptions boundary;      // compatibility tolerance, fault injection
  SteadySolverOptions steady;
};

inline BoundaryData boundary_steady_part(const BoundaryData& h) {
  BoundaryData out = h;
  const auto& g = h.modes.grid();
  for (int c = 0; c < h.modes.components(); ++c)
    for (int it = 0; it < g.nt(); ++it) {
      if (it == g.time_zero_index()) continue;
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2) out.modes.at(c, it, j1, j2) = cdouble{};
    }
  return out;
}

inline BoundaryData boundary_oscillatory_part(const BoundaryData& h) {
  BoundaryData out = h;
  const auto& g = h.modes.grid();
  for (int c = 0; c < h.modes.components(); ++c)
    for (int j1 = 0; j1 < g.nx(); ++j1)
      for (int j2 = 0; j2 < g.nx2(); ++j2) out.modes.at(c, g.time_zero_index(), j1, j2) = cdouble{};
  return out;
}

// Full inhomogeneous solver. The data are split by the projections P and
// P_perp; the steady part goes through the per-mode steady solver, the
// purely oscillatory part through the three-stage composition
//   heat lift v  (d_t v - Lap v = f, v|_0 = 0),
//   corrector (w, pi) for the residual divergence G = g - div v,
//   boundary solve (U, Q) for H = h - trace w  (trace w_n = 0),
// and the sum u = v_steady + v + w + U solves the time-periodic system.
inline StokesSolution solve_full(const ProfileField& f, const ProfileField& g_data,
                                 const BoundaryData& h, const SolverOptions& opt = {}) {
  const auto& g = f.grid();
  const GridPtr grid = f.grid_ptr();
  const int n = g.dim();
  require_same_grid(g, g_data.grid(), "solve_full");
  require_same_grid(g, h.modes.grid(), "solve_full");
  if (f.components() != n || g_data.components() != 1)
    throw std::invalid_argument("solve_full: f must have n components, g one");

  StokesSolution sol;
  sol.u = ProfileField(grid, n);
  sol.p = ProfileField(grid, 1);

  // steady part
  {
    ProfileField f0 = f.steady_part();
    ProfileField g0 = g_data.steady_part();
    BoundaryData h0 = boundary_steady_part(h);
    if (f0.mode_count() || g0.mode_count() || h0.modes.max_abs() > 0.0) {
      auto steady = solve_steady(f0, g0, h0, opt.steady);
      sol.u += steady.velocity;
      sol.p += steady.pressure;
      sol.stages.push_back({"steady", std::move(steady.velocity), std::move(steady.pressure)});
    }
  }

  // oscillatory pipeline
  ProfileField fo = f.oscillatory_part();
  ProfileField go = g_data.oscillatory_part();
  BoundaryData ho = boundary_oscillatory_part(h);

  ProfileField v = solve_heat_dirichlet_zero(fo, opt.box);
  ProfileField G = go;
  if (v.mode_count()) {
    ProfileField div_v = v.divergence();
    G += cdouble{-1.0, 0.0} * div_v;
  }
  G.compact(1e-15 * std::max(1.0, G.max_coef_magnitude()));

  auto corrector = solve_divergence_corrector(G, opt.box);

  BoundaryData H = ho;
  if (corrector.velocity.mode_count()) {
    BoundaryModes tw = corrector.velocity.trace();
    for (std::size_t i = 0; i < tw.raw().size(); ++i) H.modes.raw()[i] -= tw.raw()[i];
  }

  auto boundary = solve_boundary_oscillatory(H, opt.boundary);

  sol.u += v;
  sol.u += corrector.velocity;
  sol.u += boundary.velocity;
  sol.p += corrector.pressure;
  sol.p += boundary.pressure;

  sol.stages.push_back({"heat_lift", std::move(v), ProfileField(grid, 1)});
  sol.stages.push_back(
      {"corrector", std::move(corrector.velocity), std::move(corrector.pressure)});
  sol.stages.push_back(
      {"boundary", std::move(boundary.velocity), std::move(boundary.pressure)});

  sol.u.compact();
  sol.p.compact();
  return sol;
}

}  // namespace tpstokes

#endif  // TPSTOKES_STOKES_SOLVER_HPP
