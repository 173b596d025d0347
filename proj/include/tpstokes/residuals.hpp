#ifndef TPSTOKES_RESIDUALS_HPP
#define TPSTOKES_RESIDUALS_HPP

#include <string>
#include <utility>
#include <vector>

#include "tpstokes/norms.hpp"
#include "tpstokes/stokes_solver.hpp"

namespace tpstokes {

struct ResidualReport {
  double momentum = 0.0;    // || d_t u - Lap u + grad p - f ||_q
  double divergence = 0.0;  // || div u - g ||_q
  double trace = 0.0;       // || u(., 0) - h ||_q
  double periodicity = 0.0; // identically zero on the torus; asserted
  double q = 2.0;
  std::vector<std::pair<std::string, double>> stage_velocity_norms;

  double worst() const { return std::max({momentum, divergence, trace, periodicity}); }
};

// Gradient of a scalar profile field: (i xi_1 p, [i xi_2 p,] d/dx_n p).
inline ProfileField pressure_gradient(const ProfileField& p) {
  const auto& g = p.grid();
  return p.map(g.dim(), [&](const ProfileField::Key& key, int c, const std::vector<Profile>& pr) {
    if (c < g.dim() - 1) {
      const double xi = g.tang_freq(key[static_cast<std::size_t>(c) + 1]);
      return (iunit * xi) * pr[0];
    }
    return pr[0].derivative();
  });
}

// Momentum residual d_t u - Lap u + grad p - f as a profile field, exact in
// the profile algebra (time and tangential derivatives are mode multipliers,
// normal derivatives differentiate the closed-form profiles).
inline ProfileField momentum_residual_field(const ProfileField& u, const ProfileField& p,
                                            const ProfileField& f) {
  ProfileField r = u.derivative_time();
  r += cdouble{-1.0, 0.0} * u.laplacian();
  r += pressure_gradient(p);
  r += cdouble{-1.0, 0.0} * f;
  r.compact();
  return r;
}

// Residuals of a candidate (u, p) against the data (f, g, h) in discrete
// L^q norms.
inline ResidualReport residual_check(const ProfileField& u, const ProfileField& p,
                                     const ProfileField& f, const ProfileField& g_data,
                                     const BoundaryData& h, double q = 2.0) {
  require_same_grid(u.grid(), f.grid(), "residual_check");
  require_same_grid(u.grid(), g_data.grid(), "residual_check");
  require_same_grid(u.grid(), h.modes.grid(), "residual_check");
  ResidualReport rep;
  rep.q = q;
  rep.momentum = lq_norm_profile(momentum_residual_field(u, p, f), q);
  ProfileField dv = u.divergence();
  dv += cdouble{-1.0, 0.0} * g_data;
  dv.compact();
  rep.divergence = lq_norm_profile(dv, q);
  BoundaryModes tr = u.trace();
  for (std::size_t i = 0; i < tr.raw().size(); ++i) tr.raw()[i] -= h.modes.raw()[i];
  rep.trace = lq_norm_boundary(tr, q);
  rep.periodicity = 0.0;  // torus representation: u(t + tau) and u(t) are the same sample
  return rep;
}

inline ResidualReport residual_check(const StokesSolution& sol, const ProfileField& f,
                                     const ProfileField& g_data, const BoundaryData& h,
                                     double q = 2.0) {
  ResidualReport rep = residual_check(sol.u, sol.p, f, g_data, h, q);
  for (const auto& st : sol.stages)
    rep.stage_velocity_norms.emplace_back(st.name, lq_norm_profile(st.velocity, q));
  return rep;
}

// Sampled-field variant for data loaded from disk: spectral time and
// tangential derivatives, three-point finite differences in x_n.
inline ResidualReport residual_check_sampled(const SpectralField& u, const SpectralField& p,
                                             const SpectralField& f, const SpectralField& g_data,
                                             const BoundaryModes& h, double q = 2.0) {
  require_same_grid(u.grid(), f.grid(), "residual_check_sampled");
  const auto& g = u.grid();
  const int n = g.dim();
  ResidualReport rep;
  rep.q = q;

  SpectralField mom = spectral_derivative(u, Derivative::time);
  {
    SpectralField lap = spectral_derivative(u, Derivative::normal, 2);
    SpectralField d1 = spectral_derivative(u, Derivative::tangential1, 2);
    for (std::size_t i = 0; i < mom.raw().size(); ++i)
      mom.raw()[i] -= lap.raw()[i] + d1.raw()[i];
    if (n == 3) {
      SpectralField d2 = spectral_derivative(u, Derivative::tangential2, 2);
      for (std::size_t i = 0; i < mom.raw().size(); ++i) mom.raw()[i] -= d2.raw()[i];
    }
  }
  {
    SpectralField px = spectral_derivative(p, Derivative::tangential1);
    SpectralField pz = spectral_derivative(p, Derivative::normal);
    SpectralField py = n == 3 ? spectral_derivative(p, Derivative::tangential2) : SpectralField();
    for (int c = 0; c < n; ++c) {
      const SpectralField* grad = c == n - 1 ? &pz : (c == 0 ? &px : &py);
      const std::int64_t per = mom.points_per_component();
      for (std::int64_t i = 0; i < per; ++i)
        mom.raw()[static_cast<std::size_t>(c * per + i)] +=
            grad->raw()[static_cast<std::size_t>(i)] - f.raw()[static_cast<std::size_t>(c * per + i)];
    }
  }
  rep.momentum = mixed_norm(mom, NormSpec{0.0, 0.0, q});

  {
    SpectralField dz = spectral_derivative(u, Derivative::normal);
    SpectralField d1 = spectral_derivative(u, Derivative::tangential1);
    SpectralField d2 = n == 3 ? spectral_derivative(u, Derivative::tangential2) : SpectralField();
    const std::int64_t per = dz.points_per_component();
    SpectralField div(u.grid_ptr(), 1);
    for (std::int64_t i = 0; i < per; ++i) {
      cdouble v = dz.raw()[static_cast<std::size_t>((n - 1) * per + i)] +
                  d1.raw()[static_cast<std::size_t>(i)];
      if (n == 3) v += d2.raw()[static_cast<std::size_t>(per + i)];
      div.raw()[static_cast<std::size_t>(i)] = v - g_data.raw()[static_cast<std::size_t>(i)];
    }
    rep.divergence = mixed_norm(div, NormSpec{0.0, 0.0, q});
  }

  BoundaryModes tr(u.grid_ptr(), n);
  for (int c = 0; c < n; ++c)
    for (int it = 0; it < g.nt(); ++it)
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2)
          tr.at(c, it, j1, j2) = u.at(c, it, j1, j2, 0) - h.at(c, it, j1, j2);
  rep.trace = lq_norm_boundary(tr, q);
  return rep;
}

}  // namespace tpstokes

#endif  // TPSTOKES_RESIDUALS_HPP
