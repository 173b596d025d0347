#ifndef TPSTOKES_BOX_SOLVERS_HPP
#define TPSTOKES_BOX_SOLVERS_HPP

#include <string>
#include <vector>

#include "tpstokes/boundary_solver.hpp"
#include "tpstokes/profile_field.hpp"

namespace tpstokes {

namespace detail {

// J_p(a) = integral_0^X x^p e^{-a x} dx, closed form for complex a.
inline cdouble exp_moment(cdouble a, int p, double X) {
  if (std::abs(a) == 0.0) {
    double v = X;
    for (int i = 0; i < p; ++i) v *= X;
    return v / (p + 1.0);
  }
  const cdouble eaX = std::exp(-a * X);
  cdouble J = (1.0 - eaX) / a;
  double Xp = 1.0;
  for (int p_ = 1; p_ <= p; ++p_) {
    Xp *= X;
    J = (static_cast<double>(p_) * J - Xp * eaX) / a;
  }
  return J;
}

// Collects the profile as pure exponential-polynomial terms (trig content
// expanded into e^{+- i zeta x}); used by the exact projections below.
inline std::vector<ExpTerm> as_exp_terms(const Profile& p) {
  std::vector<ExpTerm> terms = p.exp_terms;
  for (std::size_t m = 1; m < p.sin_c.size(); ++m) {
    if (p.sin_c[m] == cdouble{}) continue;
    const cdouble z{0.0, p.zeta(m)};
    terms.push_back({p.sin_c[m] / (2.0 * iunit), -z, 0});
    terms.push_back({-p.sin_c[m] / (2.0 * iunit), z, 0});
  }
  for (std::size_t m = 0; m < p.cos_c.size(); ++m) {
    if (p.cos_c[m] == cdouble{}) continue;
    const cdouble z{0.0, p.zeta(m)};
    terms.push_back({0.5 * p.cos_c[m], -z, 0});
    terms.push_back({0.5 * p.cos_c[m], z, 0});
  }
  return terms;
}

}  // namespace detail

// Exact Fourier-sine coefficients on [0, X] of a profile:
//   c_m = (2/X) integral_0^X p(x) sin(pi m x / X) dx,  m = 1..modes.
// Sine content on the same box passes through unchanged.
inline std::vector<cdouble> project_sine(const Profile& p, double X, int modes) {
  std::vector<cdouble> c(static_cast<std::size_t>(modes) + 1, cdouble{});
  Profile rest = p;
  if (p.has_trig() && p.box == X) {
    for (std::size_t m = 1; m < p.sin_c.size() && m <= static_cast<std::size_t>(modes); ++m)
      c[m] = p.sin_c[m];
    rest.sin_c.clear();
    rest.compact();
  }
  const auto terms = detail::as_exp_terms(rest);
  for (const auto& t : terms)
    for (int m = 1; m <= modes; ++m) {
      const double zeta = pi * m / X;
      const cdouble J =
          (detail::exp_moment(t.rate - iunit * zeta, t.power, X) -
           detail::exp_moment(t.rate + iunit * zeta, t.power, X)) /
          (2.0 * iunit);
      c[static_cast<std::size_t>(m)] += (2.0 / X) * t.coef * J;
    }
  return c;
}

// Exact Fourier-cosine coefficients of the even extension on [0, X]:
//   d_0 = (1/X) integral p,  d_m = (2/X) integral p cos(pi m x / X).
inline std::vector<cdouble> project_cosine(const Profile& p, double X, int modes) {
  std::vector<cdouble> d(static_cast<std::size_t>(modes) + 1, cdouble{});
  Profile rest = p;
  if (p.has_trig() && p.box == X) {
    for (std::size_t m = 0; m < p.cos_c.size() && m <= static_cast<std::size_t>(modes); ++m)
      d[m] = p.cos_c[m];
    rest.cos_c.clear();
    rest.compact();
  }
  const auto terms = detail::as_exp_terms(rest);
  for (const auto& t : terms) {
    d[0] += (1.0 / X) * t.coef * detail::exp_moment(t.rate, t.power, X);
    for (int m = 1; m <= modes; ++m) {
      const double zeta = pi * m / X;
      const cdouble J = 0.5 * (detail::exp_moment(t.rate - iunit * zeta, t.power, X) +
                               detail::exp_moment(t.rate + iunit * zeta, t.power, X));
      d[static_cast<std::size_t>(m)] += (2.0 / X) * t.coef * J;
    }
  }
  return d;
}

struct BoxStageOptions {
  int modes = 256;        // sine/cosine bandwidth of the x_n extension
  double mean_tol = 1e-10;  // relative tolerance on singular zero modes
};

// Purely oscillatory heat lift with zero Dirichlet datum: f is extended
// oddly in x_n to the periodic box of length 2 X_max, the whole-space
// multiplier 1/(ik + |xi|^2 + zeta_m^2) is applied per full spatial mode,
// and the result is restricted to x_n > 0. The sine representation vanishes
// at x_n = 0 identically.
inline ProfileField solve_heat_dirichlet_zero(const ProfileField& f,
                                              const BoxStageOptions& opt = {}) {
  const auto& g = f.grid();
  const double scale = std::max(1.0, f.max_coef_magnitude());
  if (f.steady_magnitude() > opt.mean_tol * scale)
    throw precondition_error("solve_heat_dirichlet_zero: forcing has steady (k = 0) content");
  const double X = g.x_max();
  ProfileField out(f.grid_ptr(), f.components());
  for (const auto& [key, profs] : f.modes()) {
    if (key[0] == g.time_zero_index()) continue;
    const double k = g.time_freq(key[0]);
    const auto xi = g.tang_freqs(key[1], key[2]);
    const double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    auto& vout = out.mode(key[0], key[1], key[2]);
    for (int c = 0; c < f.components(); ++c) {
      const auto coeffs = project_sine(profs[static_cast<std::size_t>(c)], X, opt.modes);
      Profile v;
      v.box = X;
      v.sin_c.assign(coeffs.size(), cdouble{});
      for (std::size_t m = 1; m < coeffs.size(); ++m) {
        if (coeffs[m] == cdouble{}) continue;
        const double zeta = pi * static_cast<double>(m) / X;
        v.sin_c[m] = coeffs[m] / cdouble{xi2 + zeta * zeta, k};
      }
      v.compact();
      vout[static_cast<std::size_t>(c)] += v;
    }
  }
  out.compact();
  return out;
}

// Purely oscillatory divergence corrector: G is the even extension of the
// residual divergence, and per full spatial mode
//   w = -i xi_bar G / |xi_bar|^2,   pi = (ik + |xi_bar|^2) / |xi_bar|^2 G.
// The normal component comes out as a sine series (odd-reflection symmetry),
// so its trace vanishes identically. Modes with xi = 0 require a vanishing
// extension mean (the |xi_bar|^2 = 0 singularity).
inline VelocityPressure solve_divergence_corrector(const ProfileField& g_residual,
                                                   const BoxStageOptions& opt = {}) {
  const auto& g = g_residual.grid();
  if (g_residual.components() != 1)
    throw std::invalid_argument("solve_divergence_corrector: scalar input expected");
  const double scale = std::max(1.0, g_residual.max_coef_magnitude());
  if (g_residual.steady_magnitude() > opt.mean_tol * scale)
    throw precondition_error("solve_divergence_corrector: residual has steady (k = 0) content");
  const double X = g.x_max();
  const int n = g.dim();
  VelocityPressure out{ProfileField(g_residual.grid_ptr(), n),
                       ProfileField(g_residual.grid_ptr(), 1)};
  for (const auto& [key, profs] : g_residual.modes()) {
    if (key[0] == g.time_zero_index()) continue;
    const double k = g.time_freq(key[0]);
    const auto xi = g.tang_freqs(key[1], key[2]);
    const double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    const auto d = project_cosine(profs[0], X, opt.modes);
    if (xi2 == 0.0 && std::abs(d[0]) > opt.mean_tol * scale)
      throw precondition_error(
          "solve_divergence_corrector: nonzero extension mean at xi = 0, k index " +
          std::to_string(key[0] - g.time_zero_index()) + " (1/|xi|^2 singular)");

    auto& vel = out.velocity.mode(key[0], key[1], key[2]);
    auto& pre = out.pressure.mode(key[0], key[1], key[2]);
    Profile wn, prs;
    wn.box = X;
    prs.box = X;
    wn.sin_c.assign(d.size(), cdouble{});
    prs.cos_c.assign(d.size(), cdouble{});
    std::array<Profile, 2> wt;
    for (int c = 0; c < n - 1; ++c) {
      wt[static_cast<std::size_t>(c)].box = X;
      wt[static_cast<std::size_t>(c)].cos_c.assign(d.size(), cdouble{});
    }
    for (std::size_t m = 0; m < d.size(); ++m) {
      if (d[m] == cdouble{}) continue;
      const double zeta = pi * static_cast<double>(m) / X;
      const double xibar2 = xi2 + zeta * zeta;
      if (xibar2 == 0.0) continue;  // zero mean ensured above
      for (int c = 0; c < n - 1; ++c)
        wt[static_cast<std::size_t>(c)].cos_c[m] =
            -iunit * xi[static_cast<std::size_t>(c)] * d[m] / xibar2;
      wn.sin_c[m] = zeta * d[m] / xibar2;
      prs.cos_c[m] = cdouble{xibar2, k} / xibar2 * d[m];
    }
    for (int c = 0; c < n - 1; ++c) {
      wt[static_cast<std::size_t>(c)].compact();
      vel[static_cast<std::size_t>(c)] += wt[static_cast<std::size_t>(c)];
    }
    wn.compact();
    prs.compact();
    vel[static_cast<std::size_t>(n - 1)] += wn;
    pre[0] += prs;
  }
  out.velocity.compact();
  out.pressure.compact();
  return out;
}

}  // namespace tpstokes

#endif  // TPSTOKES_BOX_SOLVERS_HPP
