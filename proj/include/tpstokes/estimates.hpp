#ifndef TPSTOKES_ESTIMATES_HPP
#define TPSTOKES_ESTIMATES_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tpstokes/residuals.hpp"

namespace tpstokes {

// One data instance (f, g, h) for the solver; steady and oscillatory
// content may both be present.
struct DataBundle {
  ProfileField f;  // n components
  ProfileField g;  // scalar
  BoundaryData h;  // n components
};

namespace detail {

// spatial derivative of one tangential direction or the normal
inline ProfileField spatial_derivative(const ProfileField& u, int dim_index) {
  const int tang = u.grid().tangential_dims();
  if (dim_index < tang) return u.derivative_tangential(dim_index);
  return u.derivative_normal();
}

}  // namespace detail

// Solution norm of the purely oscillatory estimate:
//   ||u||_{W^{1,q}(T;L^q)} + ||u||_{L^q(T;W^{2,q})} + ||grad p||_{L^q(T;L^q)},
// with the Sobolev parts realized as sums of derivative-field L^q norms.
inline double solution_norm_oscillatory(const ProfileField& u, const ProfileField& p, double q) {
  const int sdims = u.grid().tangential_dims() + 1;
  double acc = lq_norm_profile(u, q) + lq_norm_profile(u.derivative_time(), q);
  acc += lq_norm_profile(u, q);  // the L^q(T;W^{2,q}) scale starts at order 0
  for (int a = 0; a < sdims; ++a) {
    ProfileField da = detail::spatial_derivative(u, a);
    acc += lq_norm_profile(da, q);
    for (int b = a; b < sdims; ++b) acc += lq_norm_profile(detail::spatial_derivative(da, b), q);
  }
  acc += lq_norm_profile(pressure_gradient(p), q);
  return acc;
}

// Steady solution norm: || grad^2 u ||_q + || grad p ||_q.
inline double solution_norm_steady(const ProfileField& u, const ProfileField& p, double q) {
  const int sdims = u.grid().tangential_dims() + 1;
  double acc = 0.0;
  for (int a = 0; a < sdims; ++a) {
    ProfileField da = detail::spatial_derivative(u, a);
    for (int b = a; b < sdims; ++b) acc += lq_norm_profile(detail::spatial_derivative(da, b), q);
  }
  acc += lq_norm_profile(pressure_gradient(p), q);
  return acc;
}

// || g ||_{W^{1,q}(T; W^{-1,q})} on the even extension: cosine-lattice
// weights (1+k^2)^{1/2} (|xi|^2 + zeta_m^2)^{-1/2}, then L^q over the box
// (the factor 2^{1/q} accounts for the mirrored half).
inline double g_negative_norm(const ProfileField& g_data, double q, int box_modes) {
  const auto& g = g_data.grid();
  const double X = g.x_max();
  ProfileField weighted(g_data.grid_ptr(), 1);
  const double scale = std::max(1.0, g_data.max_coef_magnitude());
  for (const auto& [key, profs] : g_data.modes()) {
    const double k = g.time_freq(key[0]);
    const auto xi = g.tang_freqs(key[1], key[2]);
    const double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    const auto d = project_cosine(profs[0], X, box_modes);
    if (xi2 == 0.0 && std::abs(d[0]) > 1e-10 * scale)
      throw precondition_error(
          "g_negative_norm: nonzero extension mean at xi = 0 (homogeneous weight singular)");
    Profile w;
    w.box = X;
    w.cos_c.assign(d.size(), cdouble{});
    const double tw = std::sqrt(1.0 + k * k);
    for (std::size_t m = 0; m < d.size(); ++m) {
      const double zeta = pi * static_cast<double>(m) / X;
      const double xibar2 = xi2 + zeta * zeta;
      if (xibar2 == 0.0) continue;
      w.cos_c[m] = tw * d[m] / std::sqrt(xibar2);
    }
    w.compact();
    weighted.mode(key[0], key[1], key[2])[0] += w;
  }
  weighted.compact();
  return std::pow(2.0, 1.0 / q) * lq_norm_profile(weighted, q);
}

// Data norm of the purely oscillatory estimate:
//   ||f||_q + ||g||_{L^q(T;W^{1,q})} + ||g||_{W^{1,q}(T;W^{-1,q})}
//   + ||h||_{B^{2-1/q}} + ||h_n||_{W^{1,q}(T;W^{-1/q,q})}.
inline double data_norm_oscillatory(const ProfileField& f, const ProfileField& g_data,
                                    const BoundaryData& h, double q, int box_modes = 256) {
  const auto& g = f.grid();
  const int n = g.dim();
  double acc = lq_norm_profile(f, q);
  acc += lq_norm_profile(g_data, q);
  for (int a = 0; a < g.tangential_dims() + 1; ++a)
    acc += lq_norm_profile(detail::spatial_derivative(g_data, a), q);
  acc += g_negative_norm(g_data, q, box_modes);
  acc += besov_norm(h.modes, NormSpec{0.0, 2.0 - 1.0 / q, q, NormFlavor::anisotropic_besov});
  // normal component: homogeneous negative spatial order with temporal weight
  BoundaryModes hn(h.modes.grid_ptr(), 1);
  for (int it = 0; it < g.nt(); ++it)
    for (int j1 = 0; j1 < g.nx(); ++j1)
      for (int j2 = 0; j2 < g.nx2(); ++j2)
        hn.at(0, it, j1, j2) = h.modes.at(n - 1, it, j1, j2);
  acc += mixed_norm_boundary(hn, NormSpec{1.0, -1.0 / q, q, NormFlavor::homogeneous_spatial});
  return acc;
}

// Data norm of the steady estimate:
//   ||f||_q + ||g||_{W^{1,q}} + ||h||_{W^{2-1/q,q}} (Bessel weight).
inline double data_norm_steady(const ProfileField& f, const ProfileField& g_data,
                               const BoundaryData& h, double q) {
  const auto& g = f.grid();
  double acc = lq_norm_profile(f, q);
  acc += lq_norm_profile(g_data, q);
  for (int a = 0; a < g.tangential_dims() + 1; ++a)
    acc += lq_norm_profile(detail::spatial_derivative(g_data, a), q);
  acc += mixed_norm_boundary(h.modes, NormSpec{0.0, 2.0 - 1.0 / q, q});
  return acc;
}

struct EstimateRow {
  int trial = 0;
  std::string kind;  // "oscillatory" or "steady"
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
};

struct EstimateRatioReport {
  double q = 2.0;
  int resolution_time = 0;
  int resolution_tang = 0;
  std::vector<EstimateRow> rows;

  double max_ratio(const std::string& kind) const {
    double m = 0.0;
    for (const auto& r : rows)
      if (!r.degenerate && r.kind == kind) m = std::max(m, r.ratio);
    return m;
  }
  double median_ratio(const std::string& kind) const {
    std::vector<double> v;
    for (const auto& r : rows)
      if (!r.degenerate && r.kind == kind) v.push_back(r.ratio);
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  }
};

// Ratio LHS/RHS of the maximal-regularity estimates over an ensemble of
// bundles; the steady and oscillatory parts of each bundle are rated
// against their own estimate.
inline EstimateRatioReport estimate_constant_sweep(const std::vector<DataBundle>& bundles,
                                                   double q, const SolverOptions& opt = {}) {
  EstimateRatioReport report;
  report.q = q;
  if (!bundles.empty()) {
    report.resolution_time = bundles.front().f.grid().time_half_modes();
    report.resolution_tang = bundles.front().f.grid().tang_half_modes();
  }
  const double tiny = 1e-13;
  report.rows.resize(2 * bundles.size());
  std::exception_ptr failure;
  parallel_for(static_cast<std::int64_t>(bundles.size()), [&](std::int64_t trial) {
    try {
      const auto& b = bundles[static_cast<std::size_t>(trial)];
      // oscillatory part
      {
        ProfileField fo = b.f.oscillatory_part();
        ProfileField go = b.g.oscillatory_part();
        BoundaryData ho = boundary_oscillatory_part(b.h);
        EstimateRow row;
        row.trial = static_cast<int>(trial);
        row.kind = "oscillatory";
        row.rhs = data_norm_oscillatory(fo, go, ho, q, opt.box.modes);
        auto sol = solve_full(fo, go, ho, opt);
        row.lhs = solution_norm_oscillatory(sol.u, sol.p, q);
        if (row.rhs < tiny) {
          if (row.lhs > tiny)
            throw precondition_error("estimate_constant_sweep: RHS = 0 with LHS != 0");
          row.degenerate = true;
        } else {
          row.ratio = row.lhs / row.rhs;
        }
        report.rows[static_cast<std::size_t>(2 * trial)] = row;
      }
      // steady part
      {
        ProfileField fs = b.f.steady_part();
        ProfileField gs = b.g.steady_part();
        BoundaryData hs = boundary_steady_part(b.h);
        EstimateRow row;
        row.trial = static_cast<int>(trial);
        row.kind = "steady";
        row.rhs = data_norm_steady(fs, gs, hs, q);
        if (row.rhs < tiny) {
          row.degenerate = true;
        } else {
          auto sol = solve_steady(fs, gs, hs, opt.steady);
          row.lhs = solution_norm_steady(sol.velocity, sol.pressure, q);
          row.ratio = row.lhs / row.rhs;
        }
        report.rows[static_cast<std::size_t>(2 * trial + 1)] = row;
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return report;
}

// Scales a bundle by a real factor (the ratio must be invariant).
inline DataBundle scale_bundle(const DataBundle& b, double a) {
  DataBundle out = b;
  out.f *= cdouble{a, 0.0};
  out.g *= cdouble{a, 0.0};
  for (auto& v : out.h.modes.raw()) v *= a;
  return out;
}

// Translates a bundle in time by `steps` grid ticks tau/nt: mode (k, xi)
// picks up the phase e^{-ik t_shift}. Grid-tick shifts permute the time
// samples, so discrete norms are exactly invariant.
inline DataBundle translate_bundle_time(const DataBundle& b, int steps) {
  const auto& g = b.f.grid();
  const double shift = g.tau() * steps / g.nt();
  auto phase = [&](int it) { return std::polar(1.0, -g.time_freq(it) * shift); };
  DataBundle out = b;
  for (auto& [key, profs] : out.f.modes())
    for (auto& p : profs) p *= phase(key[0]);
  for (auto& [key, profs] : out.g.modes())
    for (auto& p : profs) p *= phase(key[0]);
  for (int c = 0; c < out.h.modes.components(); ++c)
    for (int it = 0; it < g.nt(); ++it)
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2) out.h.modes.at(c, it, j1, j2) *= phase(it);
  return out;
}

// Seeded ensemble of single- and few-mode bundles. Mode indices are drawn
// within [1, draw_time] x [-draw_tang, draw_tang] so the same seed produces
// the same bundle family on any sufficiently fine grid.
inline std::vector<DataBundle> random_bundle_ensemble(const GridPtr& grid, int count,
                                                      std::uint64_t seed, int draw_time,
                                                      int draw_tang) {
  if (draw_time > grid->time_half_modes() || draw_tang > grid->tang_half_modes())
    throw std::invalid_argument("random_bundle_ensemble: draw range exceeds the lattice");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> kpick(1, draw_time);
  std::uniform_int_distribution<int> jpick(-draw_tang, draw_tang);
  std::uniform_int_distribution<int> mpick(1, 4);
  std::uniform_int_distribution<int> npick(1, 3);
  const int n = grid->dim();
  const int k0 = grid->time_zero_index();
  const int x0 = grid->tang_zero_index();

  std::vector<DataBundle> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) {
    DataBundle b{ProfileField(grid, n), ProfileField(grid, 1), BoundaryData{BoundaryModes(grid, n)}};
    const int nmodes = npick(rng);
    for (int m = 0; m < nmodes; ++m) {
      const int dk = kpick(rng);
      const int dj1 = jpick(rng);
      const int dj2 = n == 3 ? jpick(rng) : 0;
      const bool xi_zero = dj1 == 0 && dj2 == 0;
      // boundary datum (compatibility: no normal datum on xi = 0 modes)
      for (int c = 0; c < n; ++c) {
        if (c == n - 1 && xi_zero) continue;
        b.h.modes.set_hermitian(c, k0 + dk, x0 + dj1, n == 3 ? x0 + dj2 : 0,
                                cdouble{unit(rng), unit(rng)});
      }
      if (unit(rng) > 0.0) {  // interior forcing, sine profile
        std::vector<Profile> fv(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c)
          fv[static_cast<std::size_t>(c)] =
              Profile::sine(mpick(rng), cdouble{unit(rng), unit(rng)}, grid->x_max());
        b.f.add_hermitian(k0 + dk, x0 + dj1, n == 3 ? x0 + dj2 : 0, fv);
      }
      if (unit(rng) > 0.0) {  // prescribed divergence, cosine profile (mean-free)
        b.g.add_hermitian(k0 + dk, x0 + dj1, n == 3 ? x0 + dj2 : 0,
                          {Profile::cosine(mpick(rng), cdouble{unit(rng), unit(rng)},
                                           grid->x_max())});
      }
      // steady companion mode (xi != 0)
      if (m == 0) {
        const int sj = dj1 == 0 ? 2 : dj1;
        for (int c = 0; c < n; ++c)
          b.h.modes.set_hermitian(c, k0, x0 + sj, n == 3 ? x0 + std::max(1, std::abs(dj2)) : 0,
                                  cdouble{unit(rng), unit(rng)});
        std::vector<Profile> fv(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c)
          fv[static_cast<std::size_t>(c)] =
              Profile::exponential(cdouble{unit(rng), unit(rng)}, cdouble{1.5 + 0.5 * (c + 1), 0.0});
        b.f.add_hermitian(k0, x0 + sj, n == 3 ? x0 + std::max(1, std::abs(dj2)) : 0, fv);
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// uniform in [0, 1), a pure function of the mode indices
inline double hash_u01(std::uint64_t seed, int a, int b, int c, int d) {
  std::uint64_t x = seed;
  x = splitmix64(x ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 1));
  x = splitmix64(x ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 2));
  x = splitmix64(x ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) << 3));
  x = splitmix64(x ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(d)) << 4));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Analytic-in-spirit data family with exponentially decaying mode
// amplitudes: truncating it to any lattice leaves residual tails that
// shrink by a fixed factor per resolution doubling. Amplitudes are pure
// functions of the mode frequencies, so coarse lattices sample exactly the
// same data.
inline DataBundle spectral_tail_data(const GridPtr& grid, std::uint64_t seed,
                                     double decay = 1.43) {
  const int n = grid->dim();
  const int k0 = grid->time_zero_index();
  const int x0 = grid->tang_zero_index();
  DataBundle b{ProfileField(grid, n), ProfileField(grid, 1), BoundaryData{BoundaryModes(grid, n)}};
  auto amp = [&](int dk, int dj1, int dj2, int tag) {
    const double mag = std::exp(-decay * (std::abs(dk) + std::abs(dj1) + std::abs(dj2)));
    const double re = detail::hash_u01(seed, dk, dj1, dj2, 2 * tag) - 0.5;
    const double im = detail::hash_u01(seed, dk, dj1, dj2, 2 * tag + 1) - 0.5;
    return mag * cdouble{re, im};
  };
  const int K = grid->time_half_modes();
  const int Mx = grid->tang_half_modes();
  const int Mx2 = n == 3 ? Mx : 0;
  for (int dk = 0; dk <= K; ++dk)
    for (int dj1 = -Mx; dj1 <= Mx; ++dj1)
      for (int dj2 = -Mx2; dj2 <= Mx2; ++dj2) {
        if (dk == 0) {
          // steady content: boundary + exponential forcing on xi != 0 modes,
          // written once per conjugate pair
          if (dj1 <= 0 || (dj1 == 0 && dj2 <= 0)) continue;
          for (int c = 0; c < n; ++c)
            b.h.modes.set_hermitian(c, k0, x0 + dj1, n == 3 ? x0 + dj2 : 0, amp(0, dj1, dj2, c));
          std::vector<Profile> fv(static_cast<std::size_t>(n));
          for (int c = 0; c < n; ++c)
            fv[static_cast<std::size_t>(c)] =
                Profile::exponential(amp(0, dj1, dj2, 8 + c), cdouble{1.5, 0.0});
          b.f.add_hermitian(k0, x0 + dj1, n == 3 ? x0 + dj2 : 0, fv);
          continue;
        }
        const bool xi_zero = dj1 == 0 && dj2 == 0;
        for (int c = 0; c < n; ++c) {
          if (c == n - 1 && xi_zero) continue;
          b.h.modes.set_hermitian(c, k0 + dk, x0 + dj1, n == 3 ? x0 + dj2 : 0,
                                  amp(dk, dj1, dj2, c));
        }
        // normal-component forcing only: its induced divergence is a cosine
        // series, so the corrector is exact at every resolution and the
        // residual isolates the (K, N) truncation
        std::vector<Profile> fv(static_cast<std::size_t>(n));
        const int m = 1 + static_cast<int>(detail::hash_u01(seed, dk, dj1, dj2, 40) * 2.0);
        fv[static_cast<std::size_t>(n - 1)] =
            Profile::sine(m, amp(dk, dj1, dj2, 16 + n), grid->x_max());
        b.f.add_hermitian(k0 + dk, x0 + dj1, n == 3 ? x0 + dj2 : 0, fv);
        b.g.add_hermitian(k0 + dk, x0 + dj1, n == 3 ? x0 + dj2 : 0,
                          {Profile::cosine(m, amp(dk, dj1, dj2, 32), grid->x_max())});
      }
  return b;
}

}  // namespace tpstokes

#endif  // TPSTOKES_ESTIMATES_HPP
