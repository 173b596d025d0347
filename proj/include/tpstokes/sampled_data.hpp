#ifndef TPSTOKES_SAMPLED_DATA_HPP
#define TPSTOKES_SAMPLED_DATA_HPP

#include <vector>

#include "tpstokes/profile_field.hpp"
#include "tpstokes/transforms.hpp"

namespace tpstokes {

namespace detail {

// Local cubic (4-point Lagrange) interpolation of a complex profile from
// arbitrary strictly increasing nodes; third-order accurate.
inline cdouble interp_cubic(const std::vector<double>& xs, const std::vector<cdouble>& ys,
                            double x) {
  const std::size_t n = xs.size();
  std::size_t hi = 1;
  while (hi + 1 < n && xs[hi] < x) ++hi;
  const std::size_t base = hi >= 2 ? (hi + 2 <= n ? hi - 2 : n - 4) : 0;
  cdouble acc{};
  for (std::size_t a = base; a < base + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = base; b < base + 4; ++b)
      if (b != a) w *= (x - xs[b]) / (xs[a] - xs[b]);
    acc += w * ys[a];
  }
  return acc;
}

}  // namespace detail

// Converts sampled data into trigonometric profiles on the extension box:
// odd (sine) for forcing-type fields, even (cosine) for divergence-type
// fields. Samples are interpolated from the field's normal grid onto the
// uniform box grid and projected by the discrete sine/cosine transform;
// exact for band-limited data, third-order limited otherwise.
inline ProfileField sampled_to_profiles(const SpectralField& spec, int box_modes, bool odd) {
  const auto& g = spec.grid();
  const double X = g.x_max();
  const int M = box_modes;
  ProfileField out(spec.grid_ptr(), spec.components());
  const auto& zs = g.normal_nodes();
  std::vector<double> xu(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i) xu[static_cast<std::size_t>(i)] = X * i / M;

  const double scale = std::max(1.0, spec.max_abs());
  for (int c = 0; c < spec.components(); ++c)
    for (int it = 0; it < g.nt(); ++it)
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2) {
          std::vector<cdouble> prof(zs.size());
          double mag = 0.0;
          for (int iz = 0; iz < g.nz(); ++iz) {
            prof[static_cast<std::size_t>(iz)] = spec.at(c, it, j1, j2, iz);
            mag = std::max(mag, std::abs(prof[static_cast<std::size_t>(iz)]));
          }
          if (mag <= 1e-14 * scale) continue;
          std::vector<cdouble> u(xu.size());
          for (std::size_t i = 0; i < xu.size(); ++i)
            u[i] = detail::interp_cubic(zs, prof, xu[i]);
          Profile p;
          p.box = X;
          if (odd) {
            // DST-I on the interior nodes
            p.sin_c.assign(static_cast<std::size_t>(M), cdouble{});
            for (int m = 1; m < M; ++m) {
              cdouble acc{};
              for (int i = 1; i < M; ++i)
                acc += u[static_cast<std::size_t>(i)] * std::sin(pi * m * i / static_cast<double>(M));
              p.sin_c[static_cast<std::size_t>(m)] = 2.0 / M * acc;
            }
          } else {
            // DCT-I with half-weight endpoints
            p.cos_c.assign(static_cast<std::size_t>(M) + 1, cdouble{});
            for (int m = 0; m <= M; ++m) {
              cdouble acc = 0.5 * (u[0] + (m % 2 == 0 ? u[static_cast<std::size_t>(M)]
                                                      : -u[static_cast<std::size_t>(M)]));
              for (int i = 1; i < M; ++i)
                acc += u[static_cast<std::size_t>(i)] * std::cos(pi * m * i / static_cast<double>(M));
              const double norm = (m == 0 || m == M) ? 1.0 / M : 2.0 / M;
              p.cos_c[static_cast<std::size_t>(m)] = norm * acc;
            }
          }
          p.compact();
          if (!p.empty()) out.mode(it, j1, j2)[static_cast<std::size_t>(c)] += p;
        }
  out.compact();
  return out;
}

inline ProfileField sampled_to_profiles(const PhysicalField& f, int box_modes, bool odd) {
  return sampled_to_profiles(forward_transform(f), box_modes, odd);
}

}  // namespace tpstokes

#endif  // TPSTOKES_SAMPLED_DATA_HPP
