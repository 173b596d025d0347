#ifndef TPSTOKES_TRANSFORMS_HPP
#define TPSTOKES_TRANSFORMS_HPP

#include <cmath>
#include <vector>

#include "tpstokes/field.hpp"

namespace tpstokes {

namespace detail {

// Dense DFT matrix along one axis. Sizes here are a few hundred at most, so
// the O(m^2) apply is cheap and keeps the build dependency-free.
inline std::vector<cdouble> dft_matrix(int m, bool forward) {
  // forward: out[a] = (1/m) sum_j in[j] exp(-i k_a t_j), with
  // k_a t_j = 2*pi*(a - half)(j)/m for centered mode indices.
  // inverse: out[j] = sum_a in[a] exp(+i k_a t_j).
  const int half = (m - 1) / 2;
  std::vector<cdouble> w(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int j = 0; j < m; ++j) {
      const double phase = 2.0 * pi * static_cast<double>(a - half) * j / m;
      const cdouble e = forward ? std::polar(1.0, -phase) / static_cast<double>(m)
                                : std::polar(1.0, phase);
      w[static_cast<std::size_t>(forward ? a : j) * m + (forward ? j : a)] = e;
    }
  return w;
}

// Applies an m x m matrix along the axis of extent m located between blocks
// of size `outer` and `inner`: data layout is [outer][m][inner].
inline void apply_axis(std::vector<cdouble>& data, std::int64_t outer, int m,
                       std::int64_t inner, const std::vector<cdouble>& w) {
  parallel_for(outer * inner, [&](std::int64_t oi) {
    const std::int64_t o = oi / inner;
    const std::int64_t i = oi % inner;
    const std::int64_t base = o * m * inner + i;
    std::vector<cdouble> line(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) line[static_cast<std::size_t>(a)] = data[base + a * inner];
    for (int a = 0; a < m; ++a) {
      cdouble acc{};
      const cdouble* row = w.data() + static_cast<std::size_t>(a) * m;
      for (int j = 0; j < m; ++j) acc += row[j] * line[static_cast<std::size_t>(j)];
      data[base + a * inner] = acc;
    }
  });
}

// Separable transform over the time and tangential axes of a flat
// [comps][nt][nx1][nx2][nz] lattice (nx2 = 1 when there is one tangential
// direction; nz = 1 for boundary fields).
inline void transform_lattice(std::vector<cdouble>& data, std::int64_t comps, int nt,
                              int nx1, int nx2, std::int64_t nz, bool forward) {
  const auto wt = dft_matrix(nt, forward);
  apply_axis(data, comps, nt, static_cast<std::int64_t>(nx1) * nx2 * nz, wt);
  const auto wx = dft_matrix(nx1, forward);
  apply_axis(data, comps * nt, nx1, static_cast<std::int64_t>(nx2) * nz, wx);
  if (nx2 > 1) {
    const auto wx2 = nx2 == nx1 ? wx : dft_matrix(nx2, forward);
    apply_axis(data, comps * nt * nx1, nx2, nz, wx2);
  }
}

inline void transform_all_axes(std::vector<cdouble>& data, const TorusPlaneGrid& g,
                               int comps, bool forward) {
  transform_lattice(data, comps, g.nt(), g.nx(), g.nx2(), g.nz(), forward);
}

}  // namespace detail

// Discrete Fourier transform on T x [0,L)^{n-1}, applied per normal node and
// component. Normalization: time average (1/tau) * integral and tangential
// box average, so the (k=0, xi=0) coefficient is the mean of the field.
inline SpectralField forward_transform(const PhysicalField& f) {
  if (!f.all_finite()) throw std::invalid_argument("forward_transform: field has non-finite samples");
  SpectralField out(f.grid_ptr(), f.components());
  auto& d = out.raw();
  const auto& src = f.raw();
  for (std::size_t i = 0; i < src.size(); ++i) d[i] = src[i];
  detail::transform_all_axes(d, f.grid(), f.components(), true);
  return out;
}

inline SpectralField forward_transform(const SpectralField& f) {
  SpectralField out = f;
  detail::transform_all_axes(out.raw(), f.grid(), f.components(), true);
  return out;
}

// Inverse transform (plain mode sums). Requires Hermitian-symmetric input;
// the imaginary part of the reconstruction is discarded after the check.
inline PhysicalField inverse_transform(const SpectralField& s, double hermitian_tol = 1e-10) {
  const double scale = std::max(1.0, s.max_abs());
  if (s.hermitian_defect() > hermitian_tol * scale)
    throw std::invalid_argument(
        "inverse_transform: coefficients are not Hermitian-symmetric; result would not be real");
  std::vector<cdouble> work = s.raw();
  detail::transform_all_axes(work, s.grid(), s.components(), false);
  PhysicalField out(s.grid_ptr(), s.components());
  auto& d = out.raw();
  for (std::size_t i = 0; i < work.size(); ++i) d[i] = work[i].real();
  return out;
}

// Inverse transform to complex samples, no symmetry requirement.
inline SpectralField inverse_transform_complex(const SpectralField& s) {
  SpectralField out = s;
  detail::transform_all_axes(out.raw(), s.grid(), s.components(), false);
  return out;
}

// Projection P onto the steady (time-mean) part: keeps only k = 0
// coefficients. Complementary projection P_perp keeps k != 0. Both are exact
// coefficient masks.
inline SpectralField project_steady(const SpectralField& f) {
  SpectralField out = f;
  const auto& g = f.grid();
  const int k0 = g.time_zero_index();
  parallel_for(out.size(), [&](std::int64_t i) {
    const std::int64_t per_t = static_cast<std::int64_t>(g.nx()) * g.nx2() * g.nz();
    const int it = static_cast<int>((i / per_t) % g.nt());
    if (it != k0) out.raw()[static_cast<std::size_t>(i)] = cdouble{};
  });
  return out;
}

inline SpectralField project_oscillatory(const SpectralField& f) {
  SpectralField out = f;
  const auto& g = f.grid();
  const int k0 = g.time_zero_index();
  parallel_for(out.size(), [&](std::int64_t i) {
    const std::int64_t per_t = static_cast<std::int64_t>(g.nx()) * g.nx2() * g.nz();
    const int it = static_cast<int>((i / per_t) % g.nt());
    if (it == k0) out.raw()[static_cast<std::size_t>(i)] = cdouble{};
  });
  return out;
}

// Physical-space realizations: P is the time average over the sample set,
// P_perp the remainder, so P f + P_perp f recovers f up to rounding.
inline PhysicalField project_steady(const PhysicalField& f) {
  const auto& g = f.grid();
  PhysicalField out(f.grid_ptr(), f.components());
  const std::int64_t per_t = static_cast<std::int64_t>(g.nx()) * g.nx2() * g.nz();
  parallel_for(f.components() * per_t, [&](std::int64_t ci) {
    const std::int64_t c = ci / per_t;
    const std::int64_t p = ci % per_t;
    double mean = 0.0;
    for (int it = 0; it < g.nt(); ++it)
      mean += f.raw()[static_cast<std::size_t>((c * g.nt() + it) * per_t + p)];
    mean /= g.nt();
    for (int it = 0; it < g.nt(); ++it)
      out.raw()[static_cast<std::size_t>((c * g.nt() + it) * per_t + p)] = mean;
  });
  return out;
}

inline PhysicalField project_oscillatory(const PhysicalField& f) {
  PhysicalField mean = project_steady(f);
  PhysicalField out(f.grid_ptr(), f.components());
  for (std::size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = f.raw()[i] - mean.raw()[i];
  return out;
}

enum class Derivative { time, tangential1, tangential2, normal };

// Spectral derivatives: d/dt multiplies by ik, d/dx_j by i xi_j. The normal
// derivative uses three-point finite differences on the (graded) normal
// grid; solver outputs carry analytic profiles and differentiate those
// instead (see profile_field.hpp).
inline SpectralField spectral_derivative(const SpectralField& f, Derivative which,
                                         int order = 1) {
  const auto& g = f.grid();
  if (which == Derivative::tangential2 && g.dim() != 3)
    throw std::invalid_argument("spectral_derivative: no second tangential direction for n=2");
  SpectralField out = f;
  if (which == Derivative::normal) {
    const auto& z = g.normal_nodes();
    const int nz = g.nz();
    for (int rep = 0; rep < order; ++rep) {
      SpectralField cur = out;
      parallel_for(out.size() / nz, [&](std::int64_t line) {
        const cdouble* in = cur.raw().data() + line * nz;
        cdouble* o = out.raw().data() + line * nz;
        for (int i = 0; i < nz; ++i) {
          int a = i == 0 ? 0 : (i == nz - 1 ? nz - 3 : i - 1);
          const double x0 = z[static_cast<std::size_t>(a)], x1 = z[static_cast<std::size_t>(a) + 1],
                       x2 = z[static_cast<std::size_t>(a) + 2];
          const double x = z[static_cast<std::size_t>(i)];
          // derivative of the quadratic through (x0,x1,x2) evaluated at x
          const double w0 = (2 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
          const double w1 = (2 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
          const double w2 = (2 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
          o[i] = w0 * in[a] + w1 * in[a + 1] + w2 * in[a + 2];
        }
      });
    }
    return out;
  }
  parallel_for(out.size(), [&](std::int64_t i) {
    const std::int64_t nz = g.nz();
    const std::int64_t nx2 = g.nx2();
    const std::int64_t nx1 = g.nx();
    const std::int64_t it = (i / (nz * nx2 * nx1)) % g.nt();
    const std::int64_t j1 = (i / (nz * nx2)) % nx1;
    const std::int64_t j2 = (i / nz) % nx2;
    double freq = 0.0;
    switch (which) {
      case Derivative::time: freq = g.time_freq(static_cast<int>(it)); break;
      case Derivative::tangential1: freq = g.tang_freq(static_cast<int>(j1)); break;
      case Derivative::tangential2: freq = g.tang_freq(static_cast<int>(j2)); break;
      default: break;
    }
    cdouble m{1.0, 0.0};
    for (int r = 0; r < order; ++r) m *= iunit * freq;
    out.raw()[static_cast<std::size_t>(i)] *= m;
  });
  return out;
}

}  // namespace tpstokes

#endif  // TPSTOKES_TRANSFORMS_HPP
