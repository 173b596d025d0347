#ifndef TPSTOKES_PARTITION_HPP
#define TPSTOKES_PARTITION_HPP

#include <array>
#include <cmath>

#include "tpstokes/core.hpp"

namespace tpstokes {

// Parabolic length scale <eta, xi> = (|eta|^2 + |xi|^{4m})^{1/(4m)} of order
// m: one time derivative scales like 2m spatial derivatives. Homogeneity:
// <lambda^{2m} eta, lambda xi> = lambda <eta, xi>.
struct ParabolicScale {
  int m = 1;

  explicit ParabolicScale(int order = 1) : m(order) {
    if (m < 1) throw std::invalid_argument("ParabolicScale: m must be >= 1");
  }

  double operator()(double eta, double xi_norm) const {
    const double a = std::abs(eta);
    const double b = std::abs(xi_norm);
    if (a == 0.0 && b == 0.0) return 0.0;
    // factor out the larger scale to avoid overflow of |xi|^{4m}
    const double bp = std::pow(b, 2.0 * m);
    const double big = std::max(a, bp);
    const double r = std::sqrt((a / big) * (a / big) + (bp / big) * (bp / big));
    return std::pow(big * r, 1.0 / (2.0 * m));
  }
};

// 1-d bump with supp h = {1/2 <= |y| <= 2}, h > 0 strictly inside:
//   h(y) = exp(-1 / ((|y| - 1/2)(2 - |y|)))  on (1/2, 2), even, 0 elsewhere.
struct BumpSpec {
  double operator()(double y) const {
    const double a = std::abs(y);
    if (a <= 0.5 || a >= 2.0) return 0.0;
    return std::exp(-1.0 / ((a - 0.5) * (2.0 - a)));
  }
};

// phi_l(eta, xi) = phi(2^{-2ml} eta, 2^{-l} xi) where phi = f / sum_j f_j and
// f(eta, xi) = h(<eta, xi>). Since every factor depends on (eta, xi) only
// through rho = <eta, xi>, this reduces to h(2^{-l} rho) normalized by the
// (at most two) nonzero shell values at rho. phi_l vanishes when rho = 0.
inline double partition_phi(const ParabolicScale& scale, const BumpSpec& bump, int l,
                            double eta, double xi_norm) {
  const double rho = scale(eta, xi_norm);
  if (rho == 0.0) return 0.0;
  const double v = bump(std::ldexp(rho, -l));
  if (v == 0.0) return 0.0;
  const int base = static_cast<int>(std::floor(std::log2(rho)));
  double total = 0.0;
  for (int j = base - 1; j <= base + 1; ++j) total += bump(std::ldexp(rho, -j));
  return v / total;
}

// Convenience: shells contributing at rho are l with 2^{l-1} < rho < 2^{l+1}.
inline std::array<int, 2> partition_shell_range(double rho) {
  if (rho <= 0.0) return {0, -1};
  const double lg = std::log2(rho);
  return {static_cast<int>(std::ceil(lg)) - 1, static_cast<int>(std::floor(lg)) + 1};
}

}  // namespace tpstokes

#endif  // TPSTOKES_PARTITION_HPP
