#ifndef TPSTOKES_SYMBOLS_HPP
#define TPSTOKES_SYMBOLS_HPP

#include <array>
#include <cmath>
#include <complex>

#include "tpstokes/core.hpp"

namespace tpstokes {

// A point (k, xi) of the dual lattice together with the principal root
// lambda = sqrt(|xi|^2 + ik), Re lambda >= 0. The principal branch is forced
// by the decay requirement on e^{-lambda x_n}; lambda^2 = |xi|^2 + ik holds
// exactly and Re lambda > 0 whenever (k, xi) != (0, 0).
struct ModePoint {
  double k = 0.0;
  std::array<double, 2> xi{0.0, 0.0};

  double xi_norm2() const { return xi[0] * xi[0] + xi[1] * xi[1]; }
  double xi_norm() const { return std::sqrt(xi_norm2()); }
  cdouble lambda() const { return std::sqrt(cdouble{xi_norm2(), k}); }
  bool is_origin() const { return k == 0.0 && xi_norm2() == 0.0; }
};

enum class Q0Perturbation {
  none,
  // Test-only fault injection: flips the sign of the |xi| h_n term.
  flip_xi_hn_sign,
};

// Pressure trace symbol for the oscillatory boundary problem:
//   q0 = -i(|xi| + lambda) (xi/|xi|) . h' + lambda h_n + |xi| h_n + (ik/|xi|) h_n.
// Defined for k != 0, |xi| > 0; the xi = 0 modes are handled separately by
// the boundary solver (they force h_n = 0 and carry no pressure).
inline cdouble q0_symbol(const ModePoint& mode, const std::array<cdouble, 2>& hhat_tang,
                         cdouble hhat_normal, Q0Perturbation perturb = Q0Perturbation::none) {
  if (mode.k == 0.0)
    throw precondition_error("q0_symbol: steady mode k = 0 reached the oscillatory symbol");
  const double s = mode.xi_norm();
  if (s == 0.0) {
    if (std::abs(hhat_normal) != 0.0)
      throw precondition_error("q0_symbol: xi = 0 with nonzero normal datum (1/|xi| singular)");
    return cdouble{};
  }
  const cdouble lam = mode.lambda();
  const cdouble xi_dot_h = mode.xi[0] * hhat_tang[0] + mode.xi[1] * hhat_tang[1];
  const double sign = perturb == Q0Perturbation::flip_xi_hn_sign ? -1.0 : 1.0;
  return -iunit * (s + lam) * (xi_dot_h / s) + lam * hhat_normal + sign * s * hhat_normal +
         (iunit * mode.k / s) * hhat_normal;
}

// Split q0 = q1 + q2 by regularity: q2 = (ik/|xi|) h_n carries the
// lowest-order part, q1 the rest.
inline std::pair<cdouble, cdouble> q1_q2_split(const ModePoint& mode,
                                               const std::array<cdouble, 2>& hhat_tang,
                                               cdouble hhat_normal) {
  if (mode.k == 0.0)
    throw precondition_error("q1_q2_split: steady mode k = 0 reached the oscillatory symbol");
  const double s = mode.xi_norm();
  if (s == 0.0) {
    if (std::abs(hhat_normal) != 0.0)
      throw precondition_error("q1_q2_split: xi = 0 with nonzero normal datum");
    return {cdouble{}, cdouble{}};
  }
  const cdouble lam = mode.lambda();
  const cdouble xi_dot_h = mode.xi[0] * hhat_tang[0] + mode.xi[1] * hhat_tang[1];
  const cdouble q1 = -iunit * (s + lam) * (xi_dot_h / s) + lam * hhat_normal + s * hhat_normal;
  const cdouble q2 = (iunit * mode.k / s) * hhat_normal;
  return {q1, q2};
}

// M(eta, xi) = |xi| / sqrt(|xi|^2 + i eta); |M| <= 1.
inline cdouble symbol_M(double eta, double xi_norm) {
  if (xi_norm == 0.0) throw std::invalid_argument("symbol_M: xi = 0 excluded");
  return xi_norm / std::sqrt(cdouble{xi_norm * xi_norm, eta});
}

// M1(eta, xi) = sqrt(|xi|^2 + i eta) / (|xi| + |eta|^{1/2}) * xi/|xi|  (vector).
inline std::array<cdouble, 2> symbol_M1(double eta, const std::array<double, 2>& xi) {
  const double s = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
  if (s == 0.0) throw std::invalid_argument("symbol_M1: xi = 0 excluded");
  const cdouble scal = std::sqrt(cdouble{s * s, eta}) / (s + std::sqrt(std::abs(eta)));
  return {scal * (xi[0] / s), scal * (xi[1] / s)};
}

// M2(eta, xi) = sqrt(|xi|^2 + i eta) / (|xi| + |eta|^{1/2}); bounded above
// and below away from (0,0).
inline cdouble symbol_M2(double eta, double xi_norm) {
  if (eta == 0.0 && xi_norm == 0.0)
    throw std::invalid_argument("symbol_M2: (eta, xi) = (0, 0) excluded");
  return std::sqrt(cdouble{xi_norm * xi_norm, eta}) / (xi_norm + std::sqrt(std::abs(eta)));
}

// Heat-profile symbol (sqrt(|xi|^2 + i eta) x_n)^m e^{-sqrt(|xi|^2+i eta) x_n},
// uniformly bounded in x_n >= 0. With eta = 0 it degenerates to the
// tangential analogue (|xi| x_n)^m e^{-|xi| x_n}.
inline cdouble symbol_heat_profile(double eta, double xi_norm, double x_n, int power = 0) {
  if (x_n < 0.0) throw std::invalid_argument("symbol_heat_profile: x_n must be >= 0");
  if (power < 0) throw std::invalid_argument("symbol_heat_profile: power must be >= 0");
  const cdouble lam = std::sqrt(cdouble{xi_norm * xi_norm, eta});
  const cdouble z = lam * x_n;
  cdouble p{1.0, 0.0};
  for (int i = 0; i < power; ++i) p *= z;
  return p * std::exp(-z);
}

}  // namespace tpstokes

#endif  // TPSTOKES_SYMBOLS_HPP
