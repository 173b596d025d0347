#ifndef TPSTOKES_BVP_ORACLE_HPP
#define TPSTOKES_BVP_ORACLE_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <array>
#include <cmath>
#include <vector>

#include "tpstokes/profiles.hpp"
#include "tpstokes/symbols.hpp"

namespace tpstokes {

// Second-order finite-difference solution of the per-mode ODE system
//   ik v + |xi|^2 v - v'' + i xi p = 0
//   ik w + |xi|^2 w - w'' + p'    = 0
//   i xi . v + w'                 = 0
//   v(0) = h', w(0) = h_n,
// on a smoothly graded grid x = T(sigma), sigma uniform in [0, 1],
// T(sigma) = X (e^{g sigma} - 1)/(e^g - 1). Velocities live on the nodes and
// the pressure on cell midpoints (a staggered layout; a collocated pressure
// picks up an O(h) boundary error through the divergence row). The far
// field is closed with the decay conditions (D + s)(D + lambda) v = 0 and
// (D + s) p = 0, which annihilate both exponential branches; Dirichlet-zero
// at X would pollute the slowly decaying modes.
//
// This is a cross-check only: it never feeds the production path.
struct OracleOptions {
  int nodes = 6144;      // grid cells
  double grading = 6.0;  // exponent g of the mapping
  double x_max = 20.0;
};

struct OracleModeSolution {
  std::vector<double> nodes;            // velocity node locations
  std::vector<std::vector<cdouble>> v;  // tangential components at the nodes
  std::vector<cdouble> w;               // normal component at the nodes
  std::vector<double> p_nodes;          // pressure midpoint locations
  std::vector<cdouble> p;               // pressure at the midpoints
};

inline OracleModeSolution bvp_oracle(const ModePoint& mode,
                                     const std::array<cdouble, 2>& hhat_tang, cdouble hhat_n,
                                     int tang_dims, const OracleOptions& opt = {}) {
  if (opt.nodes < 512) throw std::invalid_argument("bvp_oracle: need at least 512 nodes");
  const double s = mode.xi_norm();
  if (s == 0.0)
    throw precondition_error("bvp_oracle: xi = 0 modes have a rank-deficient closure (pressure "
                             "constant); use the analytic branch instead");
  const cdouble lam = mode.lambda();
  const int M = opt.nodes;
  const int nv = tang_dims;

  // mapped grid: velocity nodes and pressure midpoints
  const double gexp = opt.grading;
  const double denom = std::expm1(gexp);
  auto Tmap = [&](double sg) { return opt.x_max * std::expm1(gexp * sg) / denom; };
  const double hs = 1.0 / M;
  std::vector<double> xv(static_cast<std::size_t>(M) + 1), xp(static_cast<std::size_t>(M));
  for (int i = 0; i <= M; ++i) xv[static_cast<std::size_t>(i)] = Tmap(i * hs);
  for (int i = 0; i < M; ++i) xp[static_cast<std::size_t>(i)] = Tmap((i + 0.5) * hs);

  const int vel_count = (nv + 1) * (M + 1);
  const int N = vel_count + M;
  auto vidx = [&](int comp, int i) { return comp * (M + 1) + i; };  // comp nv = w
  auto pidx = [&](int i) { return vel_count + i; };                 // midpoint i

  using Trip = Eigen::Triplet<cdouble>;
  std::vector<Trip> trips;
  trips.reserve(static_cast<std::size_t>(N) * 8);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
  int row = 0;

  // second x-derivative at node i from the three neighbouring nodes (exact
  // for quadratics in x)
  auto d2_node = [&](int comp, int i, cdouble scale) {
    const double x0 = xv[static_cast<std::size_t>(i) - 1], x1 = xv[static_cast<std::size_t>(i)],
                 x2 = xv[static_cast<std::size_t>(i) + 1];
    const double w0 = 2.0 / ((x0 - x1) * (x0 - x2));
    const double w1 = 2.0 / ((x1 - x0) * (x1 - x2));
    const double w2 = 2.0 / ((x2 - x0) * (x2 - x1));
    trips.emplace_back(row, vidx(comp, i - 1), scale * w0);
    trips.emplace_back(row, vidx(comp, i), scale * w1);
    trips.emplace_back(row, vidx(comp, i + 1), scale * w2);
  };

  const cdouble ik{0.0, mode.k};
  const cdouble helm = ik + cdouble{s * s, 0.0};

  // Dirichlet data at x = 0
  for (int c = 0; c <= nv; ++c) {
    trips.emplace_back(row, vidx(c, 0), cdouble{1.0, 0.0});
    rhs[row] = c < nv ? hhat_tang[static_cast<std::size_t>(c)] : hhat_n;
    ++row;
  }

  // momentum at interior nodes
  for (int i = 1; i < M; ++i) {
    const double xl = xp[static_cast<std::size_t>(i) - 1], xr = xp[static_cast<std::size_t>(i)];
    const double wl = (xr - xv[static_cast<std::size_t>(i)]) / (xr - xl);
    const double wr = (xv[static_cast<std::size_t>(i)] - xl) / (xr - xl);
    for (int c = 0; c < nv; ++c) {
      trips.emplace_back(row, vidx(c, i), helm);
      d2_node(c, i, cdouble{-1.0, 0.0});
      trips.emplace_back(row, pidx(i - 1), iunit * mode.xi[static_cast<std::size_t>(c)] * wl);
      trips.emplace_back(row, pidx(i), iunit * mode.xi[static_cast<std::size_t>(c)] * wr);
      ++row;
    }
    trips.emplace_back(row, vidx(nv, i), helm);
    d2_node(nv, i, cdouble{-1.0, 0.0});
    const double dp = 1.0 / (xr - xl);
    trips.emplace_back(row, pidx(i), cdouble{dp, 0.0});
    trips.emplace_back(row, pidx(i - 1), cdouble{-dp, 0.0});
    ++row;
  }

  // divergence at the midpoints
  for (int i = 0; i < M; ++i) {
    const double xl = xv[static_cast<std::size_t>(i)], xr = xv[static_cast<std::size_t>(i) + 1];
    const double wl = (xr - xp[static_cast<std::size_t>(i)]) / (xr - xl);
    const double wr = (xp[static_cast<std::size_t>(i)] - xl) / (xr - xl);
    for (int c = 0; c < nv; ++c) {
      trips.emplace_back(row, vidx(c, i), iunit * mode.xi[static_cast<std::size_t>(c)] * wl);
      trips.emplace_back(row, vidx(c, i + 1), iunit * mode.xi[static_cast<std::size_t>(c)] * wr);
    }
    const double dw = 1.0 / (xr - xl);
    trips.emplace_back(row, vidx(nv, i + 1), cdouble{dw, 0.0});
    trips.emplace_back(row, vidx(nv, i), cdouble{-dw, 0.0});
    ++row;
  }

  // far-field closures: (D + s)(D + lambda) v = 0 for the tangential
  // components at the last node, (D + s) p = 0 at the last midpoint
  for (int c = 0; c < nv; ++c) {
    const double x0 = xv[static_cast<std::size_t>(M) - 2], x1 = xv[static_cast<std::size_t>(M) - 1],
                 x2 = xv[static_cast<std::size_t>(M)];
    // one-sided second and first derivatives at x2 (exact for quadratics)
    const double u0 = 2.0 / ((x0 - x1) * (x0 - x2));
    const double u1 = 2.0 / ((x1 - x0) * (x1 - x2));
    const double u2 = 2.0 / ((x2 - x0) * (x2 - x1));
    const double g0 = (2.0 * x2 - x1 - x2) / ((x0 - x1) * (x0 - x2));
    const double g1 = (2.0 * x2 - x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double g2 = (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
    const cdouble sl = cdouble{s, 0.0} + lam;
    trips.emplace_back(row, vidx(c, M - 2), cdouble{u0, 0.0} + sl * g0);
    trips.emplace_back(row, vidx(c, M - 1), cdouble{u1, 0.0} + sl * g1);
    trips.emplace_back(row, vidx(c, M), cdouble{u2, 0.0} + sl * g2 + s * lam);
    ++row;
  }
  {
    const double dx = xp[static_cast<std::size_t>(M) - 1] - xp[static_cast<std::size_t>(M) - 2];
    trips.emplace_back(row, pidx(M - 1), cdouble{1.0 / dx + 0.5 * s, 0.0});
    trips.emplace_back(row, pidx(M - 2), cdouble{-1.0 / dx + 0.5 * s, 0.0});
    ++row;
  }

  if (row != N) throw std::logic_error("bvp_oracle: equation count mismatch");

  Eigen::SparseMatrix<cdouble> A(N, N);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cdouble>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw precondition_error("bvp_oracle: singular linear system (ill-posed closure)");
  Eigen::VectorXcd sol = lu.solve(rhs);

  OracleModeSolution out;
  out.nodes = xv;
  out.p_nodes = xp;
  out.v.resize(static_cast<std::size_t>(nv));
  for (int c = 0; c < nv; ++c) {
    out.v[static_cast<std::size_t>(c)].resize(xv.size());
    for (int i = 0; i <= M; ++i)
      out.v[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] = sol[vidx(c, i)];
  }
  out.w.resize(xv.size());
  for (int i = 0; i <= M; ++i) out.w[static_cast<std::size_t>(i)] = sol[vidx(nv, i)];
  out.p.resize(xp.size());
  for (int i = 0; i < M; ++i) out.p[static_cast<std::size_t>(i)] = sol[pidx(i)];
  return out;
}

// Relative sup-distance between the oracle solution and closed-form
// profiles: velocities over the nodes, pressure over the midpoints,
// normalized by the overall profile size.
inline double oracle_profile_distance(const OracleModeSolution& oracle,
                                      const std::vector<Profile>& velocity,
                                      const Profile& pressure) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < oracle.nodes.size(); ++i) {
    const double xx = oracle.nodes[i];
    for (std::size_t c = 0; c < oracle.v.size(); ++c) {
      const cdouble a = velocity[c].eval(xx);
      worst = std::max(worst, std::abs(a - oracle.v[c][i]));
      scale = std::max(scale, std::abs(a));
    }
    const cdouble wn = velocity.back().eval(xx);
    worst = std::max(worst, std::abs(wn - oracle.w[i]));
    scale = std::max(scale, std::abs(wn));
  }
  for (std::size_t i = 0; i < oracle.p_nodes.size(); ++i) {
    const cdouble pr = pressure.eval(oracle.p_nodes[i]);
    worst = std::max(worst, std::abs(pr - oracle.p[i]));
    scale = std::max(scale, std::abs(pr));
  }
  return scale == 0.0 ? worst : worst / scale;
}

}  // namespace tpstokes

#endif  // TPSTOKES_BVP_ORACLE_HPP
