#ifndef TPSTOKES_GRID_HPP
#define TPSTOKES_GRID_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "tpstokes/core.hpp"

namespace tpstokes {

// Discretization of the time-space domain T x [0,L)^{n-1} x [0, X_max].
//
// Time is the circle of period tau sampled at nt = 2K+1 equispaced points;
// the dual lattice is k = (2*pi/tau)*j for j in {-K,...,K}. Each tangential
// direction is a periodic box of length L sampled at nx = 2*(N/2)+1 points
// with modes xi = (2*pi/L)*j, |j| <= N/2. Odd sample counts keep every mode
// paired with its conjugate, so transforms of real data are exactly
// Hermitian and round-trip to machine precision.
//
// The normal direction is a finite node sequence starting at the boundary
// point 0 and ending at X_max, typically geometrically graded towards 0.
class TorusPlaneGrid {
 public:
  TorusPlaneGrid(double tau, int n, int time_modes, int tang_resolution,
                 double box_length, std::vector<double> normal_nodes)
      : tau_(tau),
        n_(n),
        kmax_(time_modes),
        mmax_(tang_resolution / 2),
        box_(box_length),
        normal_(std::move(normal_nodes)) {
    if (!(tau_ > 0.0)) throw std::invalid_argument("grid: tau must be positive");
    if (n_ < 2 || n_ > 3) throw std::invalid_argument("grid: n must be 2 or 3");
    if (kmax_ < 1) throw std::invalid_argument("grid: K must be >= 1");
    if (mmax_ < 1) throw std::invalid_argument("grid: N must be >= 2");
    if (!(box_ > 0.0)) throw std::invalid_argument("grid: L must be positive");
    if (normal_.size() < 2 || normal_.front() != 0.0)
      throw std::invalid_argument("grid: normal grid must start at 0");
    for (std::size_t i = 1; i < normal_.size(); ++i) {
      if (!(normal_[i] > normal_[i - 1]) || !std::isfinite(normal_[i]))
        throw std::invalid_argument("grid: normal grid must be strictly increasing and finite");
    }
  }

  double tau() const { return tau_; }
  int dim() const { return n_; }
  int tangential_dims() const { return n_ - 1; }
  double box_length() const { return box_; }
  double x_max() const { return normal_.back(); }

  int time_half_modes() const { return kmax_; }
  int tang_half_modes() const { return mmax_; }

  int nt() const { return 2 * kmax_ + 1; }
  int nx() const { return 2 * mmax_ + 1; }
  int nx2() const { return n_ == 3 ? nx() : 1; }
  int nz() const { return static_cast<int>(normal_.size()); }

  const std::vector<double>& normal_nodes() const { return normal_; }
  double normal_node(int iz) const { return normal_[static_cast<std::size_t>(iz)]; }

  double time_sample(int it) const { return tau_ * it / nt(); }
  double tang_sample(int j) const { return box_ * j / nx(); }

  // Frequency of time index it in [0, nt): k = (2*pi/tau) * (it - K).
  double time_freq(int it) const { return 2.0 * pi / tau_ * (it - kmax_); }
  // Frequency of tangential index j in [0, nx): xi = (2*pi/L) * (j - M).
  double tang_freq(int j) const { return 2.0 * pi / box_ * (j - mmax_); }

  int time_zero_index() const { return kmax_; }
  int tang_zero_index() const { return mmax_; }

  // Index of the conjugate mode (-k resp. -xi).
  int time_conj_index(int it) const { return 2 * kmax_ - it; }
  int tang_conj_index(int j) const { return 2 * mmax_ - j; }

  std::array<double, 2> tang_freqs(int j1, int j2) const {
    return {tang_freq(j1), n_ == 3 ? tang_freq(j2) : 0.0};
  }

  bool same_layout(const TorusPlaneGrid& o) const {
    return n_ == o.n_ && kmax_ == o.kmax_ && mmax_ == o.mmax_ && tau_ == o.tau_ &&
           box_ == o.box_ && normal_ == o.normal_;
  }

 private:
  double tau_;
  int n_;
  int kmax_;
  int mmax_;
  double box_;
  std::vector<double> normal_;
};

using GridPtr = std::shared_ptr<const TorusPlaneGrid>;

// Geometrically graded normal grid on [0, x_max]: `count` cells whose widths
// grow by `ratio`, resolving the e^{-lambda x_n} boundary layers of the fast
// modes near x_n = 0. Returns count+1 nodes including both endpoints.
inline std::vector<double> graded_normal_grid(double x_max, int count, double ratio = 1.08) {
  if (count < 2) throw std::invalid_argument("graded_normal_grid: need at least 2 cells");
  if (!(x_max > 0.0) || !(ratio >= 1.0))
    throw std::invalid_argument("graded_normal_grid: x_max > 0, ratio >= 1 required");
  std::vector<double> nodes(static_cast<std::size_t>(count) + 1);
  const double h0 = ratio == 1.0 ? x_max / count
                                 : x_max * (ratio - 1.0) / (std::pow(ratio, count) - 1.0);
  nodes[0] = 0.0;
  double h = h0;
  for (int i = 1; i <= count; ++i) {
    nodes[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(i) - 1] + h;
    h *= ratio;
  }
  nodes.back() = x_max;  // absorb accumulated rounding
  return nodes;
}

inline GridPtr make_grid(double tau, int n, int time_modes, int tang_resolution,
                         double box_length, std::vector<double> normal_nodes) {
  return std::make_shared<const TorusPlaneGrid>(tau, n, time_modes, tang_resolution,
                                                box_length, std::move(normal_nodes));
}

}  // namespace tpstokes

#endif  // TPSTOKES_GRID_HPP
