#ifndef TPSTOKES_FIELD_HPP
#define TPSTOKES_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "tpstokes/grid.hpp"

namespace tpstokes {

namespace detail {

// Both field classes share the flat 5-d layout (component, t, x1, x2, z),
// z fastest. For n = 2 the x2 extent is 1.
template <typename Scalar>
class FieldStorage {
 public:
  FieldStorage() = default;
  FieldStorage(GridPtr grid, int components)
      : grid_(std::move(grid)), comps_(components) {
    if (comps_ < 1) throw std::invalid_argument("field: components must be >= 1");
    data_.assign(static_cast<std::size_t>(size()), Scalar{});
  }

  const GridPtr& grid_ptr() const { return grid_; }
  const TorusPlaneGrid& grid() const { return *grid_; }
  int components() const { return comps_; }

  std::int64_t size() const {
    return static_cast<std::int64_t>(comps_) * grid_->nt() * grid_->nx() * grid_->nx2() *
           grid_->nz();
  }
  std::int64_t points_per_component() const { return size() / comps_; }

  std::int64_t index(int c, int it, int j1, int j2, int iz) const {
    return (((static_cast<std::int64_t>(c) * grid_->nt() + it) * grid_->nx() + j1) *
                grid_->nx2() +
            j2) *
               grid_->nz() +
           iz;
  }

  Scalar& at(int c, int it, int j1, int j2, int iz) {
    return data_[static_cast<std::size_t>(index(c, it, j1, j2, iz))];
  }
  const Scalar& at(int c, int it, int j1, int j2, int iz) const {
    return data_[static_cast<std::size_t>(index(c, it, j1, j2, iz))];
  }

  std::vector<Scalar>& raw() { return data_; }
  const std::vector<Scalar>& raw() const { return data_; }

 protected:
  GridPtr grid_;
  int comps_ = 0;
  std::vector<Scalar> data_;
};

}  // namespace detail

// Real-valued samples u(t_i, x'_j, z_k) on the grid.
class PhysicalField : public detail::FieldStorage<double> {
 public:
  PhysicalField() = default;
  PhysicalField(GridPtr grid, int components)
      : detail::FieldStorage<double>(std::move(grid), components) {}

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }
};

// Complex mode coefficients u_hat(k_i, xi_j, z_k): the working
// representation for every multiplier operation. Coefficients of real data
// satisfy u_hat(-k,-xi) = conj(u_hat(k,xi)).
class SpectralField : public detail::FieldStorage<cdouble> {
 public:
  SpectralField() = default;
  SpectralField(GridPtr grid, int components)
      : detail::FieldStorage<cdouble>(std::move(grid), components) {}

  double max_abs() const {
    double m = 0.0;
    for (const cdouble& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  // Largest deviation from Hermitian symmetry over all mode pairs.
  double hermitian_defect() const {
    const auto& g = grid();
    double worst = 0.0;
    for (int c = 0; c < comps_; ++c)
      for (int it = 0; it < g.nt(); ++it)
        for (int j1 = 0; j1 < g.nx(); ++j1)
          for (int j2 = 0; j2 < g.nx2(); ++j2)
            for (int iz = 0; iz < g.nz(); ++iz) {
              const cdouble a = at(c, it, j1, j2, iz);
              const cdouble b = at(c, g.time_conj_index(it), g.tang_conj_index(j1),
                                   g.dim() == 3 ? g.tang_conj_index(j2) : 0, iz);
              worst = std::max(worst, std::abs(a - std::conj(b)));
            }
    return worst;
  }
};

inline void require_same_grid(const TorusPlaneGrid& a, const TorusPlaneGrid& b,
                              const char* where) {
  if (!a.same_layout(b))
    throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

}  // namespace tpstokes

#endif  // TPSTOKES_FIELD_HPP
