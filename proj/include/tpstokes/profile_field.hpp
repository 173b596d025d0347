#ifndef TPSTOKES_PROFILE_FIELD_HPP
#define TPSTOKES_PROFILE_FIELD_HPP

#include <array>
#include <map>
#include <vector>

#include "tpstokes/field.hpp"
#include "tpstokes/profiles.hpp"
#include "tpstokes/transforms.hpp"

namespace tpstokes {

// Spectral coefficients on the (k, xi) lattice of a boundary field (no
// normal coordinate): the format of Dirichlet data and traces.
class BoundaryModes {
 public:
  BoundaryModes() = default;
  BoundaryModes(GridPtr grid, int components) : grid_(std::move(grid)), comps_(components) {
    data_.assign(static_cast<std::size_t>(comps_) * grid_->nt() * grid_->nx() * grid_->nx2(),
                 cdouble{});
  }

  const GridPtr& grid_ptr() const { return grid_; }
  const TorusPlaneGrid& grid() const { return *grid_; }
  int components() const { return comps_; }

  cdouble& at(int c, int it, int j1, int j2) {
    return data_[static_cast<std::size_t>(((static_cast<std::int64_t>(c) * grid_->nt() + it) *
                                               grid_->nx() +
                                           j1) *
                                              grid_->nx2() +
                                          j2)];
  }
  const cdouble& at(int c, int it, int j1, int j2) const {
    return const_cast<BoundaryModes*>(this)->at(c, it, j1, j2);
  }

  std::vector<cdouble>& raw() { return data_; }
  const std::vector<cdouble>& raw() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  // Writes coefficient v at (k-index, xi-indices) and the conjugate at the
  // mirrored mode so the represented field is real.
  void set_hermitian(int c, int it, int j1, int j2, cdouble v) {
    at(c, it, j1, j2) = v;
    at(c, grid_->time_conj_index(it), grid_->tang_conj_index(j1),
       grid_->dim() == 3 ? grid_->tang_conj_index(j2) : 0) = std::conj(v);
  }

  double hermitian_defect() const {
    double worst = 0.0;
    const auto& g = *grid_;
    for (int c = 0; c < comps_; ++c)
      for (int it = 0; it < g.nt(); ++it)
        for (int j1 = 0; j1 < g.nx(); ++j1)
          for (int j2 = 0; j2 < g.nx2(); ++j2)
            worst = std::max(worst, std::abs(at(c, it, j1, j2) -
                                             std::conj(at(c, g.time_conj_index(it),
                                                          g.tang_conj_index(j1),
                                                          g.dim() == 3 ? g.tang_conj_index(j2) : 0))));
    return worst;
  }

  // Largest steady (k = 0) coefficient; zero for purely oscillatory data.
  double steady_magnitude() const {
    double m = 0.0;
    const auto& g = *grid_;
    for (int c = 0; c < comps_; ++c)
      for (int j1 = 0; j1 < g.nx(); ++j1)
        for (int j2 = 0; j2 < g.nx2(); ++j2)
          m = std::max(m, std::abs(at(c, g.time_zero_index(), j1, j2)));
    return m;
  }

  BoundaryModes& operator+=(const BoundaryModes& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  BoundaryModes& operator*=(double a) {
    for (auto& v : data_) v *= a;
    return *this;
  }

  // Physical samples on the (t, x') lattice via plain mode sums per axis.
  std::vector<double> to_physical() const {
    std::vector<cdouble> work = data_;
    detail::transform_lattice(work, comps_, grid_->nt(), grid_->nx(), grid_->nx2(), 1, false);
    std::vector<double> out(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
    return out;
  }

 private:
  GridPtr grid_;
  int comps_ = 0;
  std::vector<cdouble> data_;
};

// Dirichlet boundary data: n components on T x [0,L)^{n-1} plus the
// compatibility requirement on the normal component (vanishing tangential
// mean at every nonzero time frequency).
struct BoundaryData {
  BoundaryModes modes;

  BoundaryData() = default;
  explicit BoundaryData(BoundaryModes m) : modes(std::move(m)) {
    if (modes.components() != modes.grid().dim())
      throw std::invalid_argument("BoundaryData: expected n components");
  }

  // Largest |h_n(k, xi = 0)| over k != 0; must vanish for the oscillatory
  // boundary solver (the 1/|xi| term of the pressure symbol).
  double compat_normal_defect(int* offending_k = nullptr) const {
    const auto& g = modes.grid();
    double worst = 0.0;
    for (int it = 0; it < g.nt(); ++it) {
      if (it == g.time_zero_index()) continue;
      const double v = std::abs(modes.at(g.dim() - 1, it, g.tang_zero_index(),
                                         g.dim() == 3 ? g.tang_zero_index() : 0));
      if (v > worst) {
        worst = v;
        if (offending_k) *offending_k = it - g.time_zero_index();
      }
    }
    return worst;
  }

  bool compat_normal(double tol = 1e-13) const { return compat_normal_defect() <= tol; }
};

// A field whose modes carry closed-form x_n-profiles: the working currency
// of all solver stages. Mode set is sparse; missing modes are zero.
class ProfileField {
 public:
  using Key = std::array<int, 3>;  // (time index, xi1 index, xi2 index)

  ProfileField() = default;
  ProfileField(GridPtr grid, int components) : grid_(std::move(grid)), comps_(components) {}

  const GridPtr& grid_ptr() const { return grid_; }
  const TorusPlaneGrid& grid() const { return *grid_; }
  int components() const { return comps_; }
  std::size_t mode_count() const { return modes_.size(); }
  const std::map<Key, std::vector<Profile>>& modes() const { return modes_; }
  std::map<Key, std::vector<Profile>>& modes() { return modes_; }

  std::vector<Profile>& mode(int it, int j1, int j2) {
    auto& v = modes_[Key{it, j1, j2}];
    if (v.empty()) v.resize(static_cast<std::size_t>(comps_));
    return v;
  }
  const std::vector<Profile>* find(int it, int j1, int j2) const {
    auto it_ = modes_.find(Key{it, j1, j2});
    return it_ == modes_.end() ? nullptr : &it_->second;
  }

  // Adds profiles at (it, j1, j2) and their conjugates at the mirrored mode.
  void add_hermitian(int it, int j1, int j2, const std::vector<Profile>& comp) {
    auto& a = mode(it, j1, j2);
    for (int c = 0; c < comps_; ++c) a[static_cast<std::size_t>(c)] += comp[static_cast<std::size_t>(c)];
    const int itc = grid_->time_conj_index(it);
    const int j1c = grid_->tang_conj_index(j1);
    const int j2c = grid_->dim() == 3 ? grid_->tang_conj_index(j2) : 0;
    auto& b = mode(itc, j1c, j2c);
    for (int c = 0; c < comps_; ++c)
      b[static_cast<std::size_t>(c)] += comp[static_cast<std::size_t>(c)].conjugated();
  }

  ProfileField& operator+=(const ProfileField& o) {
    for (const auto& [key, profs] : o.modes_) {
      auto& mine = modes_[key];
      if (mine.empty()) mine.resize(static_cast<std::size_t>(comps_));
      for (int c = 0; c < comps_; ++c) mine[static_cast<std::size_t>(c)] += profs[static_cast<std::size_t>(c)];
    }
    return *this;
  }
  ProfileField& operator*=(cdouble a) {
    for (auto& [key, profs] : modes_)
      for (auto& p : profs) p *= a;
    return *this;
  }
  friend ProfileField operator+(ProfileField a, const ProfileField& b) { return a += b; }
  friend ProfileField operator*(cdouble a, ProfileField f) { return f *= a; }

  // Extracts a single component as a scalar field.
  ProfileField component(int c) const {
    ProfileField out(grid_, 1);
    for (const auto& [key, profs] : modes_)
      out.modes_[key] = {profs[static_cast<std::size_t>(c)]};
    return out;
  }

  template <typename Fn>  // Fn(key, component, profile) -> Profile
  ProfileField map(int out_comps, Fn&& fn) const {
    ProfileField out(grid_, out_comps);
    for (const auto& [key, profs] : modes_) {
      std::vector<Profile> mapped(static_cast<std::size_t>(out_comps));
      for (int c = 0; c < out_comps; ++c)
        mapped[static_cast<std::size_t>(c)] = fn(key, c, profs);
      out.modes_[key] = std::move(mapped);
    }
    return out;
  }

  ProfileField derivative_time() const {
    return map(comps_, [&](const Key& key, int c, const std::vector<Profile>& p) {
      return (iunit * grid_->time_freq(key[0])) * p[static_cast<std::size_t>(c)];
    });
  }
  ProfileField derivative_tangential(int dir) const {
    return map(comps_, [&](const Key& key, int c, const std::vector<Profile>& p) {
      const double xi = grid_->tang_freq(key[static_cast<std::size_t>(dir) + 1]);
      return (iunit * xi) * p[static_cast<std::size_t>(c)];
    });
  }
  ProfileField derivative_normal() const {
    return map(comps_, [&](const Key&, int c, const std::vector<Profile>& p) {
      return p[static_cast<std::size_t>(c)].derivative();
    });
  }

  // Divergence of an n-component field: sum_j i xi_j v_j + d/dx_n w.
  ProfileField divergence() const {
    if (comps_ != grid_->dim())
      throw std::invalid_argument("divergence: field must have n components");
    return map(1, [&](const Key& key, int, const std::vector<Profile>& p) {
      Profile d = p.back().derivative();
      d += (iunit * grid_->tang_freq(key[1])) * p[0];
      if (grid_->dim() == 3) d += (iunit * grid_->tang_freq(key[2])) * p[1];
      return d;
    });
  }

  // Laplacian: -( |xi|^2 ) + d^2/dx_n^2 per mode.
  ProfileField laplacian() const {
    return map(comps_, [&](const Key& key, int c, const std::vector<Profile>& p) {
      const auto xi = grid_->tang_freqs(key[1], key[2]);
      const double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
      Profile r = p[static_cast<std::size_t>(c)].derivative().derivative();
      r += cdouble{-xi2, 0.0} * p[static_cast<std::size_t>(c)];
      return r;
    });
  }

  BoundaryModes trace() const {
    BoundaryModes out(grid_, comps_);
    for (const auto& [key, profs] : modes_)
      for (int c = 0; c < comps_; ++c)
        out.at(c, key[0], key[1], key[2]) = profs[static_cast<std::size_t>(c)].trace();
    return out;
  }

  // Dense spectral samples on the grid's normal nodes.
  SpectralField to_spectral(const TrigTables* tables = nullptr) const {
    SpectralField out(grid_, comps_);
    const auto& z = grid_->normal_nodes();
    std::vector<const std::pair<const Key, std::vector<Profile>>*> items;
    items.reserve(modes_.size());
    for (const auto& kv : modes_) items.push_back(&kv);
    parallel_for(static_cast<std::int64_t>(items.size()), [&](std::int64_t i) {
      const auto& [key, profs] = *items[static_cast<std::size_t>(i)];
      for (int c = 0; c < comps_; ++c) {
        cdouble* slot = out.raw().data() + out.index(c, key[0], key[1], key[2], 0);
        accumulate_profile_on_nodes(profs[static_cast<std::size_t>(c)], z, slot, tables);
      }
    });
    return out;
  }

  PhysicalField to_physical() const { return inverse_transform(to_spectral(), 1e-8); }

  double hermitian_defect() const {
    double worst = 0.0;
    const auto& z = grid_->normal_nodes();
    for (const auto& [key, profs] : modes_) {
      const Key conj_key{grid_->time_conj_index(key[0]), grid_->tang_conj_index(key[1]),
                         grid_->dim() == 3 ? grid_->tang_conj_index(key[2]) : 0};
      const auto* partner = modes_.count(conj_key) ? &modes_.at(conj_key) : nullptr;
      for (int c = 0; c < comps_; ++c)
        for (double x : {z.front(), z[z.size() / 2], z.back()}) {
          const cdouble a = profs[static_cast<std::size_t>(c)].eval(x);
          const cdouble b = partner ? (*partner)[static_cast<std::size_t>(c)].eval(x) : cdouble{};
          worst = std::max(worst, std::abs(a - std::conj(b)));
        }
    }
    return worst;
  }

  // Largest coefficient magnitude over steady (k = 0) modes.
  double steady_magnitude() const {
    double m = 0.0;
    for (const auto& [key, profs] : modes_)
      if (key[0] == grid_->time_zero_index())
        for (const auto& p : profs) m = std::max(m, p.coef_magnitude());
    return m;
  }
  double oscillatory_magnitude() const {
    double m = 0.0;
    for (const auto& [key, profs] : modes_)
      if (key[0] != grid_->time_zero_index())
        for (const auto& p : profs) m = std::max(m, p.coef_magnitude());
    return m;
  }

  ProfileField steady_part() const {
    ProfileField out(grid_, comps_);
    for (const auto& [key, profs] : modes_)
      if (key[0] == grid_->time_zero_index()) out.modes_[key] = profs;
    return out;
  }
  ProfileField oscillatory_part() const {
    ProfileField out(grid_, comps_);
    for (const auto& [key, profs] : modes_)
      if (key[0] != grid_->time_zero_index()) out.modes_[key] = profs;
    return out;
  }

  double max_coef_magnitude() const {
    double m = 0.0;
    for (const auto& [key, profs] : modes_)
      for (const auto& p : profs) m = std::max(m, p.coef_magnitude());
    return m;
  }

  void compact(double drop_below = 0.0) {
    std::erase_if(modes_, [&](auto& kv) {
      bool all_zero = true;
      for (auto& p : kv.second) {
        p.compact();
        if (p.coef_magnitude() > drop_below) all_zero = false;
      }
      return all_zero;
    });
  }

  // Re-expresses the field on a finer lattice with the same tau, L and box:
  // modes are identified by their frequencies.
  ProfileField regrid(const GridPtr& finer) const {
    if (finer->tau() != grid_->tau() || finer->box_length() != grid_->box_length() ||
        finer->dim() != grid_->dim() || finer->x_max() != grid_->x_max() ||
        finer->time_half_modes() < grid_->time_half_modes() ||
        finer->tang_half_modes() < grid_->tang_half_modes())
      throw std::invalid_argument("ProfileField::regrid: target lattice must refine this one");
    ProfileField out(finer, comps_);
    const int dt = finer->time_zero_index() - grid_->time_zero_index();
    const int dx = finer->tang_zero_index() - grid_->tang_zero_index();
    for (const auto& [key, profs] : modes_)
      out.modes_[Key{key[0] + dt, key[1] + dx, grid_->dim() == 3 ? key[2] + dx : 0}] = profs;
    return out;
  }

 private:
  GridPtr grid_;
  int comps_ = 0;
  std::map<Key, std::vector<Profile>> modes_;
};

}  // namespace tpstokes

#endif  // TPSTOKES_PROFILE_FIELD_HPP
