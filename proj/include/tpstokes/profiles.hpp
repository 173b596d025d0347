#ifndef TPSTOKES_PROFILES_HPP
#define TPSTOKES_PROFILES_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "tpstokes/core.hpp"

namespace tpstokes {

// One exponential-polynomial term coef * x^power * e^{-rate x}.
struct ExpTerm {
  cdouble coef{};
  cdouble rate{};
  int power = 0;
};

// Closed-form x_n-profile of a single Fourier mode: a finite sum of
// exponential-polynomial terms plus a finite sine/cosine series on [0, box]
// with frequencies zeta_m = pi m / box. Every stage of the solver produces
// profiles in this family, so derivatives, traces and residuals are exact.
class Profile {
 public:
  std::vector<ExpTerm> exp_terms;
  std::vector<cdouble> sin_c;  // index m >= 1 (index 0 unused)
  std::vector<cdouble> cos_c;  // index m >= 0
  double box = 0.0;            // 0 while there is no trigonometric content

  Profile() = default;

  static Profile exponential(cdouble coef, cdouble rate, int power = 0) {
    Profile p;
    if (std::abs(coef) != 0.0) p.exp_terms.push_back({coef, rate, power});
    return p;
  }
  static Profile sine(int m, cdouble coef, double box_length) {
    Profile p;
    p.box = box_length;
    p.sin_c.assign(static_cast<std::size_t>(m) + 1, cdouble{});
    p.sin_c[static_cast<std::size_t>(m)] = coef;
    return p;
  }
  static Profile cosine(int m, cdouble coef, double box_length) {
    Profile p;
    p.box = box_length;
    p.cos_c.assign(static_cast<std::size_t>(m) + 1, cdouble{});
    p.cos_c[static_cast<std::size_t>(m)] = coef;
    return p;
  }

  bool has_trig() const { return !sin_c.empty() || !cos_c.empty(); }
  bool empty() const { return exp_terms.empty() && !has_trig(); }

  double zeta(std::size_t m) const { return pi * static_cast<double>(m) / box; }

  cdouble eval(double x) const {
    cdouble v{};
    for (const auto& t : exp_terms) {
      double xp = 1.0;
      for (int i = 0; i < t.power; ++i) xp *= x;
      v += t.coef * xp * std::exp(-t.rate * x);
    }
    for (std::size_t m = 1; m < sin_c.size(); ++m)
      if (sin_c[m] != cdouble{}) v += sin_c[m] * std::sin(zeta(m) * x);
    for (std::size_t m = 0; m < cos_c.size(); ++m)
      if (cos_c[m] != cdouble{}) v += cos_c[m] * std::cos(zeta(m) * x);
    return v;
  }

  cdouble trace() const { return eval(0.0); }

  Profile derivative() const {
    Profile d;
    d.box = box;
    for (const auto& t : exp_terms) {
      if (t.power > 0) d.exp_terms.push_back({t.coef * static_cast<double>(t.power), t.rate, t.power - 1});
      if (t.rate != cdouble{}) d.exp_terms.push_back({-t.coef * t.rate, t.rate, t.power});
    }
    if (has_trig()) {
      d.sin_c.assign(std::max(sin_c.size(), cos_c.size()), cdouble{});
      d.cos_c.assign(std::max(sin_c.size(), cos_c.size()), cdouble{});
      for (std::size_t m = 1; m < sin_c.size(); ++m) d.cos_c[m] += sin_c[m] * zeta(m);
      for (std::size_t m = 1; m < cos_c.size(); ++m) d.sin_c[m] -= cos_c[m] * zeta(m);
    }
    d.compact();
    return d;
  }

  // F with F' = this and F -> 0 at infinity for the exponential part.
  // Requires Re rate > 0 on every exponential term; trigonometric terms map
  // sin -> -cos/zeta, cos -> sin/zeta (m >= 1). A constant term (cos m=0 or
  // rate 0) has no admissible antiderivative and is rejected.
  Profile antiderivative() const {
    Profile a;
    a.box = box;
    for (const auto& t : exp_terms) {
      if (!(t.rate.real() > 0.0))
        throw precondition_error("profile antiderivative: non-decaying exponential term");
      // -e^{-mu x} sum_j p!/(p-j)! x^{p-j} / mu^{j+1}
      double fact = 1.0;
      cdouble mu_pow = t.rate;
      for (int j = 0; j <= t.power; ++j) {
        a.exp_terms.push_back({-t.coef * fact / mu_pow, t.rate, t.power - j});
        fact *= static_cast<double>(t.power - j);
        mu_pow *= t.rate;
      }
    }
    if (has_trig()) {
      a.sin_c.assign(std::max(sin_c.size(), cos_c.size()), cdouble{});
      a.cos_c.assign(std::max(sin_c.size(), cos_c.size()), cdouble{});
      for (std::size_t m = 1; m < sin_c.size(); ++m) a.cos_c[m] -= sin_c[m] / zeta(m);
      for (std::size_t m = 1; m < cos_c.size(); ++m) a.sin_c[m] += cos_c[m] / zeta(m);
      if (!cos_c.empty() && cos_c[0] != cdouble{})
        throw precondition_error("profile antiderivative: constant term has no bounded antiderivative");
    }
    a.compact();
    return a;
  }

  // Particular solution of (D^2 - s^2) y = this, s >= 0. Exponential terms
  // resonant with e^{-s x} raise the polynomial degree by one.
  Profile resolvent(double s) const {
    Profile y;
    y.box = box;
    for (const auto& t : exp_terms) {
      const bool resonant = std::abs(t.rate - cdouble{s, 0.0}) <= 1e-12 * (1.0 + s);
      if (!resonant) {
        const cdouble denom = t.rate * t.rate - s * s;
        if (std::abs(denom) == 0.0)
          throw precondition_error("profile resolvent: growing characteristic rate");
        // descending-power elimination
        std::vector<cdouble> a(static_cast<std::size_t>(t.power) + 1, cdouble{});
        for (int m = t.power; m >= 0; --m) {
          cdouble rhs = (m == t.power) ? t.coef : cdouble{};
          if (m + 1 <= t.power) rhs += 2.0 * (m + 1.0) * t.rate * a[static_cast<std::size_t>(m) + 1];
          if (m + 2 <= t.power) rhs -= (m + 2.0) * (m + 1.0) * a[static_cast<std::size_t>(m) + 2];
          a[static_cast<std::size_t>(m)] = rhs / denom;
        }
        for (int m = 0; m <= t.power; ++m)
          if (a[static_cast<std::size_t>(m)] != cdouble{})
            y.exp_terms.push_back({a[static_cast<std::size_t>(m)], t.rate, m});
      } else {
        if (s == 0.0)
          throw precondition_error("profile resolvent: constant term with s = 0");
        std::vector<cdouble> a(static_cast<std::size_t>(t.power) + 2, cdouble{});
        for (int m = t.power; m >= 0; --m) {
          cdouble rhs = (m == t.power) ? t.coef : cdouble{};
          if (m + 2 <= t.power + 1) rhs -= (m + 2.0) * (m + 1.0) * a[static_cast<std::size_t>(m) + 2];
          a[static_cast<std::size_t>(m) + 1] = -rhs / (2.0 * (m + 1.0) * s);
        }
        for (int m = 1; m <= t.power + 1; ++m)
          if (a[static_cast<std::size_t>(m)] != cdouble{})
            y.exp_terms.push_back({a[static_cast<std::size_t>(m)], cdouble{s, 0.0}, m});
      }
    }
    if (has_trig()) {
      y.sin_c.assign(sin_c.size(), cdouble{});
      y.cos_c.assign(cos_c.size(), cdouble{});
      for (std::size_t m = 1; m < sin_c.size(); ++m)
        y.sin_c[m] = -sin_c[m] / (zeta(m) * zeta(m) + s * s);
      for (std::size_t m = 0; m < cos_c.size(); ++m) {
        if (m == 0 && s == 0.0 && cos_c[0] != cdouble{})
          throw precondition_error("profile resolvent: constant term with s = 0");
        y.cos_c[m] = -cos_c[m] / (zeta(m) * zeta(m) + s * s);
      }
    }
    y.compact();
    return y;
  }

  Profile& operator+=(const Profile& o) {
    if (o.has_trig()) {
      if (!has_trig()) {
        box = o.box;
      } else if (box != o.box) {
        throw std::invalid_argument("profile add: mismatched trigonometric boxes");
      }
      if (sin_c.size() < o.sin_c.size()) sin_c.resize(o.sin_c.size());
      if (cos_c.size() < o.cos_c.size()) cos_c.resize(o.cos_c.size());
      for (std::size_t m = 0; m < o.sin_c.size(); ++m) sin_c[m] += o.sin_c[m];
      for (std::size_t m = 0; m < o.cos_c.size(); ++m) cos_c[m] += o.cos_c[m];
    }
    exp_terms.insert(exp_terms.end(), o.exp_terms.begin(), o.exp_terms.end());
    compact();
    return *this;
  }

  Profile& operator*=(cdouble a) {
    for (auto& t : exp_terms) t.coef *= a;
    for (auto& c : sin_c) c *= a;
    for (auto& c : cos_c) c *= a;
    compact();
    return *this;
  }

  friend Profile operator+(Profile a, const Profile& b) { return a += b; }
  friend Profile operator*(cdouble a, Profile p) { return p *= a; }

  Profile conjugated() const {
    Profile c = *this;
    for (auto& t : c.exp_terms) {
      t.coef = std::conj(t.coef);
      t.rate = std::conj(t.rate);
    }
    for (auto& v : c.sin_c) v = std::conj(v);
    for (auto& v : c.cos_c) v = std::conj(v);
    return c;
  }

  // Exact rescaling of trigonometric content to a box enlarged by an integer
  // factor: sin(pi m x / X) = sin(pi (rm) x / (rX)).
  Profile reboxed(double new_box) const {
    Profile r = *this;
    if (!has_trig()) return r;
    const double ratio = new_box / box;
    const int k = static_cast<int>(std::lround(ratio));
    if (k < 1 || std::abs(ratio - k) > 1e-12)
      throw std::invalid_argument("profile rebox: new box must be an integer multiple");
    r.sin_c.assign(sin_c.empty() ? 0 : 1 + (sin_c.size() - 1) * static_cast<std::size_t>(k),
                   cdouble{});
    r.cos_c.assign(cos_c.empty() ? 0 : 1 + (cos_c.size() - 1) * static_cast<std::size_t>(k),
                   cdouble{});
    for (std::size_t m = 1; m < sin_c.size(); ++m)
      r.sin_c[m * static_cast<std::size_t>(k)] = sin_c[m];
    for (std::size_t m = 0; m < cos_c.size(); ++m)
      r.cos_c[m * static_cast<std::size_t>(k)] = cos_c[m];
    r.box = new_box;
    r.compact();
    return r;
  }

  // Magnitude bound of the exponential part at x (the trigonometric part is
  // box-native and vanishes or is periodic at the box end).
  double exp_tail_at(double x) const {
    double v = 0.0;
    for (const auto& t : exp_terms) {
      double xp = 1.0;
      for (int i = 0; i < t.power; ++i) xp *= x;
      v += std::abs(t.coef) * xp * std::exp(-t.rate.real() * x);
    }
    return v;
  }

  double coef_magnitude() const {
    double m = 0.0;
    for (const auto& t : exp_terms) m = std::max(m, std::abs(t.coef));
    for (const auto& c : sin_c) m = std::max(m, std::abs(c));
    for (const auto& c : cos_c) m = std::max(m, std::abs(c));
    return m;
  }

  void compact() {
    // merge identical (rate, power) pairs, drop zero terms and trailing zeros
    std::vector<ExpTerm> merged;
    for (const auto& t : exp_terms) {
      if (t.coef == cdouble{}) continue;
      bool found = false;
      for (auto& u : merged)
        if (u.rate == t.rate && u.power == t.power) {
          u.coef += t.coef;
          found = true;
          break;
        }
      if (!found) merged.push_back(t);
    }
    std::erase_if(merged, [](const ExpTerm& t) { return t.coef == cdouble{}; });
    exp_terms = std::move(merged);
    while (!sin_c.empty() && sin_c.back() == cdouble{}) sin_c.pop_back();
    if (sin_c.size() == 1) sin_c.clear();  // index 0 is never used
    while (!cos_c.empty() && cos_c.back() == cdouble{}) cos_c.pop_back();
    if (!has_trig()) box = 0.0;
  }
};

// Shared sin/cos node tables for evaluating many trig-bearing profiles on
// the same normal grid.
class TrigTables {
 public:
  TrigTables(double box, const std::vector<double>& nodes, std::size_t max_modes)
      : box_(box), nz_(nodes.size()), mmax_(max_modes) {
    sin_.resize(mmax_ * nz_);
    cos_.resize(mmax_ * nz_);
    for (std::size_t m = 0; m < mmax_; ++m)
      for (std::size_t i = 0; i < nz_; ++i) {
        const double a = pi * static_cast<double>(m) * nodes[i] / box_;
        sin_[m * nz_ + i] = std::sin(a);
        cos_[m * nz_ + i] = std::cos(a);
      }
  }

  double box() const { return box_; }
  std::size_t modes() const { return mmax_; }
  const double* sin_row(std::size_t m) const { return sin_.data() + m * nz_; }
  const double* cos_row(std::size_t m) const { return cos_.data() + m * nz_; }

 private:
  double box_;
  std::size_t nz_;
  std::size_t mmax_;
  std::vector<double> sin_, cos_;
};

// Evaluates `p` on all nodes, adding into out[i]; uses the tables for the
// trigonometric part when the boxes match.
inline void accumulate_profile_on_nodes(const Profile& p, const std::vector<double>& nodes,
                                        cdouble* out, const TrigTables* tables = nullptr) {
  const std::size_t nz = nodes.size();
  for (const auto& t : p.exp_terms)
    for (std::size_t i = 0; i < nz; ++i) {
      double xp = 1.0;
      for (int j = 0; j < t.power; ++j) xp *= nodes[i];
      out[i] += t.coef * xp * std::exp(-t.rate * nodes[i]);
    }
  if (!p.has_trig()) return;
  const bool tab = tables != nullptr && tables->box() == p.box &&
                   std::max(p.sin_c.size(), p.cos_c.size()) <= tables->modes();
  for (std::size_t m = 1; m < p.sin_c.size(); ++m) {
    if (p.sin_c[m] == cdouble{}) continue;
    if (tab) {
      const double* row = tables->sin_row(m);
      for (std::size_t i = 0; i < nz; ++i) out[i] += p.sin_c[m] * row[i];
    } else {
      for (std::size_t i = 0; i < nz; ++i) out[i] += p.sin_c[m] * std::sin(p.zeta(m) * nodes[i]);
    }
  }
  for (std::size_t m = 0; m < p.cos_c.size(); ++m) {
    if (p.cos_c[m] == cdouble{}) continue;
    if (tab) {
      const double* row = tables->cos_row(m);
      for (std::size_t i = 0; i < nz; ++i) out[i] += p.cos_c[m] * row[i];
    } else {
      for (std::size_t i = 0; i < nz; ++i) out[i] += p.cos_c[m] * std::cos(p.zeta(m) * nodes[i]);
    }
  }
}

}  // namespace tpstokes

#endif  // TPSTOKES_PROFILES_HPP
