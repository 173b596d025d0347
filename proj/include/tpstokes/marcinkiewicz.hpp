#ifndef TPSTOKES_MARCINKIEWICZ_HPP
#define TPSTOKES_MARCINKIEWICZ_HPP

#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tpstokes/core.hpp"

namespace tpstokes {

// Numerical audit of the Marcinkiewicz multiplier condition: maxima of
//   |eta^{e0} xi_1^{e1} ... xi_d^{ed} * d^e symbol(eta, xi)|
// over a signed dyadic lattice, for every derivative mask e in {0,1}^{d+1}.
// Mixed partials are nested central finite differences with a relative step
// per coordinate. A bounded-symbol certificate this is not; it is a
// regression instrument whose suprema should be finite and stable under
// lattice refinement.
struct AuditEntry {
  unsigned mask = 0;  // bit 0: eta, bit 1..d: xi components
  double sup = 0.0;
};

struct AuditReport {
  std::string symbol_name;
  int points_per_octave = 1;
  std::vector<AuditEntry> entries;
  // Set when the plain supremum |symbol| concentrates on the innermost or
  // outermost dyadic shell and keeps growing there (e.g. 1/|xi| near 0).
  bool suspected_unbounded = false;

  double max_sup() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.sup);
    return m;
  }
};

using SymbolFn = std::function<cdouble(double eta, const std::array<double, 2>& xi)>;

inline AuditReport marcinkiewicz_audit(const SymbolFn& symbol, const std::string& name,
                                       int tang_dims, int points_per_octave = 1,
                                       int min_exp = -10, int max_exp = 10,
                                       double rel_step = 1e-4) {
  if (tang_dims < 1 || tang_dims > 2)
    throw std::invalid_argument("marcinkiewicz_audit: tangential dims must be 1 or 2");
  AuditReport report;
  report.symbol_name = name;
  report.points_per_octave = points_per_octave;

  std::vector<double> mags;
  for (int e = min_exp; e < max_exp; ++e)
    for (int s = 0; s < points_per_octave; ++s)
      mags.push_back(std::ldexp(std::pow(2.0, static_cast<double>(s) / points_per_octave), e));
  mags.push_back(std::ldexp(1.0, max_exp));
  std::vector<double> signed_mags;
  for (double m : mags) {
    signed_mags.push_back(m);
    signed_mags.push_back(-m);
  }

  const int ncoord = 1 + tang_dims;
  auto eval = [&](const std::array<double, 3>& c) {
    return symbol(c[0], {c[1], tang_dims == 2 ? c[2] : 0.0});
  };
  std::function<cdouble(unsigned, std::array<double, 3>)> deriv =
      [&](unsigned mask, std::array<double, 3> c) -> cdouble {
    if (mask == 0) return eval(c);
    const int j = std::countr_zero(mask);
    const unsigned rest = mask & (mask - 1);
    const double h = rel_step * std::abs(c[static_cast<std::size_t>(j)]);
    std::array<double, 3> cp = c, cm = c;
    cp[static_cast<std::size_t>(j)] += h;
    cm[static_cast<std::size_t>(j)] -= h;
    return (deriv(rest, cp) - deriv(rest, cm)) / (2.0 * h);
  };

  const double inner = mags.front();
  const double outer = mags.back();
  bool nonfinite = false;
  const unsigned nmask = 1u << ncoord;
  for (unsigned mask = 0; mask < nmask; ++mask) {
    AuditEntry entry{mask, 0.0};
    double sup_inner = 0.0, sup_outer = 0.0, sup_bulk = 0.0;
    const std::vector<double>& xi2s =
        tang_dims == 2 ? signed_mags : std::vector<double>{0.0};
    for (double eta : signed_mags)
      for (double x1 : signed_mags)
        for (double x2 : xi2s) {
          const std::array<double, 3> c{eta, x1, x2};
          const cdouble v = deriv(mask, c);
          double w = 1.0;
          for (int j = 0; j < ncoord; ++j)
            if (mask & (1u << j)) w *= std::abs(c[static_cast<std::size_t>(j)]);
          const double val = w * std::abs(v);
          if (!std::isfinite(val)) {
            nonfinite = true;
            continue;
          }
          entry.sup = std::max(entry.sup, val);
          if (mask == 0) {
            double cmin = std::abs(eta), cmax = std::abs(eta);
            for (int j = 1; j < ncoord; ++j) {
              cmin = std::min(cmin, std::abs(c[static_cast<std::size_t>(j)]));
              cmax = std::max(cmax, std::abs(c[static_cast<std::size_t>(j)]));
            }
            if (cmin <= inner)
              sup_inner = std::max(sup_inner, val);
            else if (cmax >= outer)
              sup_outer = std::max(sup_outer, val);
            else
              sup_bulk = std::max(sup_bulk, val);
          }
        }
    if (mask == 0 && entry.sup > 0.0 &&
        (sup_inner > 1.9 * std::max(sup_bulk, 1e-300) ||
         sup_outer > 1.9 * std::max(sup_bulk, 1e-300)))
      report.suspected_unbounded = true;
    report.entries.push_back(entry);
  }
  if (nonfinite)
    throw precondition_error("marcinkiewicz_audit: non-finite value encountered for symbol " +
                             name);
  return report;
}

}  // namespace tpstokes

#endif  // TPSTOKES_MARCINKIEWICZ_HPP
