#pragma once

// Normalizability of the closed-form levels, Weyl endpoint classification,
// the quadrature-generated second solution with the physical boundary
// condition, solution counting, and cross-sector deduplication.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "qpend/wavefunction.hpp"

namespace qpend {

enum class Weyl { limit_point, limit_circle };

inline std::string to_string(Weyl w) {
  return w == Weyl::limit_circle ? "LC" : "LP";
}

struct EndpointClass {
  Weyl at_zero = Weyl::limit_point;
  Weyl at_pi_or_infinity = Weyl::limit_point;
  TopKind kind = TopKind::trig;
};

inline EndpointClass endpoint_classification(HalfInt K, HalfInt M,
                                             TopKind kind) {
  EndpointClass e;
  e.kind = kind;
  if (kind == TopKind::trig) {
    if (M == K && M.twice == 0) {
      e.at_zero = e.at_pi_or_infinity = Weyl::limit_circle;
    } else if (M == K) {
      e.at_zero = Weyl::limit_circle;
      e.at_pi_or_infinity = Weyl::limit_point;
    } else if (M == -K) {
      e.at_zero = Weyl::limit_point;
      e.at_pi_or_infinity = Weyl::limit_circle;
    } else {
      e.at_zero = e.at_pi_or_infinity = Weyl::limit_point;
    }
  } else {
    e.at_pi_or_infinity = Weyl::limit_point;  // always at infinity
    e.at_zero = (K == M) ? Weyl::limit_circle : Weyl::limit_point;
  }
  return e;
}

struct IntegrabilityExponents {
  double at_zero = 0.0;  // leading power of |psi|^2 * weight near theta=0
  double at_pi = 0.0;    // near theta=pi (trig only; ignored for hyper)
  bool integrable = false;
};

// |psi|^2 sin(theta) ~ theta^(2a+1) at 0 and (pi-theta)^(2b+1) at pi;
// integrable endpoints need both powers > -1.  For the hyperbolic top the
// decaying branch handles infinity and only the theta=0 power matters.
inline IntegrabilityExponents integrability_exponents(const Sector& s,
                                                      HalfInt K, HalfInt M,
                                                      TopKind kind = TopKind::trig) {
  auto [a, b] = seed_exponents(s, K, M);
  IntegrabilityExponents e;
  e.at_zero = 2.0 * a.value() + 1.0;
  e.at_pi = 2.0 * b.value() + 1.0;
  if (kind == TopKind::trig) {
    e.integrable = e.at_zero > -1.0 && e.at_pi > -1.0;
  } else {
    e.integrable = s.branch < 0 && e.at_zero > -1.0;
  }
  return e;
}

// For integer K, M this reproduces the sector inequality table
// (1: K<=M and K>=-M; 2: K>=M and K>=-M; 3: K<=M and K<=-M; 4: K>=M and
// K<=-M; hyperbolic: minus branch with 1-,3-: K<=M; 2-,4-: K>=M); the
// exponent form extends it to the half-integer planar case.
inline bool normalizable(const Sector& s, HalfInt K, HalfInt M, TopKind kind) {
  return integrability_exponents(s, K, M, kind).integrable;
}

// Total closed-form normalizable solutions over all sectors after
// cross-sector deduplication.  Integer K, M: trig (n+1)(n+2), hyperbolic
// subtracts the double-counted ladder when n_max >= |M+K|.  Half-integer
// (planar) case: four times / twice the trig formula.
inline int count_solutions(int n_max, HalfInt K, HalfInt M, TopKind kind) {
  if (n_max < 0) return 0;
  int base = (n_max + 1) * (n_max + 2);
  bool planar = K.twice * K.twice + M.twice * M.twice == 1;
  if (planar) return (kind == TopKind::trig ? 4 : 2) * base;
  if (!K.is_integer() || !M.is_integer())
    throw domain_error(
        "count_solutions: only integer K, M or the planar case");
  if (kind == TopKind::trig) return base;
  int s = std::abs((M + K).as_int());
  if (n_max >= s) {
    int d = n_max - s;
    return base - (d + 1) * (d + 2) / 2;
  }
  return base;
}

// -------- second solution and boundary condition --------

struct Solution {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

inline Solution as_solution(const ClosedFormPsi& psi) {
  return {[psi](double t) { return psi.value(t); },
          [psi](double t) { return psi.value_d012(t)[1]; }};
}

// phi(theta) = psi(theta) * Integral_base^theta dt / (weight(t) psi(t)^2);
// base point pi/2 (trig) or 1 (hyper).  The Wronskian identity
// weight*(psi phi' - phi psi') = 1 holds by construction.
inline Solution second_solution(const Solution& psi, TopKind kind) {
  const double base = kind == TopKind::trig ? M_PI / 2.0 : 1.0;
  auto weight = [kind](double t) {
    return kind == TopKind::trig ? std::sin(t) : std::sinh(t);
  };
  auto integral = [psi, weight, base](double theta) {
    double lo = std::min(base, theta), hi = std::max(base, theta);
    for (int k = 0; k <= 64; ++k) {
      double t = lo + (hi - lo) * k / 64.0;
      double v = psi.value(t);
      double v0 = psi.value(lo);
      if (v * v0 < 0.0)
        throw domain_error("second_solution: psi has a node near theta=" +
                           std::to_string(t));
    }
    auto f = [&](double t) {
      double v = psi.value(t);
      return 1.0 / (weight(t) * v * v);
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, base, theta, 12, 1e-12);
  };
  auto value = [psi, integral](double theta) {
    return psi.value(theta) * integral(theta);
  };
  auto deriv = [psi, integral, weight](double theta) {
    return psi.deriv(theta) * integral(theta) +
           1.0 / (weight(theta) * psi.value(theta));
  };
  return {value, deriv};
}

namespace detail {

// Neville extrapolation of (x_i, y_i) to x = 0.
inline double extrapolate_to_zero(std::vector<double> x,
                                  std::vector<double> y) {
  std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      y[i] = (x[i + m] * y[i] - x[i] * y[i + m]) / (x[i + m] - x[i]);
  return y[0];
}

}  // namespace detail

// Physical boundary condition lim weight(theta)*psi'(theta) = 0 at every
// limit-circle endpoint (4-level Richardson toward the endpoint); LP
// endpoints impose nothing.  Non-finite derivatives fail the check.
inline bool physical_boundary_check(const Solution& psi,
                                    const EndpointClass& eclass) {
  auto limit_at = [&](double endpoint, int toward) {
    std::vector<double> xs, ys;
    for (int k = 2; k <= 5; ++k) {
      double off = std::pow(10.0, -k);
      double t = endpoint + toward * off;
      double w = eclass.kind == TopKind::trig ? std::sin(t) : std::sinh(t);
      ys.push_back(w * psi.deriv(t));
      xs.push_back(off);
    }
    for (double v : ys)
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    return std::abs(detail::extrapolate_to_zero(xs, ys));
  };
  if (eclass.at_zero == Weyl::limit_circle) {
    if (!(limit_at(0.0, +1) < 1e-6)) return false;
  }
  if (eclass.kind == TopKind::trig &&
      eclass.at_pi_or_infinity == Weyl::limit_circle) {
    if (!(limit_at(M_PI, -1) < 1e-6)) return false;
  }
  return true;
}

// -------- deduplication and enumeration --------

struct DedupeResult {
  std::vector<std::vector<std::size_t>> groups;  // indices into the input
  std::vector<std::size_t> representatives;      // first index of each group
};

namespace detail {

inline std::vector<double> dedupe_samples(const AlgebraicLevel& lv,
                                          const TopConfig& c) {
  ClosedFormPsi psi = wavefunction(lv, c);
  bool planar = c.K.twice * c.K.twice + c.M.twice * c.M.twice == 1;
  double lo, hi;
  if (lv.kind == TopKind::hyper) {
    lo = 0.2; hi = 3.9;
  } else if (planar) {
    lo = 0.15; hi = 2.0 * M_PI - 0.15;
  } else {
    lo = 0.15; hi = M_PI - 0.15;
  }
  std::vector<double> v(16);
  for (int k = 0; k < 16; ++k) {
    double t = lo + (hi - lo) * k / 15.0;
    // the gauged form is single-valued across theta=pi for the planar case
    v[k] = planar && lv.kind == TopKind::trig ? psi.gauged_value(t)
                                              : psi.value(t);
  }
  double nrm = 0.0;
  for (double x : v) nrm += x * x;
  nrm = std::sqrt(nrm);
  std::size_t imax = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (std::abs(v[k]) > std::abs(v[imax])) imax = k;
  double sgn = v[imax] < 0.0 ? -1.0 : 1.0;
  if (nrm > 0.0)
    for (double& x : v) x = x * sgn / nrm;
  return v;
}

}  // namespace detail

// Groups levels (all at one common parameter set) whose energies agree to
// `tol` and whose normalized wavefunctions agree pointwise up to overall
// sign at 16 interior angles.
inline DedupeResult dedupe_levels(const std::vector<AlgebraicLevel>& levels,
                                  const TopConfig& c, double tol = 1e-9) {
  std::vector<std::vector<double>> samp;
  samp.reserve(levels.size());
  for (const auto& lv : levels) samp.push_back(detail::dedupe_samples(lv, c));

  DedupeResult out;
  std::vector<bool> used(levels.size(), false);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> grp{i};
    used[i] = true;
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(levels[i].energy - levels[j].energy) >
          tol * std::max(1.0, std::abs(levels[i].energy)))
        continue;
      double dmax = 0.0;
      for (int k = 0; k < 16; ++k)
        dmax = std::max(dmax, std::abs(samp[i][k] - samp[j][k]));
      if (dmax <= tol) {
        grp.push_back(j);
        used[j] = true;
      }
    }
    out.representatives.push_back(grp.front());
    out.groups.push_back(std::move(grp));
  }
  return out;
}

// All normalizable levels of one kind, grouped by their integer kappa and
// deduplicated inside each group.  branch_filter: 0 = both, +1/-1 one only.
inline std::vector<AlgebraicLevel> enumerate_distinct_levels(
    int n_max, const TopConfig& base, TopKind kind, int branch_filter = 0) {
  if (!(base.zeta > 0.0))
    throw domain_error("enumerate_distinct_levels: zeta must be > 0");
  std::map<int, std::vector<std::pair<Sector, int>>> by_kappa;
  for (const Sector& s : all_sectors()) {
    if (branch_filter != 0 && s.branch != branch_filter) continue;
    if (!normalizable(s, base.K, base.M, kind)) continue;
    for (int n = 0; n <= n_max; ++n)
      by_kappa[qs_kappa_int(s, n, base.K, base.M)].push_back({s, n});
  }
  std::vector<AlgebraicLevel> out;
  for (const auto& [kap, specs] : by_kappa) {
    TopConfig c = base.with_eta(kap * std::sqrt(base.B * base.zeta));
    std::vector<AlgebraicLevel> grp;
    for (const auto& [s, n] : specs) {
      if (!block_levels_are_real(s, c, n)) continue;  // no real level
      auto levels = algebraic_levels(s, c, n, kind);
      grp.insert(grp.end(), levels.begin(), levels.end());
    }
    DedupeResult dd = dedupe_levels(grp, c);
    for (std::size_t r : dd.representatives) out.push_back(grp[r]);
  }
  return out;
}

inline int count_distinct_levels(int n_max, const TopConfig& base,
                                 TopKind kind, int branch_filter = 0) {
  return static_cast<int>(
      enumerate_distinct_levels(n_max, base, kind, branch_filter).size());
}

}  // namespace qpend
