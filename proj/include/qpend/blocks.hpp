#pragma once

// Tri-diagonal blocks of the polynomial-space operator for each sector and
// the exact algebraic levels: energies are negated block eigenvalues and
// eigenvectors are the polynomial multiplier coefficients in z.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qpend/exact.hpp"
#include "qpend/sectors.hpp"

namespace qpend {

// Acting on polynomials in z: T[l][l] from the sector diagonal rule,
// super-diagonal T[l-1][l] = B*l*(s_b+l), sub-diagonal T[l][l-1]
// = 2*eta - branch*4*sqrt(B*zeta)*(X+l), with s_b the cos(theta/2) seed
// exponent and X the QS parameter of the sector.
inline Eigen::MatrixXd block_matrix(const Sector& s, const TopConfig& c,
                                    int n) {
  if (n < 0) throw domain_error("block_matrix: n must be >= 0");
  const double B = c.B, eta = c.eta, zeta = c.zeta;
  const double K = c.K.value();
  const double X = sector_X(s, c.K, c.M).value();
  const double sb = seed_exponents(s, c.K, c.M).second.value();
  const double g = s.branch * 2.0 * std::sqrt(B * zeta);

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int l = 0; l <= n; ++l) {
    T(l, l) = -eta - B * (X * X + 2.0 * X * l + X + l * (l + 1.0) -
                          c.rho * K * K) +
              g * (sb + 2.0 * l + 1.0) + zeta;
    if (l >= 1) {
      T(l - 1, l) = B * l * (sb + l);
      T(l, l - 1) = 2.0 * eta - 2.0 * g * (X + l);
    }
  }
  return T;
}

// The element that must vanish for the (n+1) x (n+1) block to decouple
// from the rest of the operator.
inline double decoupling_element(const Sector& s, const TopConfig& c, int n) {
  const double X = sector_X(s, c.K, c.M).value();
  return 2.0 * c.eta -
         s.branch * 4.0 * std::sqrt(c.B * c.zeta) * (X + n + 1.0);
}

struct AlgebraicLevel {
  Sector sector;
  int n = 0;
  int i = 0;  // 0..n, ascending energy
  double energy = 0.0;
  std::vector<double> poly_coeffs;  // c[l] multiplies z^l
  TopKind kind = TopKind::trig;
};

namespace detail {

// Polished eigenpair of the tridiagonal block.  At a QS point the
// sub-diagonal entries 2*eta - 2g(X+l) = 2g(n+1-l) never vanish for
// l <= n, so an eigenvector's last component cannot be zero; fixing
// v[n] = 1, rows n..1 determine the rest by backward recurrence and the
// leftover row-0 defect f(lambda) is the characteristic function.  Newton
// on f in 50-digit arithmetic brings the coefficients to the double
// rounding floor even where the exact low-order coefficients vanish
// (plain dense eigenvectors leave ~1e-16 junk there, which the residual
// check amplifies by ~1e8 near z = 0).
struct RefinedPair {
  double lambda = 0.0;
  std::vector<double> v;
  bool ok = false;
};

inline RefinedPair refine_block_eigenpair(const Eigen::MatrixXd& T,
                                          double lambda0, int max_iter = 60) {
  const int n = static_cast<int>(T.rows()) - 1;
  std::vector<Float50> d(n + 1), lower(n + 1), upper(n + 1);
  for (int r = 0; r <= n; ++r) {
    d[r] = T(r, r);
    if (r >= 1) lower[r] = T(r, r - 1);
    if (r < n) upper[r] = T(r, r + 1);
  }
  for (int r = 1; r <= n; ++r)
    if (lower[r] == 0) return {};  // not a QS block; caller falls back

  std::vector<Float50> v(n + 1), dv(n + 1);
  auto defect = [&](const Float50& lam, Float50& f, Float50& fp) {
    v[n] = 1;
    dv[n] = 0;
    for (int r = n; r >= 1; --r) {
      Float50 up = r < n ? upper[r] * v[r + 1] : Float50(0);
      Float50 dup = r < n ? upper[r] * dv[r + 1] : Float50(0);
      v[r - 1] = -((d[r] - lam) * v[r] + up) / lower[r];
      dv[r - 1] = -((d[r] - lam) * dv[r] - v[r] + dup) / lower[r];
    }
    f = (d[0] - lam) * v[0] + (n >= 1 ? upper[0] * v[1] : Float50(0));
    fp = (d[0] - lam) * dv[0] - v[0] +
         (n >= 1 ? upper[0] * dv[1] : Float50(0));
  };

  Float50 lam = lambda0, f, fp;
  defect(lam, f, fp);
  for (int it = 0; it < max_iter; ++it) {
    if (f == 0 || fp == 0) break;
    Float50 step = f / fp;
    lam -= step;
    defect(lam, f, fp);
    if (abs(step) < Float50(1e-45) * (std::max)(Float50(1), abs(lam))) break;
  }
  double scale = T.cwiseAbs().maxCoeff();
  RefinedPair out;
  out.lambda = lam.convert_to<double>();
  // reject if Newton wandered off to a different root
  if (std::abs(out.lambda - lambda0) > 1e-6 * std::max(1.0, scale))
    return {};
  out.v.resize(n + 1);
  for (int r = 0; r <= n; ++r) out.v[r] = v[r].convert_to<double>();
  out.ok = true;
  return out;
}

inline void normalize_poly(std::vector<double>& c) {
  double lead = c.back();
  if (std::abs(lead) > 1e-10) {
    for (double& x : c) x /= lead;
  } else {
    double nrm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(),
                                              0.0));
    if (nrm > 0) {
      for (double& x : c) x /= nrm;
      // fix overall sign by the first coefficient of largest magnitude
      auto it = std::max_element(c.begin(), c.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      });
      if (*it < 0)
        for (double& x : c) x = -x;
    }
  }
}

}  // namespace detail

// Repeated block eigenvalues (the matrix is defective there: a Jordan pair,
// not two eigenvectors) are split by O(sqrt(eps)) once the entries are
// rounded to doubles; anything inside this band is treated as one repeated
// value whose well-conditioned estimate is the cluster mean.
inline constexpr double block_defect_band = 1e-7;

// Blocks whose sub/super-diagonal products go negative (possible when a
// seed exponent is negative enough, i.e. deep in the non-normalizable
// sectors) can carry complex conjugate eigenvalue pairs; those have no real
// algebraic level and callers may want to skip them instead of failing.
inline bool block_levels_are_real(const Sector& s, const TopConfig& c, int n) {
  Eigen::MatrixXd T = block_matrix(s, c, n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    throw computational_error("block_levels_are_real: eigensolve failed");
  double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  for (int j = 0; j <= n; ++j)
    if (std::abs(es.eigenvalues()[j].imag()) > block_defect_band * scale)
      return false;
  return true;
}

// Solves the decoupled block at the QS point for (sector, n); returns the
// n+1 levels sorted by ascending energy E_i = -lambda_i.
inline std::vector<AlgebraicLevel> algebraic_levels(const Sector& s,
                                                    const TopConfig& c, int n,
                                                    TopKind kind = TopKind::trig) {
  if (!is_qs_config(s, n, c)) {
    throw precondition_error(
        "algebraic_levels: eta=" + std::to_string(c.eta) +
        " does not satisfy the sector " + to_string(s) +
        " quasi-solvability condition for n=" + std::to_string(n) +
        " (want eta=" + std::to_string(qs_eta(s, n, c)) + ")");
  }
  Eigen::MatrixXd T = block_matrix(s, c, n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    throw computational_error("algebraic_levels: block eigensolve failed");

  double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  std::vector<std::pair<double, int>> lams;  // (Re lambda, dense column)
  for (int j = 0; j <= n; ++j) {
    std::complex<double> lam = es.eigenvalues()[j];
    if (std::abs(lam.imag()) > block_defect_band * scale)
      throw computational_error(
          "algebraic_levels: complex block eigenvalue (imag " +
          std::to_string(lam.imag()) + ")");
    lams.emplace_back(lam.real(), j);
  }
  std::sort(lams.begin(), lams.end());

  std::vector<AlgebraicLevel> out;
  for (std::size_t j = 0; j < lams.size();) {
    std::size_t k = j + 1;
    while (k < lams.size() &&
           lams[k].first - lams[k - 1].first < block_defect_band * scale)
      ++k;
    // A repeated root stored in doubles splits (or rounds into a conjugate
    // pair) by O(sqrt(eps)), so Newton has nothing better to converge to;
    // the cluster mean is the trace restricted to the cluster and stays
    // well-conditioned, and the recurrence at the mean gives the vector.
    double lam0 = 0.0;
    for (std::size_t l = j; l < k; ++l) lam0 += lams[l].first;
    lam0 /= static_cast<double>(k - j);
    auto refined =
        detail::refine_block_eigenpair(T, lam0, k - j == 1 ? 60 : 0);
    for (std::size_t l = j; l < k; ++l) {
      AlgebraicLevel lv;
      lv.sector = s;
      lv.n = n;
      lv.kind = kind;
      if (refined.ok) {
        lv.energy = -refined.lambda;
        lv.poly_coeffs = refined.v;
      } else {
        lv.energy = -lams[l].first;
        lv.poly_coeffs.resize(n + 1);
        for (int r = 0; r <= n; ++r)
          lv.poly_coeffs[r] = es.eigenvectors()(r, lams[l].second).real();
      }
      detail::normalize_poly(lv.poly_coeffs);
      out.push_back(std::move(lv));
    }
    j = k;
  }
  std::sort(out.begin(), out.end(), [](const AlgebraicLevel& a,
                                       const AlgebraicLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.poly_coeffs < b.poly_coeffs;
  });
  // orthogonalize coefficient vectors inside degenerate clusters so the
  // output is well-defined there too
  for (std::size_t j = 1; j < out.size(); ++j) {
    if (std::abs(out[j].energy - out[j - 1].energy) < 1e-12) {
      auto& u = out[j - 1].poly_coeffs;
      auto& v = out[j].poly_coeffs;
      double uu = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
      double uv = std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
      if (uu > 0) {
        std::vector<double> w = v;
        for (std::size_t l = 0; l < w.size(); ++l) w[l] -= uv / uu * u[l];
        double ww = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
        // keep the original if the two vectors were actually parallel
        // (a repeated root with a one-dimensional eigenspace)
        if (ww > 1e-16 * uu) {
          v = std::move(w);
          detail::normalize_poly(v);
        }
      }
    }
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j].i = static_cast<int>(j);
  if (kind == TopKind::hyper)
    for (auto& lv : out) lv.energy = -lv.energy;
  return out;
}

// Anti-isospectral image: same polynomial, negated energy, hyperbolic kind.
inline AlgebraicLevel anti_isospectral_pair(const AlgebraicLevel& trig_level) {
  if (trig_level.kind != TopKind::trig)
    throw precondition_error("anti_isospectral_pair: level must be trig");
  AlgebraicLevel h = trig_level;
  h.kind = TopKind::hyper;
  h.energy = -trig_level.energy;
  return h;
}

}  // namespace qpend
