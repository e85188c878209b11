#pragma once

// The eight algebraic sectors of the quasi-solvable pendular top: fixed
// quantum momentum functions (simple poles at z = 0, 1 plus a constant),
// their residues, the quasi-solvability conditions eta(n), and the Riccati
// identity the momentum function must satisfy in the rational variable
// z = (cos(theta)+1)/2.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qpend/config.hpp"

namespace qpend {

struct Sector {
  int family = 1;  // 1..4
  int branch = +1; // +1 / -1, sign of sqrt(zeta)

  friend bool operator==(const Sector& a, const Sector& b) {
    return a.family == b.family && a.branch == b.branch;
  }
};

inline std::array<Sector, 8> all_sectors() {
  return {{{1, +1}, {2, +1}, {3, +1}, {4, +1},
           {1, -1}, {2, -1}, {3, -1}, {4, -1}}};
}

inline std::string to_string(const Sector& s) {
  return std::to_string(s.family) + (s.branch > 0 ? "+" : "-");
}

inline Sector parse_sector(const std::string& text) {
  if (text.size() == 2 && text[0] >= '1' && text[0] <= '4' &&
      (text[1] == '+' || text[1] == '-')) {
    return Sector{text[0] - '0', text[1] == '+' ? +1 : -1};
  }
  throw domain_error("bad sector '" + text + "' (expected e.g. 1+, 3-)");
}

// Exponents (a, b) of the seed function sin^a(theta/2) cos^b(theta/2).
inline std::pair<HalfInt, HalfInt> seed_exponents(const Sector& s, HalfInt K,
                                                  HalfInt M) {
  switch (s.family) {
    case 1: return {M - K, M + K};
    case 2: return {K - M, K + M};
    case 3: return {M - K, -M - K};
    case 4: return {K - M, -K - M};
  }
  throw domain_error("sector family out of range");
}

// X enters both the QS condition eta = branch*2*sqrt(B)(X+n+1)*sqrt(zeta)
// and the block diagonal.
inline HalfInt sector_X(const Sector& s, HalfInt K, HalfInt M) {
  switch (s.family) {
    case 1: return M;
    case 2: return K;
    case 3: return -K;
    case 4: return -M;
  }
  throw domain_error("sector family out of range");
}

inline double qs_eta(const Sector& s, int n, double B, double zeta, HalfInt K,
                     HalfInt M) {
  double X = sector_X(s, K, M).value();
  double v = s.branch * 2.0 * std::sqrt(B) * (X + n + 1.0) * std::sqrt(zeta);
  return v == 0.0 ? 0.0 : v;  // avoid the confusing "-0" in printed tables
}

inline double qs_eta(const Sector& s, int n, const TopConfig& c) {
  return qs_eta(s, n, c.B, c.zeta, c.K, c.M);
}

// Topological index kappa = eta / sqrt(B*zeta).
inline double kappa_of(const TopConfig& c) {
  return c.eta / std::sqrt(c.B * c.zeta);
}

// kappa at the QS point, exact in doubled-integer units:
// kappa = branch*(2X + 2n + 2), an integer for integer or half-integer X.
inline int qs_kappa_int(const Sector& s, int n, HalfInt K, HalfInt M) {
  return s.branch * (sector_X(s, K, M).twice + 2 * n + 2);
}

inline bool is_qs_config(const Sector& s, int n, const TopConfig& c) {
  double want = qs_eta(s, n, c);
  return std::abs(c.eta - want) <= 1e-12 * std::max(1.0, std::abs(want));
}

// Pole coefficients of the momentum function: p(z) = sqrt(B) * (a/(2(z-1))
// + b/(2z)) + branch*2*sqrt(zeta).  They are the seed exponents shifted by
// one.
inline std::pair<HalfInt, HalfInt> qmf_pole_coeffs(const Sector& s, HalfInt K,
                                                   HalfInt M) {
  auto [a, b] = seed_exponents(s, K, M);
  return {a + 1, b + 1};
}

template <typename Z>
inline Z qmf_eval_t(const Sector& s, const TopConfig& c, Z z) {
  auto [a, b] = qmf_pole_coeffs(s, c.K, c.M);
  if (z == Z(0) || z == Z(1))
    throw domain_error("qmf_eval: z at a pole (z = 0 or 1)");
  double sb = std::sqrt(c.B);
  return Z(sb) * (Z(a.value()) / (Z(2) * (z - Z(1))) +
                  Z(b.value()) / (Z(2) * z)) +
         Z(s.branch * 2.0 * std::sqrt(c.zeta));
}

inline std::complex<double> qmf_eval(const Sector& s, const TopConfig& c,
                                     std::complex<double> z) {
  return qmf_eval_t(s, c, z);
}

// Residues at the fixed poles, and at infinity of the large-z expansion.
inline double qmf_residue_zero(const Sector& s, const TopConfig& c) {
  auto [a, b] = qmf_pole_coeffs(s, c.K, c.M);
  (void)a;
  return std::sqrt(c.B) * b.value() / 2.0;
}

inline double qmf_residue_one(const Sector& s, const TopConfig& c) {
  auto [a, b] = qmf_pole_coeffs(s, c.K, c.M);
  (void)b;
  return std::sqrt(c.B) * a.value() / 2.0;
}

inline double qmf_residue_infinity(const Sector& s, const TopConfig& c) {
  return -s.branch * c.eta / (2.0 * std::sqrt(c.zeta));
}

// Moving-pole count from the residue sum:
//   -Res(inf) - Res(0) - Res(1) = sqrt(B) * n  at the QS point for n.
inline double quantization_sum(const Sector& s, const TopConfig& c) {
  return -qmf_residue_infinity(s, c) - qmf_residue_zero(s, c) -
         qmf_residue_one(s, c);
}

// The 1D gauged potential written in z; theta'(z)^2 = 1/(z - z^2).
template <typename Z>
inline Z rational_potential_t(const TopConfig& c, Z z) {
  double K = c.K.value(), M = c.M.value();
  Z u = Z(2) * z - Z(1);  // cos(theta)
  Z cent = (Z(M * M + K * K - 1.0) - Z(2.0 * M * K) * u) /
           (Z(4) * z * (Z(1) - z));
  return -Z(c.eta) * u - Z(c.zeta) * u * u +
         Z(c.B) * (cent - Z(c.rho * K * K));
}

inline std::complex<double> rational_potential(const TopConfig& c,
                                               std::complex<double> z) {
  return rational_potential_t(c, z);
}

// Left side of the Riccati equation p^2 + sqrt(B) p' + (E - V(z))/(z - z^2)
// at one sample; exactly zero when (sector, config, E) solve the quantum
// Hamilton-Jacobi equation.
inline std::complex<double> riccati_lhs(const Sector& s, const TopConfig& c,
                                        double E, std::complex<double> z) {
  using C = std::complex<double>;
  auto [a, b] = qmf_pole_coeffs(s, c.K, c.M);
  double sb = std::sqrt(c.B);
  C p = qmf_eval(s, c, z);
  C dp = C(sb) * (-C(a.value()) / (C(2) * (z - C(1)) * (z - C(1))) -
                  C(b.value()) / (C(2) * z * z));
  C tp2 = C(1) / (z - z * z);  // theta'(z)^2
  return p * p + C(sb) * dp + tp2 * (C(E) - rational_potential(c, z));
}

struct RiccatiSample {
  std::complex<double> z;
  double residual = 0.0;
  bool skipped = false;  // too close to a pole
};

// Max scaled residual over the samples; samples within `pole_margin` of
// z = 0 or 1 are skipped (reported, not fatal).
inline double riccati_residual(const Sector& s, const TopConfig& c, double E,
                               const std::vector<std::complex<double>>& zs,
                               std::vector<RiccatiSample>* detail = nullptr,
                               double pole_margin = 1e-6) {
  using C = std::complex<double>;
  double worst = 0.0;
  for (const C& z : zs) {
    RiccatiSample rec;
    rec.z = z;
    if (std::abs(z) < pole_margin || std::abs(z - C(1)) < pole_margin) {
      rec.skipped = true;
      if (detail) detail->push_back(rec);
      continue;
    }
    C p = qmf_eval(s, c, z);
    C tp2 = C(1) / (z - z * z);
    C lhs = riccati_lhs(s, c, E, z);
    // scale by the largest contributing term so the check is relative
    double scale = std::max({1.0, std::norm(p), std::abs(tp2) *
                             (std::abs(E) + std::abs(rational_potential(c, z)))});
    rec.residual = std::abs(lhs) / scale;
    worst = std::max(worst, rec.residual);
    if (detail) detail->push_back(rec);
  }
  return worst;
}

}  // namespace qpend
