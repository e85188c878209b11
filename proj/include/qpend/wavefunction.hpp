#pragma once

// Closed-form wavefunctions: exponential-times-power seed multiplied by the
// block-eigenvector polynomial in z.  Evaluators provide exact first and
// second derivatives, and a factored form psi = e^{c*u} * h(theta) whose
// h-part stays bounded, so hyperbolic residuals can be formed without
// overflowing e^{c*cosh(theta)}.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qpend/blocks.hpp"

namespace qpend {

namespace detail {

// value, first and second derivative of P at z.  zm1 = z - 1 computed by
// the caller without cancellation; when z is nearer to 1 the coefficients
// are Taylor-shifted to powers of (z-1) first, since eigenvector
// polynomials can have roots exactly at z = 1 (e.g. (z-1)^n) and monomial
// Horner would cancel away most digits there.
inline std::array<double, 3> poly_d012(const std::vector<double>& cin,
                                       double z, double zm1) {
  std::vector<double> c(cin);
  double x = z;
  if (std::abs(zm1) < std::abs(z)) {
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
      for (std::size_t r = c.size() - 1; r > k; --r) c[r - 1] += c[r];
    x = zm1;
  }
  double p = 0, dp = 0, ddp = 0;
  for (int l = static_cast<int>(c.size()) - 1; l >= 0; --l) {
    ddp = ddp * x + 2.0 * dp;
    dp = dp * x + p;
    p = p * x + c[l];
  }
  return {p, dp, ddp};
}

// f = base^alpha with (base, base', base'') given; special-cases alpha 0, 1
// so planar integer exponents stay finite where the base crosses zero.
inline std::array<double, 3> power_d012(double alpha, double s, double ds,
                                        double dds) {
  if (alpha == 0.0) return {1.0, 0.0, 0.0};
  if (alpha == 1.0) return {s, ds, dds};
  double f = std::pow(s, alpha);
  double f1 = alpha * std::pow(s, alpha - 1.0);
  double f2 = alpha * (alpha - 1.0) * std::pow(s, alpha - 2.0);
  return {f, f1 * ds, f2 * ds * ds + f1 * dds};
}

inline std::array<double, 3> product_d012(const std::array<double, 3>& f,
                                          const std::array<double, 3>& g) {
  return {f[0] * g[0], f[1] * g[0] + f[0] * g[1],
          f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2]};
}

}  // namespace detail

struct ClosedFormPsi {
  TopKind kind = TopKind::trig;
  double expo = 0.0;  // c in e^{c*u}, u = cos(theta) or cosh(theta)
  HalfInt a{0}, b{0}; // exponents of sin^a(theta/2) cos^b(theta/2) (or sinh/cosh)
  std::vector<double> poly{1.0};

  // h = s^(a+e) t^(b+e) P(z) with e = 1/2 for the sqrt(sin)-gauged form
  std::array<double, 3> h_d012(double theta, bool gauged) const {
    const bool hyp = kind == TopKind::hyper;
    const double e = gauged ? 0.5 : 0.0;
    double s, ds, dds, t, dt, ddt, z, dz, ddz;
    if (hyp) {
      s = std::sinh(0.5 * theta); ds = 0.5 * std::cosh(0.5 * theta);
      dds = 0.25 * s;
      t = std::cosh(0.5 * theta); dt = 0.5 * std::sinh(0.5 * theta);
      ddt = 0.25 * t;
      z = 0.5 * (std::cosh(theta) + 1.0); dz = 0.5 * std::sinh(theta);
      ddz = 0.5 * std::cosh(theta);
    } else {
      s = std::sin(0.5 * theta); ds = 0.5 * std::cos(0.5 * theta);
      dds = -0.25 * s;
      t = std::cos(0.5 * theta); dt = -0.5 * std::sin(0.5 * theta);
      ddt = -0.25 * t;
      z = 0.5 * (std::cos(theta) + 1.0); dz = -0.5 * std::sin(theta);
      ddz = -0.5 * std::cos(theta);
    }
    auto fs = detail::power_d012(a.value() + e, s, ds, dds);
    auto ft = detail::power_d012(b.value() + e, t, dt, ddt);
    // z - 1 = -sin^2(theta/2) (trig) or sinh^2(theta/2) (hyper), exact
    auto pp = detail::poly_d012(poly, z, hyp ? s * s : -s * s);
    std::array<double, 3> fp = {pp[0], pp[1] * dz,
                                pp[2] * dz * dz + pp[1] * ddz};
    return detail::product_d012(detail::product_d012(fs, ft), fp);
  }

  double u_of(double theta) const {
    return kind == TopKind::hyper ? std::cosh(theta) : std::cos(theta);
  }

  // psi, psi', psi''; overflows to +-inf for large hyperbolic arguments
  // or negative exponents at the endpoints (reported, never thrown).
  std::array<double, 3> value_d012(double theta) const {
    const bool hyp = kind == TopKind::hyper;
    double u = u_of(theta);
    double du = hyp ? std::sinh(theta) : -std::sin(theta);
    double ddu = hyp ? std::cosh(theta) : -std::cos(theta);
    double ex = std::exp(expo * u);
    std::array<double, 3> fe = {ex, expo * du * ex,
                                (expo * ddu + expo * expo * du * du) * ex};
    return detail::product_d012(fe, h_d012(theta, false));
  }

  double value(double theta) const { return value_d012(theta)[0]; }

  // gauged value (sqrt(sin theta) absorbed, constant factor dropped);
  // single-valued up to periodicity for the planar half-integer case
  double gauged_value(double theta) const {
    return std::exp(expo * u_of(theta)) * h_d012(theta, true)[0];
  }

  std::complex<double> value_complex(std::complex<double> theta) const {
    using C = std::complex<double>;
    const bool hyp = kind == TopKind::hyper;
    C s = hyp ? std::sinh(0.5 * theta) : std::sin(0.5 * theta);
    C t = hyp ? std::cosh(0.5 * theta) : std::cos(0.5 * theta);
    C u = hyp ? std::cosh(theta) : std::cos(theta);
    C z = 0.5 * (u + 1.0);
    C p(0.0, 0.0);
    for (int l = static_cast<int>(poly.size()) - 1; l >= 0; --l)
      p = p * z + C(poly[l]);
    return std::exp(C(expo) * u) * std::pow(s, C(a.value())) *
           std::pow(t, C(b.value())) * p;
  }
};

inline ClosedFormPsi seed_wavefunction(const Sector& s, const TopConfig& c,
                                       TopKind kind = TopKind::trig) {
  ClosedFormPsi psi;
  psi.kind = kind;
  psi.expo = s.branch * std::sqrt(c.zeta / c.B);
  auto [a, b] = seed_exponents(s, c.K, c.M);
  psi.a = a;
  psi.b = b;
  psi.poly = {1.0};
  return psi;
}

inline ClosedFormPsi wavefunction(const AlgebraicLevel& level,
                                  const TopConfig& c) {
  ClosedFormPsi psi = seed_wavefunction(level.sector, c, level.kind);
  psi.poly = level.poly_coeffs;
  return psi;
}

}  // namespace qpend
