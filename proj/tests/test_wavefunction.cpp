#include <catch2/catch_amalgamated.hpp>

#include <qpend/qpend.hpp>

#include <cmath>
#include <complex>
#include <functional>

#include "oracles.hpp"

using namespace qpend;
using Catch::Approx;
using C = std::complex<double>;

namespace {

TopConfig cfg(int twiceK, int twiceM, double zeta = 25.0, double B = 1.0,
              double rho = 0.0) {
  TopConfig c;
  c.B = B;
  c.rho = rho;
  c.zeta = zeta;
  c.K = HalfInt{twiceK};
  c.M = HalfInt{twiceM};
  return c;
}

AlgebraicLevel level(const Sector& s, const TopConfig& base, int n, int i,
                     TopKind kind = TopKind::trig) {
  auto ls = algebraic_levels(s, base.with_eta(qs_eta(s, n, base)), n, kind);
  return ls.at(i);
}

}  // namespace

TEST_CASE("seed wavefunction carries the exponential and half-angle powers") {
  // planar case with half-integer exponents
  auto planar = cfg(0, 1);
  auto seed = seed_wavefunction(Sector{3, +1}, planar);
  CHECK(seed.expo == 5.0);
  CHECK(seed.a.twice == 1);
  CHECK(seed.b.twice == -1);
  double th = 0.8;
  double ex = std::exp(5.0 * std::cos(th));
  CHECK(seed.gauged_value(th) ==
        Approx(ex * std::sin(0.5 * th)).epsilon(1e-14));
  CHECK(seed.value(th) ==
        Approx(ex * std::sqrt(std::sin(0.5 * th) / std::cos(0.5 * th)))
            .epsilon(1e-14));

  // integer case: family 1 keeps sin^{M-K}(theta/2) cos^{M+K}(theta/2)
  auto c12 = cfg(2, 4);
  auto s12 = seed_wavefunction(Sector{1, +1}, c12);
  CHECK(s12.a.twice == 2);
  CHECK(s12.b.twice == 6);
  double want = ex * std::sin(0.5 * th) * std::pow(std::cos(0.5 * th), 3);
  CHECK(s12.value(th) == Approx(want).epsilon(1e-14));

  // minus branch flips the sign of the exponential rate
  CHECK(seed_wavefunction(Sector{1, -1}, c12).expo == -5.0);
}

TEST_CASE("the n = 0 level is the seed itself") {
  auto c = cfg(2, 4);
  auto lv = level(Sector{1, +1}, c, 0, 0);
  auto psi = wavefunction(lv, c);
  auto seed = seed_wavefunction(Sector{1, +1}, c);
  REQUIRE(psi.poly.size() == 1);
  CHECK(psi.poly[0] == 1.0);
  for (double th : {0.3, 1.3, 2.7}) CHECK(psi.value(th) == seed.value(th));
}

TEST_CASE("analytic derivatives match finite differences") {
  auto c = cfg(2, 4);
  auto psi = wavefunction(level(Sector{1, +1}, c, 1, 0), c);
  std::function<double(double)> raw = [&](double x) { return psi.value(x); };
  std::function<double(double)> ggd = [&](double x) {
    return psi.gauged_value(x);
  };
  for (double th : {0.4, 0.9, 1.7, 2.6}) {
    auto got = psi.value_d012(th);
    auto fd = oracle::fd_d012(raw, th, 1e-5);
    CHECK(got[0] == fd[0]);
    for (int k = 1; k < 3; ++k)
      CHECK(std::abs(got[k] - fd[k]) / std::max(1.0, std::abs(fd[k])) < 1e-4);

    // gauged derivatives: gauged_value == exp(c*u) * h(theta, gauged)
    auto h = psi.h_d012(th, true);
    double u = std::cos(th), du = -std::sin(th), ddu = -std::cos(th);
    double e = std::exp(psi.expo * u);
    double g1 = e * (h[1] + psi.expo * du * h[0]);
    auto fdg = oracle::fd_d012(ggd, th, 1e-5);
    CHECK(std::abs(g1 - fdg[1]) / std::max(1.0, std::abs(fdg[1])) < 1e-4);
    double g2 = e * (h[2] + 2.0 * psi.expo * du * h[1] +
                     (psi.expo * ddu + psi.expo * psi.expo * du * du) * h[0]);
    CHECK(std::abs(g2 - fdg[2]) / std::max(1.0, std::abs(fdg[2])) < 1e-4);
  }
}

TEST_CASE("gauged and raw values differ by sqrt(sin theta / 2)") {
  auto c = cfg(2, 4);
  auto pt = wavefunction(level(Sector{1, +1}, c, 1, 1), c);
  for (double th : {0.3, 0.9, 2.2})
    CHECK(pt.gauged_value(th) / pt.value(th) ==
          Approx(std::sqrt(std::sin(th) / 2.0)).epsilon(1e-13));

  auto c11 = cfg(2, 2);
  auto ph = wavefunction(level(Sector{3, -1}, c11, 1, 0, TopKind::hyper), c11);
  for (double th : {0.4, 1.1, 2.5})
    CHECK(ph.gauged_value(th) / ph.value(th) ==
          Approx(std::sqrt(std::sinh(th) / 2.0)).epsilon(1e-13));
}

TEST_CASE("complex evaluation agrees with the real one on the real axis") {
  auto c = cfg(2, 4);
  auto pt = wavefunction(level(Sector{2, +1}, c, 1, 0), c);
  auto ph = wavefunction(anti_isospectral_pair(level(Sector{2, -1}, c, 1, 0)),
                         c);
  for (double th : {0.5, 1.4}) {
    CHECK(pt.value_complex(C(th, 0)).real() ==
          Approx(pt.value(th)).epsilon(1e-13));
    CHECK(std::abs(pt.value_complex(C(th, 0)).imag()) <
          1e-13 * std::abs(pt.value(th)));
    CHECK(ph.value_complex(C(th, 0)).real() ==
          Approx(ph.value(th)).epsilon(1e-13));
  }
}

TEST_CASE("rotating the angle onto the imaginary axis lands on the partner") {
  // psi_trig(i*theta) = i^a * psi_hyper(theta): same exponential rate and
  // polynomial, the half-angle sine picks up i per power.
  auto c = cfg(2, 4);
  for (auto [fam, phase] : {std::pair{1, C(0, 1)}, std::pair{2, C(0, -1)}}) {
    Sector s{fam, -1};
    auto lt = level(s, c, 1, 0);
    auto wt = wavefunction(lt, c);
    auto wh = wavefunction(anti_isospectral_pair(lt), c);
    for (double th : {0.7, 1.0}) {
      C num = wt.value_complex(C(0, 1) * C(th, 0));
      C den = wh.value_complex(C(th, 0));
      CHECK(std::abs(num / den - phase) < 1e-13);
      CHECK(std::abs(num) / std::abs(den) == Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("polynomial evaluation stays exact at a double root on the edge") {
  // (z-1)^2 evaluated just inside z = 1, where monomial Horner loses most
  // digits; the evaluator shifts to powers of (z-1) and returns exactly
  // e^2, -2e, 2.
  double e = 1e-9;
  auto r = qpend::detail::poly_d012({1.0, -2.0, 1.0}, 1.0 - e, -e);
  CHECK(r[0] == e * e);
  CHECK(r[1] == -2.0 * e);
  CHECK(r[2] == 2.0);
}

TEST_CASE("factored form stays finite where the raw exponential underflows") {
  auto c11 = cfg(2, 2);
  auto psi = wavefunction(level(Sector{3, -1}, c11, 0, 0, TopKind::hyper), c11);
  REQUIRE(psi.kind == TopKind::hyper);
  REQUIRE(psi.expo == -5.0);
  auto v = psi.value_d012(40.0);
  CHECK(v[0] == 0.0);  // e^{-5 cosh 40} underflows
  auto h = psi.h_d012(40.0, false);
  for (double x : h) CHECK(std::isfinite(x));
  CHECK(h[0] > 0.0);
}
