#include <catch2/catch_amalgamated.hpp>

#include <qpend/qpend.hpp>

#include <cmath>
#include <complex>

#include "grids.hpp"
#include "oracles.hpp"

using namespace qpend;
using Catch::Approx;

namespace {

TopConfig cfg(int K, int M, double zeta = 25.0, double B = 1.0,
              double rho = 0.0) {
  TopConfig c;
  c.B = B;
  c.rho = rho;
  c.zeta = zeta;
  c.K = HalfInt::from_int(K);
  c.M = HalfInt::from_int(M);
  return c;
}

std::vector<std::complex<double>> complex_samples(std::size_t count) {
  std::vector<std::complex<double>> zs;
  const double ims[4] = {-0.35, -0.12, 0.15, 0.4};
  for (std::size_t k = 0; k < count; ++k) {
    double re = 0.08 + 0.84 * static_cast<double>(k % 8) / 7.0;
    zs.emplace_back(re, ims[(k / 8) % 4]);
  }
  return zs;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("sector bookkeeping") {
  auto sectors = all_sectors();
  REQUIRE(sectors.size() == 8);
  for (std::size_t i = 0; i < sectors.size(); ++i)
    for (std::size_t j = i + 1; j < sectors.size(); ++j)
      CHECK(!(sectors[i] == sectors[j]));
  for (const Sector& s : sectors) {
    Sector back = parse_sector(to_string(s));
    CHECK(back == s);
  }
  CHECK_THROWS_AS(parse_sector("5+"), domain_error);
  CHECK_THROWS_AS(parse_sector("1"), domain_error);
  CHECK_THROWS_AS(parse_sector("2*"), domain_error);
}

TEST_CASE("seed exponents and X across the four families") {
  HalfInt K = HalfInt::from_int(1), M = HalfInt::from_int(2);
  // (a, b) of sin^a(theta/2) cos^b(theta/2)
  auto e1 = seed_exponents(Sector{1, +1}, K, M);
  CHECK(e1.first.twice == 2);
  CHECK(e1.second.twice == 6);
  auto e2 = seed_exponents(Sector{2, +1}, K, M);
  CHECK(e2.first.twice == -2);
  CHECK(e2.second.twice == 6);
  auto e3 = seed_exponents(Sector{3, -1}, K, M);
  CHECK(e3.first.twice == 2);
  CHECK(e3.second.twice == -6);
  auto e4 = seed_exponents(Sector{4, -1}, K, M);
  CHECK(e4.first.twice == -2);
  CHECK(e4.second.twice == -6);
  // branch does not alter the exponents
  CHECK(seed_exponents(Sector{1, -1}, K, M) == e1);

  CHECK(sector_X(Sector{1, +1}, K, M).twice == 4);
  CHECK(sector_X(Sector{2, +1}, K, M).twice == 2);
  CHECK(sector_X(Sector{3, +1}, K, M).twice == -2);
  CHECK(sector_X(Sector{4, +1}, K, M).twice == -4);
}

TEST_CASE("quasi-solvable field strengths") {
  TopConfig c = cfg(1, 2);
  CHECK(qs_eta(Sector{1, +1}, 0, c) == 30.0);
  CHECK(qs_eta(Sector{1, +1}, 1, c) == 40.0);
  CHECK(qs_eta(Sector{3, +1}, 0, c) == 0.0);
  CHECK(!std::signbit(qs_eta(Sector{3, +1}, 0, c)));
  CHECK(qs_eta(Sector{3, +1}, 1, c) == 10.0);
  CHECK(qs_eta(Sector{1, -1}, 0, c) == -30.0);

  CHECK(qs_kappa_int(Sector{1, +1}, 0, c.K, c.M) == 6);
  CHECK(qs_kappa_int(Sector{1, +1}, 1, c.K, c.M) == 8);
  CHECK(qs_kappa_int(Sector{3, +1}, 0, c.K, c.M) == 0);
  CHECK(qs_kappa_int(Sector{2, -1}, 0, c.K, c.M) == -4);

  for (const auto& d : grids::full_grid()) {
    TopConfig cc = d.config();
    for (const Sector& s : all_sectors())
      for (int n = 0; n <= 3; ++n) {
        double want =
            oracle::qs_eta(s.family, s.branch, n, d.B, d.zeta, d.K, d.M);
        double got = qs_eta(s, n, cc);
        CHECK(rel(got, want) < 1e-14);
        // eta/sqrt(B zeta) is an exact even/odd integer per sector
        double kap = got / std::sqrt(d.B * d.zeta);
        int ki = qs_kappa_int(s, n, cc.K, cc.M);
        CHECK(std::abs(kap - ki) < 1e-12 * std::max(1.0, std::abs(kap)));
      }
  }
}

TEST_CASE("quasi-solvability detection") {
  TopConfig c = cfg(1, 2);
  CHECK(is_qs_config(Sector{1, +1}, 0, c.with_eta(30.0)));
  CHECK(!is_qs_config(Sector{1, +1}, 0, c.with_eta(30.1)));
  CHECK(!is_qs_config(Sector{1, +1}, 0, c.with_eta(-30.0)));
  CHECK(is_qs_config(Sector{1, +1}, 0, c.with_eta(30.0 * (1.0 + 1e-14))));
  CHECK(kappa_of(c.with_eta(30.0)) == Approx(6.0));
}

TEST_CASE("momentum function evaluation, poles, residues") {
  TopConfig c = cfg(1, 2).with_eta(30.0);
  Sector s{1, +1};

  auto pc = qmf_pole_coeffs(s, c.K, c.M);
  CHECK(pc.first.twice == 4);   // seed a + 1
  CHECK(pc.second.twice == 8);  // seed b + 1

  CHECK(qmf_eval(s, c, {0.5, 0.0}).real() == 12.0);
  CHECK(qmf_eval(s, c, {0.5, 0.0}).imag() == 0.0);
  CHECK_THROWS_AS(qmf_eval(s, c, {0.0, 0.0}), domain_error);
  CHECK_THROWS_AS(qmf_eval(s, c, {1.0, 0.0}), domain_error);

  std::complex<double> z{0.3, 0.2};
  std::complex<double> manual =
      std::sqrt(c.B) * (2.0 / (2.0 * (z - 1.0)) + 4.0 / (2.0 * z)) +
      2.0 * std::sqrt(c.zeta);
  CHECK(std::abs(qmf_eval(s, c, z) - manual) < 1e-15 * std::abs(manual));

  CHECK(qmf_residue_zero(s, c) == 2.0);
  CHECK(qmf_residue_one(s, c) == 1.0);
  CHECK(qmf_residue_infinity(s, c) == -3.0);
  CHECK(quantization_sum(s, c) == 0.0);
}

TEST_CASE("residue sum counts the moving poles") {
  for (const auto& d : grids::full_grid()) {
    TopConfig base = d.config();
    for (const Sector& s : all_sectors())
      for (int n = 0; n <= 3; ++n) {
        TopConfig c = base.with_eta(qs_eta(s, n, base));
        double got = quantization_sum(s, c);
        CHECK(std::abs(got - std::sqrt(d.B) * n) < 1e-12);
      }
  }
}

TEST_CASE("riccati identity holds exactly at the seed level") {
  TopConfig c = cfg(1, 2).with_eta(30.0);
  Sector s{1, +1};
  auto zs = complex_samples(32);

  CHECK(riccati_residual(s, c, -29.0, zs) < 1e-9);
  // breaking either the field strength or the energy is loudly visible
  CHECK(riccati_residual(s, c.with_eta(31.0), -29.0, zs) > 1e-3);
  CHECK(riccati_residual(s, c, -28.0, zs) > 1e-3);

  // samples that sit on a pole are skipped, not fatal
  std::vector<std::complex<double>> near_pole = {{1e-9, 0.0}, {1.0 + 1e-9, 0.0},
                                                 {0.5, 0.0}};
  std::vector<RiccatiSample> detail;
  double r = riccati_residual(s, c, -29.0, near_pole, &detail);
  REQUIRE(detail.size() == 3);
  CHECK(detail[0].skipped);
  CHECK(detail[1].skipped);
  CHECK(!detail[2].skipped);
  CHECK(r < 1e-9);
}

TEST_CASE("riccati identity across all sectors at their seed points") {
  auto zs = complex_samples(32);
  for (const auto& d : grids::random_draws(40, 20240801u)) {
    TopConfig base = d.config();
    for (const Sector& s : all_sectors()) {
      TopConfig c = base.with_eta(qs_eta(s, 0, base));
      std::complex<double> E = oracle::closed_energy(
          s.family, s.branch, 0, 0, d.B, d.rho, d.zeta, d.K, d.M);
      REQUIRE(E.imag() == 0.0);
      CHECK(riccati_residual(s, c, E.real(), zs) < 1e-9);
    }
  }
}

TEST_CASE("block matrix anchors") {
  {
    TopConfig c = cfg(1, 2).with_eta(40.0);
    Eigen::MatrixXd T = block_matrix(Sector{1, +1}, c, 1);
    REQUIRE(T.rows() == 2);
    CHECK(T(0, 0) == 19.0);
    CHECK(T(0, 1) == 4.0);
    CHECK(T(1, 0) == 20.0);
    CHECK(T(1, 1) == 33.0);
  }
  {
    // negative seed exponent sum flips the super-diagonal sign
    TopConfig c = cfg(1, 1).with_eta(10.0);
    Eigen::MatrixXd T = block_matrix(Sector{3, +1}, c, 1);
    CHECK(T(0, 0) == 5.0);
    CHECK(T(0, 1) == -1.0);
    CHECK(T(1, 0) == 20.0);
    CHECK(T(1, 1) == 25.0);
  }
  CHECK_THROWS_AS(block_matrix(Sector{1, +1}, cfg(1, 2), -1), domain_error);
}

TEST_CASE("decoupling element vanishes exactly at the QS point") {
  TopConfig c = cfg(1, 2);
  CHECK(decoupling_element(Sector{1, +1}, c.with_eta(40.0), 1) == 0.0);
  CHECK(decoupling_element(Sector{1, +1}, c.with_eta(41.0), 1) == 2.0);

  for (const auto& d : grids::random_draws(20, 918273u)) {
    TopConfig base = d.config();
    for (const Sector& s : all_sectors())
      for (int n = 0; n <= 3; ++n) {
        double eta = qs_eta(s, n, base);
        CHECK(std::abs(decoupling_element(s, base.with_eta(eta), n)) <= 1e-12);
        double delta = 0.5 + 0.1 * n;
        CHECK(std::abs(decoupling_element(s, base.with_eta(eta + delta), n)) >
              1e-12);
        // it is the same number that sits below the block in the next row
        Eigen::MatrixXd big = block_matrix(s, base.with_eta(eta), n + 1);
        CHECK(big(n + 1, n) ==
              Approx(decoupling_element(s, base.with_eta(eta), n))
                  .margin(1e-12));
      }
  }
}

TEST_CASE("algebraic levels at the anchor point") {
  TopConfig c = cfg(1, 2);
  Sector s{1, +1};

  auto lv0 = algebraic_levels(s, c.with_eta(30.0), 0);
  REQUIRE(lv0.size() == 1);
  CHECK(lv0[0].energy == Approx(-29.0).epsilon(1e-13));
  CHECK(lv0[0].i == 0);
  CHECK(lv0[0].kind == TopKind::trig);
  REQUIRE(lv0[0].poly_coeffs.size() == 1);
  CHECK(lv0[0].poly_coeffs[0] == 1.0);

  auto lv1 = algebraic_levels(s, c.with_eta(40.0), 1);
  REQUIRE(lv1.size() == 2);
  double root = std::sqrt(129.0);
  CHECK(lv1[0].energy == Approx(-26.0 - root).epsilon(1e-13));
  CHECK(lv1[1].energy == Approx(-26.0 + root).epsilon(1e-13));
  CHECK(lv1[0].i == 0);
  CHECK(lv1[1].i == 1);
  for (int i = 0; i <= 1; ++i) {
    REQUIRE(lv1[i].poly_coeffs.size() == 2);
    CHECK(lv1[i].poly_coeffs[1] == 1.0);  // monic in z
    std::complex<double> c0 =
        oracle::closed_poly_c0(1, +1, i, c.B, c.zeta, 1, 2);
    REQUIRE(c0.imag() == 0.0);
    CHECK(lv1[i].poly_coeffs[0] ==
          Approx((c0.real() - 1.0) / 2.0).epsilon(1e-12));
  }
  CHECK(lv1[0].poly_coeffs[0] == Approx(0.21789083458002736).epsilon(1e-12));
  CHECK(lv1[1].poly_coeffs[0] == Approx(-0.9178908345800274).epsilon(1e-12));
}

TEST_CASE("algebraic levels refuse a non-QS field strength") {
  TopConfig c = cfg(1, 2).with_eta(31.0);
  CHECK_THROWS_MATCHES(
      algebraic_levels(Sector{1, +1}, c, 0), precondition_error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("quasi-solvability") &&
          Catch::Matchers::ContainsSubstring("want eta=30")));
}

TEST_CASE("complex block pairs are reported, not silently dropped") {
  TopConfig c = cfg(3, 2);
  Sector s{4, +1};
  TopConfig cq = c.with_eta(qs_eta(s, 3, c));
  CHECK(!block_levels_are_real(s, cq, 3));
  CHECK_THROWS_MATCHES(
      algebraic_levels(s, cq, 3), computational_error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("complex block eigenvalue")));
  // the anchor blocks really are real
  CHECK(block_levels_are_real(Sector{1, +1}, cfg(1, 2).with_eta(40.0), 1));
}

TEST_CASE("block energies equal the closed forms for n = 0 and 1") {
  for (const auto& d : grids::full_grid()) {
    TopConfig base = d.config();
    for (const Sector& s : all_sectors())
      for (int n = 0; n <= 1; ++n) {
        TopConfig c = base.with_eta(qs_eta(s, n, base));
        bool want_real = true;
        std::vector<double> want;
        for (int i = 0; i <= n; ++i) {
          std::complex<double> E = oracle::closed_energy(
              s.family, s.branch, n, i, d.B, d.rho, d.zeta, d.K, d.M);
          if (std::abs(E.imag()) > 1e-9 * std::max(1.0, std::abs(E)))
            want_real = false;
          want.push_back(E.real());
        }
        if (!want_real) {
          CHECK(!block_levels_are_real(s, c, n));
          CHECK_THROWS_AS(algebraic_levels(s, c, n), computational_error);
          continue;
        }
        auto got = algebraic_levels(s, c, n);
        REQUIRE(got.size() == want.size());
        for (int i = 0; i <= n; ++i)
          CHECK(rel(got[i].energy, want[i]) < 1e-10);
      }
  }
}

TEST_CASE("degree-one polynomial equals its closed-form root") {
  for (const auto& d : grids::random_draws(60, 5550123u)) {
    TopConfig base = d.config();
    for (const Sector& s : all_sectors()) {
      TopConfig c = base.with_eta(qs_eta(s, 1, base));
      if (!block_levels_are_real(s, c, 1)) continue;
      auto lv = algebraic_levels(s, c, 1);
      for (int i = 0; i <= 1; ++i) {
        std::complex<double> c0 = oracle::closed_poly_c0(
            s.family, s.branch, i, d.B, d.zeta, d.K, d.M);
        CHECK(lv[i].poly_coeffs[1] == 1.0);
        CHECK(std::abs(lv[i].poly_coeffs[0] - (c0.real() - 1.0) / 2.0) <
              1e-9 * std::max(1.0, std::abs(c0)));
      }
    }
  }
}

TEST_CASE("half-integer projections work the same way") {
  TopConfig c;
  c.zeta = 25.0;
  c.K = HalfInt::from_int(0);
  c.M = HalfInt{1};  // M = 1/2
  Sector s{1, +1};
  CHECK(qs_eta(s, 0, c) == 15.0);
  CHECK(qs_kappa_int(s, 0, c.K, c.M) == 3);
  auto lv = algebraic_levels(s, c.with_eta(15.0), 0);
  REQUIRE(lv.size() == 1);
  CHECK(lv[0].energy == Approx(-24.25).epsilon(1e-13));

  for (const Sector& sec : all_sectors())
    for (int n = 0; n <= 1; ++n) {
      TopConfig cq = c.with_eta(qs_eta(sec, n, c));
      auto got = algebraic_levels(sec, cq, n);
      for (int i = 0; i <= n; ++i) {
        std::complex<double> E = oracle::closed_energy(
            sec.family, sec.branch, n, i, cq.B, cq.rho, cq.zeta, 0.0, 0.5);
        REQUIRE(std::abs(E.imag()) < 1e-12);
        CHECK(rel(got[i].energy, E.real()) < 1e-10);
      }
    }
}

TEST_CASE("anti-isospectral image of an algebraic level") {
  TopConfig c = cfg(1, 2).with_eta(30.0);
  auto lv = algebraic_levels(Sector{1, +1}, c, 0);
  AlgebraicLevel h = anti_isospectral_pair(lv[0]);
  CHECK(h.kind == TopKind::hyper);
  CHECK(h.energy == -lv[0].energy);
  CHECK(h.poly_coeffs == lv[0].poly_coeffs);
  CHECK_THROWS_AS(anti_isospectral_pair(h), precondition_error);

  // requesting hyperbolic levels directly negates every energy
  auto lt = algebraic_levels(Sector{1, +1}, cfg(1, 2).with_eta(40.0), 1);
  auto lh = algebraic_levels(Sector{1, +1}, cfg(1, 2).with_eta(40.0), 1,
                             TopKind::hyper);
  REQUIRE(lh.size() == lt.size());
  for (std::size_t i = 0; i < lt.size(); ++i) {
    CHECK(lh[i].energy == -lt[i].energy);
    CHECK(lh[i].kind == TopKind::hyper);
    CHECK(lh[i].poly_coeffs == lt[i].poly_coeffs);
  }
}
