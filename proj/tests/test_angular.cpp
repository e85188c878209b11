#include <catch2/catch_amalgamated.hpp>

#include <qpend/qpend.hpp>

#include "oracles.hpp"

using namespace qpend;

namespace {
HalfInt HI(int v) { return HalfInt::from_int(v); }
}

TEST_CASE("3j anchor values") {
  CHECK(wigner3j_value({HI(0), HI(0), HI(0), HI(0), HI(0), HI(0)}) == 1.0);
  // m-sum rule violated
  CHECK(wigner3j_value({HI(1), HI(1), HI(2), HI(0), HI(0), HI(1)}) == 0.0);
  // triangle rule violated
  CHECK(wigner3j_value({HI(1), HI(1), HI(3), HI(0), HI(0), HI(0)}) == 0.0);
  CHECK(wigner3j_value({HI(1), HI(1), HI(2), HI(0), HI(0), HI(0)}) ==
        Catch::Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-15));
  // the exact view carries the value as q * sqrt(p): check the square
  SqrtRat v = wigner3j({HI(1), HI(1), HI(2), HI(0), HI(0), HI(0)});
  CHECK(static_cast<double>(v.squared()) == Catch::Approx(2.0 / 15.0).epsilon(1e-15));
  // half-integer column
  CHECK(wigner3j_value({half_int(1), half_int(1), HI(1), half_int(1),
                        half_int(-1), HI(0)}) ==
        Catch::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("3j rejects inconsistent half-integers") {
  CHECK_THROWS_AS(wigner3j({HI(1), HI(1), HI(2), half_int(1), half_int(-1),
                            HI(0)}),
                  domain_error);
}

TEST_CASE("3j matches an independent floating Racah sum for j <= 6") {
  double worst = 0.0;
  for (int tj1 = 0; tj1 <= 12; tj1 += 2)
    for (int tj2 = 0; tj2 <= 12; tj2 += 2)
      for (int tj3 = std::abs(tj1 - tj2); tj3 <= tj1 + tj2; tj3 += 2)
        for (int tm1 = -tj1; tm1 <= tj1; tm1 += 4)
          for (int tm2 = -tj2; tm2 <= tj2; tm2 += 4) {
            int tm3 = -tm1 - tm2;
            if (std::abs(tm3) > tj3) continue;
            double lib = wigner3j_value({half_int(tj1), half_int(tj2),
                                         half_int(tj3), half_int(tm1),
                                         half_int(tm2), half_int(tm3)});
            double ref = oracle::wigner3j(tj1, tj2, tj3, tm1, tm2, tm3);
            worst = std::max(worst, std::abs(lib - ref));
          }
  CHECK(worst < 1e-13);
}

TEST_CASE("3j orthogonality for j <= 10") {
  double worst = 0.0;
  for (int j1 = 0; j1 <= 10; ++j1)
    for (int j2 = 0; j2 <= 10; ++j2)
      for (int m1 = -j1; m1 <= j1; m1 += std::max(1, j1))
        for (int m2 = -j2; m2 <= j2; m2 += std::max(1, j2)) {
          double sum = 0.0;
          for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) {
            int m3 = -m1 - m2;
            if (std::abs(m3) > j3) continue;
            double v = wigner3j_value({HI(j1), HI(j2), HI(j3), HI(m1),
                                       HI(m2), HI(m3)});
            sum += (2.0 * j3 + 1.0) * v * v;
          }
          worst = std::max(worst, std::abs(sum - 1.0));
        }
  CHECK(worst < 1e-12);
}

TEST_CASE("3j column permutation symmetry") {
  auto val = [](int j1, int j2, int j3, int m1, int m2, int m3) {
    return wigner3j_value({HI(j1), HI(j2), HI(j3), HI(m1), HI(m2), HI(m3)});
  };
  int j1 = 3, j2 = 2, j3 = 4, m1 = 1, m2 = -2, m3 = 1;
  double base = val(j1, j2, j3, m1, m2, m3);
  CHECK(base != 0.0);
  // even permutation
  CHECK(val(j2, j3, j1, m2, m3, m1) == Catch::Approx(base).epsilon(1e-14));
  // odd permutation picks up (-1)^(j1+j2+j3)
  double sign = ((j1 + j2 + j3) % 2) ? -1.0 : 1.0;
  CHECK(val(j2, j1, j3, m2, m1, m3) ==
        Catch::Approx(sign * base).epsilon(1e-14));
}

TEST_CASE("cos element anchors") {
  BasisState b100{HI(1), HI(0), HI(0)}, b000{HI(0), HI(0), HI(0)};
  CHECK(cos_element(b100, b000) ==
        Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(cos_element(b000, b100) == cos_element(b100, b000));
  // Delta-J = 2 vanishes for a rank-1 tensor
  BasisState b211{HI(2), HI(1), HI(1)}, b411{HI(4), HI(1), HI(1)};
  CHECK(cos_element(b411, b211) == 0.0);
  // linear-rotor ladder
  for (int J = 0; J <= 5; ++J) {
    BasisState up{HI(J + 1), HI(0), HI(0)}, lo{HI(J), HI(0), HI(0)};
    CHECK(cos_element(up, lo) ==
          Catch::Approx((J + 1.0) / std::sqrt((2.0 * J + 1) * (2.0 * J + 3)))
              .epsilon(1e-14));
  }
  // different projections decouple
  BasisState b111{HI(1), HI(1), HI(1)}, b201{HI(2), HI(0), HI(1)};
  CHECK(cos_element(b201, b111) == 0.0);
}

TEST_CASE("cos^2 element anchors") {
  BasisState b000{HI(0), HI(0), HI(0)}, b200{HI(2), HI(0), HI(0)};
  CHECK(cos2_element(b000, b000) == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cos2_element(b200, b000) ==
        Catch::Approx(2.0 / (3.0 * std::sqrt(5.0))).epsilon(1e-14));
  // Delta-J = 1 vanishes when K or M is zero (rank-2 parity) ...
  for (int J = 1; J <= 4; ++J) {
    BasisState up0{HI(J + 1), HI(0), HI(J)}, lo0{HI(J), HI(0), HI(J)};
    CHECK(cos2_element(up0, lo0) == 0.0);
    BasisState upk{HI(J + 1), HI(1), HI(0)}, lok{HI(J), HI(1), HI(0)};
    CHECK(cos2_element(upk, lok) == 0.0);
  }
  // ... but not once K*M != 0
  BasisState b312{HI(3), HI(1), HI(2)}, b212{HI(2), HI(1), HI(2)};
  CHECK(cos2_element(b312, b212) ==
        Catch::Approx(oracle::pair_element(6, 4, 2, 4, 2)).epsilon(1e-13));
  CHECK(std::abs(cos2_element(b312, b212)) > 0.1);
  // Delta-J = 3 always vanishes
  BasisState b512{HI(5), HI(1), HI(2)};
  CHECK(cos2_element(b512, b212) == 0.0);
}

TEST_CASE("every element matches the quadrature oracle for J <= 6") {
  double worst = 0.0;
  for (int K = -3; K <= 3; ++K)
    for (int M = -3; M <= 3; ++M) {
      int jmin = std::max(std::abs(K), std::abs(M));
      for (int J = jmin; J <= 6; ++J)
        for (int Jp = J; Jp <= std::min(6, J + 2); ++Jp) {
          BasisState bra{HI(Jp), HI(K), HI(M)}, ket{HI(J), HI(K), HI(M)};
          double lc = cos_element(bra, ket);
          double l2 = cos2_element(bra, ket);
          double oc = oracle::pair_element(2 * Jp, 2 * J, 2 * K, 2 * M, 1);
          double o2 = oracle::pair_element(2 * Jp, 2 * J, 2 * K, 2 * M, 2);
          worst = std::max({worst, std::abs(lc - oc), std::abs(l2 - o2)});
        }
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("half-integer elements match the quadrature oracle") {
  double worst = 0.0;
  for (int tK : {-1, 1})
    for (int tM : {1, 3}) {
      int tjmin = std::max(std::abs(tK), std::abs(tM));
      for (int tJ = tjmin; tJ <= 11; tJ += 2)
        for (int tJp = tJ; tJp <= std::min(11, tJ + 4); tJp += 2) {
          BasisState bra{half_int(tJp), half_int(tK), half_int(tM)};
          BasisState ket{half_int(tJ), half_int(tK), half_int(tM)};
          worst = std::max(
              {worst,
               std::abs(cos_element(bra, ket) -
                        oracle::pair_element(tJp, tJ, tK, tM, 1)),
               std::abs(cos2_element(bra, ket) -
                        oracle::pair_element(tJp, tJ, tK, tM, 2))});
        }
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("field-free Hamiltonian is exactly the rigid-rotor diagonal") {
  TopConfig c;
  c.B = 1.5;
  c.rho = 0.25;  // exact in binary so the diagonal identity is bit-exact
  c.K = HI(2);
  c.M = HI(1);
  Eigen::MatrixXd H = build_trig_hamiltonian(c, HI(8));
  for (int r = 0; r < H.rows(); ++r) {
    double J = 2.0 + r;
    CHECK(H(r, r) == 1.5 * (J * (J + 1.0) - 1.0));
    for (int q = 0; q < H.cols(); ++q)
      if (q != r) CHECK(H(r, q) == 0.0);
  }
}
