#pragma once

// Wigner 3-j symbols in exact big-integer arithmetic, and the symmetric-top
// matrix elements of cos(theta) and cos^2(theta) built from them.  The 3-j
// value is kept as (rational)*sqrt(rational) until the very end, so the
// orthogonality sums and high-J elements carry no cancellation error.

#include <cstdlib>

#include "qpend/exact.hpp"
#include "qpend/halfint.hpp"

namespace qpend {

struct ThreeJArgs {
  HalfInt j1, j2, j3;
  HalfInt m1, m2, m3;
};

struct BasisState {
  HalfInt J, K, M;
};

// Racah sum with exact factorials.  Returns q*sqrt(p); .value() for double.
inline SqrtRat wigner3j(const ThreeJArgs& a) {
  const HalfInt j1 = a.j1, j2 = a.j2, j3 = a.j3;
  const HalfInt m1 = a.m1, m2 = a.m2, m3 = a.m3;

  for (auto [j, m] : {std::pair{j1, m1}, {j2, m2}, {j3, m3}}) {
    if (j.twice < 0) throw domain_error("wigner3j: negative j");
    if ((j + m).twice % 2 != 0)
      throw domain_error("wigner3j: j+m is not an integer");
  }
  // selection rules -> zero, not an error
  if ((m1 + m2 + m3).twice != 0) return SqrtRat::zero();
  if (abs(m1) > j1 || abs(m2) > j2 || abs(m3) > j3) return SqrtRat::zero();
  if ((j1 + j2 + j3).twice % 2 != 0) return SqrtRat::zero();
  if (j3 < abs(j1 - j2) || j1 + j2 < j3) return SqrtRat::zero();

  const int t1 = (j1 + j2 - j3).as_int();
  const int t2 = (j1 - j2 + j3).as_int();
  const int t3 = ((-j1) + j2 + j3).as_int();
  const int jm1 = (j1 - m1).as_int(), jp1 = (j1 + m1).as_int();
  const int jm2 = (j2 - m2).as_int(), jp2 = (j2 + m2).as_int();
  const int jm3 = (j3 - m3).as_int(), jp3 = (j3 + m3).as_int();
  const int jtot = (j1 + j2 + j3).as_int();

  BigRat delta = BigRat(factorial(t1) * factorial(t2) * factorial(t3),
                        factorial(jtot + 1));
  BigRat norm = delta * BigRat(factorial(jm1) * factorial(jp1) *
                               factorial(jm2) * factorial(jp2) *
                               factorial(jm3) * factorial(jp3));

  const int k_lo = std::max({0, (j2 - j3 - m1).as_int(),
                             (j1 - j3 + m2).as_int()});
  const int k_hi = std::min({t1, jm1, jp2});
  BigRat sum(0);
  for (int k = k_lo; k <= k_hi; ++k) {
    BigInt den = factorial(k) * factorial(t1 - k) * factorial(jm1 - k) *
                 factorial(jp2 - k) * factorial((j3 - j2 + m1).as_int() + k) *
                 factorial((j3 - j1 - m2).as_int() + k);
    BigRat term = BigRat(1, den);
    if (k % 2 != 0) term = -term;
    sum += term;
  }
  if (sum == 0) return SqrtRat::zero();

  int phase = (j1 - j2 - m3).as_int();
  if (((phase % 2) + 2) % 2 != 0) sum = -sum;
  return SqrtRat{sum, norm};
}

inline double wigner3j_value(const ThreeJArgs& a) { return wigner3j(a).value(); }

namespace detail {

// <J' K M| D-function of rank L, 00 component |J K M> via two 3-j symbols.
// The (-1)^(K-M) prefactor is fixed by the Euler-angle quadrature oracle.
inline SqrtRat rank_element(HalfInt Jp, HalfInt J, HalfInt K, HalfInt M,
                            int L) {
  const HalfInt rank = HalfInt::from_int(L);
  SqrtRat t_m = wigner3j({Jp, rank, J, M, HalfInt(0), -M});
  if (t_m.is_zero()) return SqrtRat::zero();
  SqrtRat t_k = wigner3j({Jp, rank, J, K, HalfInt(0), -K});
  if (t_k.is_zero()) return SqrtRat::zero();
  BigRat dim = BigRat((2 * J.value() + 1) * (2 * Jp.value() + 1));
  SqrtRat out = t_m * t_k * SqrtRat{BigRat(1), dim};
  int phase = (K - M).as_int();
  if (((phase % 2) + 2) % 2 != 0) out.q = -out.q;
  return out;
}

inline bool common_projections(const BasisState& b, const BasisState& k) {
  if (b.K != k.K || b.M != k.M) return false;
  // valid symmetric-top states have integer J-K and J-M
  if ((b.J - b.K).twice % 2 != 0 || (b.J - b.M).twice % 2 != 0) return false;
  if ((k.J - k.K).twice % 2 != 0 || (k.J - k.M).twice % 2 != 0) return false;
  if (b.J < abs(b.K) || b.J < abs(b.M)) return false;
  if (k.J < abs(k.K) || k.J < abs(k.M)) return false;
  return true;
}

}  // namespace detail

// <J' K M| cos(theta) |J K M>; zero unless K'=K, M'=M, |J'-J| <= 1.
inline double cos_element(const BasisState& bra, const BasisState& ket) {
  if (!detail::common_projections(bra, ket)) return 0.0;
  if (abs(bra.J - ket.J) > HalfInt::from_int(1)) return 0.0;
  return detail::rank_element(bra.J, ket.J, ket.K, ket.M, 1).value();
}

// <J' K M| cos^2(theta) |J K M> = (2/3) rank-2 element + (1/3) delta_{J'J}.
inline double cos2_element(const BasisState& bra, const BasisState& ket) {
  if (!detail::common_projections(bra, ket)) return 0.0;
  if (abs(bra.J - ket.J) > HalfInt::from_int(2)) return 0.0;
  SqrtRat r2 = detail::rank_element(bra.J, ket.J, ket.K, ket.M, 2);
  double v = (2.0 / 3.0) * r2.value();
  if (bra.J == ket.J) v += 1.0 / 3.0;
  return v;
}

}  // namespace qpend
