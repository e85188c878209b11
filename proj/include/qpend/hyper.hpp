#pragma once

// Hyperbolic-top spectrum via a Rayleigh-Ritz/Galerkin method: decaying
// non-orthogonal trial functions in x = cosh(theta), overlap matrix, and a
// symmetric generalized eigenproblem solved through the overlap's spectral
// decomposition (small overlap eigenvalues truncated, not fatal).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qpend/config.hpp"
#include "qpend/util.hpp"

namespace qpend {

struct GalerkinBasis {
  int n_basis = 0;
  double zeta = 0.0;
  HalfInt K{0}, M{0};
  double decay = 0.0;  // c in e^{-c x}, c = sqrt(zeta/B)
  double p = 0.0;      // ((x-1)/2)^p, endpoint exponent from the seeds
  double q = 0.0;      // ((x+1)/2)^q

  static GalerkinBasis for_config(const TopConfig& c, int n) {
    c.validate();
    if (!(c.zeta > 0.0))
      throw domain_error("GalerkinBasis: zeta must be > 0 (confining)");
    if (n < 1) throw domain_error("GalerkinBasis: n_basis must be >= 1");
    GalerkinBasis b;
    b.n_basis = n;
    b.zeta = c.zeta;
    b.K = c.K;
    b.M = c.M;
    b.decay = std::sqrt(c.zeta / c.B);
    b.p = 0.5 * std::abs((c.M - c.K).value());
    b.q = -0.5 * std::abs((c.M + c.K).value());
    return b;
  }

  // Polynomial factor: Laguerre L_i(2c(x-1)).  Spans the same space as
  // x^i but keeps the overlap matrix well conditioned, so a 20+ basis
  // still has full numerical rank.  Returns {L_i, L_i'} in t.
  std::pair<double, double> poly(int i, double t) const {
    double L = 1.0, Lp = 0.0;
    double Lm = 0.0, Lpm = 0.0;
    for (int k = 0; k < i; ++k) {
      double Ln = ((2.0 * k + 1.0 - t) * L - k * Lm) / (k + 1.0);
      double Lpn = ((2.0 * k + 1.0 - t) * Lp - L - k * Lpm) / (k + 1.0);
      Lm = L;
      Lpm = Lp;
      L = Ln;
      Lp = Lpn;
    }
    return {L, Lp};
  }

  // shared decaying weight; xm1 = x - 1 passed explicitly so the
  // quadrature's endpoint distance survives where x itself rounds to 1
  double weight(double x, double xm1) const {
    return std::exp(-decay * x) * std::pow(0.5 * xm1, p) *
           std::pow(0.5 * (x + 1.0), q);
  }

  double trial(int i, double x, double xm1) const {
    return weight(x, xm1) * poly(i, 2.0 * decay * xm1).first;
  }
  double trial(int i, double x) const { return trial(i, x, x - 1.0); }

  // trial_i'(x) * s with s = sqrt(x^2-1): the (x-1)^(p-1) piece is grouped
  // as s/xm1 so nothing overflows on the way into the endpoint
  double trial_deriv_s(int i, double x, double xm1, double s) const {
    auto [L, Lp] = poly(i, 2.0 * decay * xm1);
    double w = weight(x, xm1);
    return w * (2.0 * decay * Lp * s +
                L * ((q / (x + 1.0) - decay) * s + p * (s / xm1)));
  }
  // upper integration limit: integrands ~ e^{-2cx} x^(2N+small) below 1e-26
  double x_cut() const {
    double n2 = 2.0 * n_basis + 6.0;
    double x = 10.0;
    while (2.0 * decay * x - n2 * std::log(x) < 60.0 && x < 1e4) x *= 1.5;
    return x;
  }
};

namespace detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod: every integrand below is analytic on the closed
// interval (the endpoint powers 2p = |M-K| and the (x+1) exponents are
// integers), and the Laguerre factors oscillate, which suits subdivision
// far better than an endpoint-clustered rule.
template <typename F>
inline QuadResult hyper_quad(const F& f, double a, double b) {
  QuadResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, 1e-12, &r.error);
  return r;
}

}  // namespace detail

struct HyperMatrices {
  Eigen::MatrixXd H0;  // eta-independent part (kinetic + centrifugal + zeta)
  Eigen::MatrixXd X;   // matrix of x = cosh(theta); H(eta) = H0 + eta*X
  Eigen::MatrixXd O;   // overlap, unit diagonal by construction
};

// All entries by adaptive quadrature in x = cosh(theta) on (1, x_cut),
// weak (integrated-by-parts) form, two passes: raw diagonal norms first,
// then unit-diagonal-scaled entries to abs tol 1e-12.
inline HyperMatrices build_hyper_matrices_split(const TopConfig& c,
                                                const GalerkinBasis& basis) {
  c.validate();
  const int N = basis.n_basis;
  const double xc = basis.x_cut();
  const double Kv = c.K.value(), Mv = c.M.value();

  std::vector<double> scale(N);
  for (int i = 0; i < N; ++i) {
    auto f = [&](double x) {
      double t = basis.trial(i, x, x - 1.0);
      return t * t;
    };
    auto r = detail::hyper_quad(f, 1.0, xc);
    if (!(r.value > 0.0) || !std::isfinite(r.value))
      throw conditioning_error("hyper basis: non-positive norm for trial " +
                               std::to_string(i));
    scale[i] = 1.0 / std::sqrt(r.value);
  }

  HyperMatrices m;
  m.H0 = Eigen::MatrixXd::Zero(N, N);
  m.X = Eigen::MatrixXd::Zero(N, N);
  m.O = Eigen::MatrixXd::Zero(N, N);
  double worst_err = 0.0;
  int worst_i = 0, worst_j = 0;

  // (M^2+K^2-2MKx)/(x^2-1) = (M-K)^2/(x^2-1) - 2MK/(x+1): only the first
  // piece is singular at x=1, and it vanishes for K=M.
  const double dmk2 = (Mv - Kv) * (Mv - Kv);

  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      double dd = scale[i] * scale[j];
      auto fo = [&](double x) {
        double xm1 = x - 1.0;
        return dd * basis.trial(i, x, xm1) * basis.trial(j, x, xm1);
      };
      auto fx = [&](double x) {
        double xm1 = x - 1.0;
        return dd * x * basis.trial(i, x, xm1) * basis.trial(j, x, xm1);
      };
      // kinetic term integrated by parts: (x^2-1) trial_i' trial_j';
      // grouped as [trial_i' s][trial_j' s] with s = sqrt(x^2-1) so the
      // individually divergent factors never overflow
      auto fh = [&](double x) {
        double xm1 = x - 1.0;
        double s = std::sqrt(xm1 * (x + 1.0));
        double ti = basis.trial(i, x, xm1), tj = basis.trial(j, x, xm1);
        double gi = basis.trial_deriv_s(i, x, xm1, s);
        double gj = basis.trial_deriv_s(j, x, xm1, s);
        double cent = dmk2 == 0.0 ? 0.0 : dmk2 * (ti / s) * (tj / s);
        double reg = ti * tj *
                     (c.B * (c.rho * Kv * Kv - 2.0 * Mv * Kv / (x + 1.0)) +
                      c.zeta * x * x);
        return dd * (c.B * (gi * gj + cent) + reg);
      };
      auto ro = detail::hyper_quad(fo, 1.0, xc);
      auto rx = detail::hyper_quad(fx, 1.0, xc);
      auto rh = detail::hyper_quad(fh, 1.0, xc);
      double err = std::max({ro.error, rx.error, rh.error});
      if (err > worst_err) {
        worst_err = err;
        worst_i = i;
        worst_j = j;
      }
      m.O(i, j) = m.O(j, i) = ro.value;
      m.X(i, j) = m.X(j, i) = rx.value;
      m.H0(i, j) = m.H0(j, i) = rh.value;
    }
  }
  double href = std::max(1.0, m.H0.cwiseAbs().maxCoeff());
  if (worst_err > 1e-8 * href)
    throw computational_error(
        "hyper quadrature did not reach tolerance at element (" +
        std::to_string(worst_i) + "," + std::to_string(worst_j) +
        "), error estimate " + fmt_g17(worst_err));
  return m;
}

inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_hyper_matrices(
    const TopConfig& c, const GalerkinBasis& basis) {
  HyperMatrices m = build_hyper_matrices_split(c, basis);
  return {m.H0 + c.eta * m.X, m.O};
}

struct GeneralizedEigenResult {
  std::vector<double> eigenvalues;
  double overlap_condition_number = 0.0;
  int n_basis_used = 0;
};

// Canonical-orthogonalization solve of H v = lambda O v: overlap
// eigendirections below 1e-12 of the largest are dropped (they carry no
// information in double precision); a genuinely indefinite overlap is an
// error.
inline GeneralizedEigenResult solve_pencil(const Eigen::MatrixXd& H,
                                           const Eigen::MatrixXd& O,
                                           int count) {
  const int N = static_cast<int>(O.rows());
  if (count > N)
    throw precondition_error("solve_pencil: count exceeds basis size");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eo(O);
  if (eo.info() != Eigen::Success)
    throw computational_error("overlap eigensolve failed");
  double lmax = eo.eigenvalues().maxCoeff();
  double lmin = eo.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin < -1e-10 * lmax)
    throw conditioning_error(
        "overlap matrix numerically indefinite (lambda_min " +
        fmt_g17(lmin) + "); use a smaller basis");

  const double cut = 1e-12 * lmax;
  std::vector<int> keep;
  for (int i = 0; i < N; ++i)
    if (eo.eigenvalues()[i] > cut) keep.push_back(i);
  int m = static_cast<int>(keep.size());
  if (m < count)
    throw conditioning_error(
        "overlap rank " + std::to_string(m) + " below requested count " +
        std::to_string(count) + "; use a smaller basis or fewer levels");

  Eigen::MatrixXd W(N, m);
  for (int k = 0; k < m; ++k)
    W.col(k) = eo.eigenvectors().col(keep[k]) /
               std::sqrt(eo.eigenvalues()[keep[k]]);
  Eigen::MatrixXd A = W.transpose() * H * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(A, Eigen::EigenvaluesOnly);
  if (ea.info() != Eigen::Success)
    throw computational_error("projected eigensolve failed");

  GeneralizedEigenResult res;
  res.n_basis_used = m;
  res.overlap_condition_number =
      lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  res.eigenvalues.assign(ea.eigenvalues().data(),
                         ea.eigenvalues().data() + count);
  return res;
}

// Lowest `count` eigenvalues of the hyperbolic operator (its own sign
// convention: the anti-isospectral image of a trig level appears as -E_t).
inline GeneralizedEigenResult hyper_eigenvalues(const TopConfig& c,
                                                int n_basis, int count) {
  if (count > n_basis)
    throw precondition_error("hyper_eigenvalues: count > n_basis");
  GalerkinBasis basis = GalerkinBasis::for_config(c, n_basis);
  auto [H, O] = build_hyper_matrices(c, basis);
  return solve_pencil(H, O, count);
}

// eta scan reusing one set of integrals: H(eta) = H0 + eta*X.  Convergence
// flag per row: n_basis+5 shifts every requested eigenvalue by < 1e-8.
inline SpectrumScan scan_eta_hyper(const TopConfig& c_template,
                                   const std::vector<double>& eta_values,
                                   int n_basis, int count,
                                   unsigned threads = default_threads()) {
  if (eta_values.empty())
    throw precondition_error("scan_eta_hyper: empty eta grid");
  if (!std::is_sorted(eta_values.begin(), eta_values.end()))
    throw precondition_error("scan_eta_hyper: eta grid must be sorted");

  TopConfig c0 = c_template.with_eta(0.0);
  HyperMatrices base = build_hyper_matrices_split(
      c0, GalerkinBasis::for_config(c0, n_basis));
  HyperMatrices wide = build_hyper_matrices_split(
      c0, GalerkinBasis::for_config(c0, n_basis + 5));

  SpectrumScan scan;
  scan.kind = TopKind::hyper;
  scan.eta_grid = eta_values;
  scan.jmax_or_nbasis = n_basis;
  scan.curves.assign(eta_values.size(), {});
  scan.converged.assign(eta_values.size(), false);
  scan.row_errors.assign(eta_values.size(), "");

  parallel_for(eta_values.size(), threads, [&](std::size_t row) {
    double eta = eta_values[row];
    try {
      auto r0 = solve_pencil(base.H0 + eta * base.X, base.O, count);
      auto r1 = solve_pencil(wide.H0 + eta * wide.X, wide.O, count);
      double shift = 0.0;
      for (int i = 0; i < count; ++i)
        shift = std::max(shift,
                         std::abs(r1.eigenvalues[i] - r0.eigenvalues[i]));
      scan.curves[row] = std::move(r1.eigenvalues);
      scan.converged[row] = shift < 1e-8;
    } catch (const std::exception& ex) {
      scan.curves[row].assign(count,
                              std::numeric_limits<double>::quiet_NaN());
      scan.row_errors[row] = ex.what();
    }
  });
  return scan;
}

}  // namespace qpend
