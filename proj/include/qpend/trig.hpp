#pragma once

// Numerical spectrum of the trigonometric top: banded |JKM> Hamiltonian
// with cos/cos^2 couplings, eta scans with per-row convergence flags, the
// planar-pendulum Fourier solver for the (|K|,|M|) = (0,1/2) case, and the
// stationary points of the effective potential.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qpend/angular.hpp"
#include "qpend/config.hpp"
#include "qpend/util.hpp"

namespace qpend {

inline HalfInt trig_jmin(HalfInt K, HalfInt M) {
  return abs(K) > abs(M) ? abs(K) : abs(M);
}

// True exactly when the 1D reduction is the planar pendulum: the
// centrifugal term vanishes identically for {|K|,|M|} = {0, 1/2}.
inline bool planar_case(HalfInt K, HalfInt M) {
  int a = std::abs(K.twice), b = std::abs(M.twice);
  return (a == 0 && b == 1) || (a == 1 && b == 0);
}

inline void check_basis_parity(HalfInt K, HalfInt M) {
  if ((K - M).twice % 2 != 0)
    throw domain_error(
        "trig basis: K and M must be both integers or both half-integers "
        "(got K=" + to_string(K) + ", M=" + to_string(M) + ")");
}

// H in the truncated |JKM> basis, J = Jmin..jmax.  Exactly symmetric and
// banded with bandwidth 2.
inline Eigen::MatrixXd build_trig_hamiltonian(const TopConfig& c,
                                              HalfInt jmax) {
  c.validate();
  check_basis_parity(c.K, c.M);
  HalfInt jmin = trig_jmin(c.K, c.M);
  if (jmax < jmin)
    throw domain_error("build_trig_hamiltonian: jmax=" + to_string(jmax) +
                       " below max(|K|,|M|)=" + to_string(jmin));
  int dim = (jmax - jmin).twice / 2 + 1;
  double K = c.K.value();

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    HalfInt J = jmin + r;
    BasisState ket{J, c.K, c.M};
    double Jv = J.value();
    H(r, r) = c.B * (Jv * (Jv + 1.0) - c.rho * K * K) -
              c.eta * cos_element(ket, ket) - c.zeta * cos2_element(ket, ket);
    if (r + 1 < dim) {
      // cos^2 couples J+1 <-> J too once K and M are both nonzero
      BasisState bra{J + 1, c.K, c.M};
      double v = -c.eta * cos_element(bra, ket) -
                 c.zeta * cos2_element(bra, ket);
      H(r + 1, r) = v;
      H(r, r + 1) = v;
    }
    if (r + 2 < dim) {
      BasisState bra{J + 2, c.K, c.M};
      double v = -c.zeta * cos2_element(bra, ket);
      H(r + 2, r) = v;
      H(r, r + 2) = v;
    }
  }
  return H;
}

namespace detail {

inline std::vector<double> lowest_eigenvalues(const Eigen::MatrixXd& H,
                                              int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    double mx = H.cwiseAbs().maxCoeff();
    throw computational_error(
        "eigensolver failed on " + std::to_string(H.rows()) + "x" +
        std::to_string(H.cols()) + " matrix, max |entry| " + fmt_g17(mx));
  }
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

}  // namespace detail

// Planar pendulum on [0, 2pi): V = -B(rho K^2 + 1/4) - eta cos - zeta cos^2
// in a Fourier basis e^{ik theta}; antiperiodic=true selects the
// half-integer k class.
inline Eigen::MatrixXd planar_hamiltonian(const TopConfig& c, int kmax,
                                          bool antiperiodic) {
  c.validate();
  if (kmax < 1) throw domain_error("planar_hamiltonian: kmax must be >= 1");
  double K = c.K.value();
  double diag0 = -c.B * (c.rho * K * K + 0.25) - 0.5 * c.zeta;
  int dim = antiperiodic ? 2 * kmax : 2 * kmax + 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    double k = antiperiodic ? (-kmax + 0.5 + i) : (-kmax + i);
    H(i, i) = c.B * k * k + diag0;
    if (i + 1 < dim) {
      H(i + 1, i) = -0.5 * c.eta;
      H(i, i + 1) = -0.5 * c.eta;
    }
    if (i + 2 < dim) {
      H(i + 2, i) = -0.25 * c.zeta;
      H(i, i + 2) = -0.25 * c.zeta;
    }
  }
  return H;
}

// Union of the periodic and antiperiodic classes, sorted ascending: both
// appear in the half-integer-M spectrum (double-cover boundary condition).
inline std::vector<double> planar_eigenvalues(const TopConfig& c, int kmax,
                                              int count) {
  int dim = 4 * kmax + 1;
  if (count > dim)
    throw precondition_error("planar_eigenvalues: count exceeds basis size");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(
      planar_hamiltonian(c, kmax, false), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(
      planar_hamiltonian(c, kmax, true), Eigen::EigenvaluesOnly);
  if (ep.info() != Eigen::Success || ea.info() != Eigen::Success)
    throw computational_error("planar eigensolver failed");
  std::vector<double> all;
  all.reserve(dim);
  for (int i = 0; i < ep.eigenvalues().size(); ++i)
    all.push_back(ep.eigenvalues()[i]);
  for (int i = 0; i < ea.eigenvalues().size(); ++i)
    all.push_back(ea.eigenvalues()[i]);
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

// Lowest `count` eigenvalues, ascending.  Mixed-parity (K, M) is accepted
// only for the planar-pendulum case, where jmax plays the role of the
// Fourier cutoff.
inline std::vector<double> trig_eigenvalues(const TopConfig& c, HalfInt jmax,
                                            int count) {
  if (planar_case(c.K, c.M))
    return planar_eigenvalues(c, jmax.twice / 2, count);
  check_basis_parity(c.K, c.M);
  HalfInt jmin = trig_jmin(c.K, c.M);
  if (jmax < jmin)
    throw domain_error("trig_eigenvalues: jmax below max(|K|,|M|)");
  int dim = (jmax - jmin).twice / 2 + 1;
  if (count > dim)
    throw precondition_error("trig_eigenvalues: count=" +
                             std::to_string(count) + " exceeds dimension " +
                             std::to_string(dim));
  return detail::lowest_eigenvalues(build_trig_hamiltonian(c, jmax), count);
}

inline HalfInt default_trig_jmax(HalfInt K, HalfInt M) {
  return trig_jmin(K, M) + 50;
}

inline HalfInt default_trig_jmax(const TopConfig& c) {
  return default_trig_jmax(c.K, c.M);
}

// One scan row: solve at jmax and jmax+10; converged when no requested
// eigenvalue moves by 1e-8.  Escalates once to max(|K|,|M|)+100 if not.
inline SpectrumScan scan_eta(const TopConfig& c_template,
                             const std::vector<double>& eta_values,
                             HalfInt jmax, int count,
                             unsigned threads = default_threads()) {
  if (eta_values.empty())
    throw precondition_error("scan_eta: empty eta grid");
  if (!std::is_sorted(eta_values.begin(), eta_values.end()))
    throw precondition_error("scan_eta: eta grid must be sorted");

  SpectrumScan scan;
  scan.kind = TopKind::trig;
  scan.eta_grid = eta_values;
  scan.jmax_or_nbasis = jmax.twice / 2;
  scan.curves.assign(eta_values.size(), {});
  scan.converged.assign(eta_values.size(), false);
  scan.row_errors.assign(eta_values.size(), "");

  HalfInt jesc = trig_jmin(c_template.K, c_template.M) + 100;
  parallel_for(eta_values.size(), threads, [&](std::size_t row) {
    TopConfig c = c_template.with_eta(eta_values[row]);
    try {
      auto solve_pair = [&](HalfInt jm) {
        std::vector<double> v0 = trig_eigenvalues(c, jm, count);
        std::vector<double> v1 = trig_eigenvalues(c, jm + 10, count);
        double shift = 0.0;
        for (int i = 0; i < count; ++i)
          shift = std::max(shift, std::abs(v1[i] - v0[i]));
        return std::pair{v1, shift < 1e-8};
      };
      auto [vals, ok] = solve_pair(jmax);
      if (!ok && jmax < jesc) std::tie(vals, ok) = solve_pair(jesc);
      scan.curves[row] = std::move(vals);
      scan.converged[row] = ok;
    } catch (const std::exception& ex) {
      scan.curves[row].assign(count,
                              std::numeric_limits<double>::quiet_NaN());
      scan.row_errors[row] = ex.what();
    }
  });
  return scan;
}

// -------- effective-potential stationary points --------

struct PotentialExtremum {
  double theta = 0.0;
  double value = 0.0;
  bool is_minimum = false;
};

// The orienting potential seen by the wavefunction before the sqrt(sin)
// gauge: B[(M^2+K^2)csc^2 - 2MK csc cot - rho K^2] - eta cos - zeta cos^2.
inline double effective_potential(const TopConfig& c, double theta) {
  double K = c.K.value(), M = c.M.value();
  double cs = 1.0 / std::sin(theta), ct = std::cos(theta) / std::sin(theta);
  double u = std::cos(theta);
  return c.B * ((M * M + K * K) * cs * cs - 2.0 * M * K * cs * ct -
                c.rho * K * K) -
         c.eta * u - c.zeta * u * u;
}

inline double effective_potential_slope(const TopConfig& c, double theta) {
  double K = c.K.value(), M = c.M.value();
  double cs = 1.0 / std::sin(theta), ct = std::cos(theta) / std::sin(theta);
  double u = std::cos(theta), su = std::sin(theta);
  return c.B * (-2.0 * (M * M + K * K) * cs * cs * ct +
                2.0 * M * K * cs * (ct * ct + cs * cs)) +
         c.eta * su + 2.0 * c.zeta * u * su;
}

// Stationary points of the effective potential on (0, pi) by bracketed
// root-finding on the slope; each labeled minimum/maximum.
inline std::vector<PotentialExtremum> potential_extrema(const TopConfig& c,
                                                        int grid = 4096) {
  c.validate();
  const double lo = 1e-6, hi = M_PI - 1e-6;
  std::vector<PotentialExtremum> out;
  double prev_t = lo, prev_f = effective_potential_slope(c, lo);
  for (int i = 1; i <= grid; ++i) {
    double t = lo + (hi - lo) * i / grid;
    double f = effective_potential_slope(c, t);
    if (prev_f == 0.0 || (prev_f < 0.0) != (f < 0.0)) {
      double root;
      if (prev_f == 0.0) {
        root = prev_t;
      } else {
        auto fn = [&](double x) { return effective_potential_slope(c, x); };
        boost::math::tools::eps_tolerance<double> tol(50);
        std::uintmax_t iters = 100;
        auto r = boost::math::tools::toms748_solve(fn, prev_t, t, prev_f, f,
                                                   tol, iters);
        root = 0.5 * (r.first + r.second);
      }
      PotentialExtremum ex;
      ex.theta = root;
      ex.value = effective_potential(c, root);
      ex.is_minimum = prev_f < 0.0;  // slope goes - to +
      out.push_back(ex);
    }
    prev_t = t;
    prev_f = f;
  }
  return out;
}

}  // namespace qpend
