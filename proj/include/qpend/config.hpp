#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpend/errors.hpp"
#include "qpend/halfint.hpp"

namespace qpend {

// Physical parameters of the pendular top.  B sets the rotational energy
// scale, rho the prolate/oblate asymmetry, eta the orienting (cos) field,
// zeta the aligning (cos^2) field; K and M are the conserved projections.
struct TopConfig {
  double B = 1.0;
  double rho = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  HalfInt K{0};
  HalfInt M{0};

  void validate() const {
    if (!(B > 0.0)) throw domain_error("TopConfig: B must be > 0");
    if (!(zeta >= 0.0)) throw domain_error("TopConfig: zeta must be >= 0");
    if (!(rho > -1.0)) throw domain_error("TopConfig: rho must be > -1");
  }

  TopConfig with_eta(double e) const {
    TopConfig c = *this;
    c.eta = e;
    return c;
  }
};

enum class TopKind { trig, hyper };

inline std::string to_string(TopKind k) {
  return k == TopKind::trig ? "trig" : "hyper";
}

// eta-scan result for one top kind: one row of sorted eigenvalues per
// grid value, plus a per-row convergence flag (and error note, if the
// solver failed for that row only).
struct SpectrumScan {
  TopKind kind = TopKind::trig;
  std::vector<double> eta_grid;
  std::vector<std::vector<double>> curves;  // curves[row][level]
  int jmax_or_nbasis = 0;
  std::vector<bool> converged;
  std::vector<std::string> row_errors;  // empty string = ok
};

}  // namespace qpend
