#include "tricrit/quasi_pure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tricrit/mixed_bounds.hpp"

namespace tricrit {

TauMatrix tau_matrix(const SpectralDecomposition& sd) {
  TauMatrix out;
  const int r = sd.rank();
  if (r == 0) throw InvalidInput("tau matrix needs at least one eigenpair");
  if (r > 1 && sd.eigenvalues[0] - sd.eigenvalues[1] < 0.1) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "dominant eigenvalue gap %.3g is below 0.1; the quasi-pure regime is doubtful",
                  sd.eigenvalues[0] - sd.eigenvalues[1]);
    out.warnings.emplace_back(buf);
  }
  const WeightedPairTables tables = weighted_pair_tables(sd);
  const Complex dominant = a_entry(tables, {0, 0, 0, 0}, {0, 0, 0, 0});
  out.dominant_element = dominant.real();
  if (!(out.dominant_element > kDominantElementFloor)) {
    out.warnings.emplace_back("dominant A element vanishes; F_a is inconclusive");
    return out;
  }
  const double denom = std::pow(out.dominant_element, 0.75);
  CMatrix tau(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) tau(a, b) = a_entry(tables, {a, 0, 0, 0}, {b, 0, 0, 0}) / denom;
  out.asymmetry = (tau - tau.transpose()).norm();
  if (out.asymmetry > 1e-8 * std::max(1.0, tau.norm())) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "tau matrix is not symmetric (deviation %.3g)", out.asymmetry);
    out.warnings.emplace_back(buf);
  }
  out.tau = std::move(tau);
  return out;
}

QuasiPureResult f_a(const SpectralDecomposition& sd) {
  const TauMatrix t = tau_matrix(sd);
  QuasiPureResult out;
  out.rank = sd.rank();
  out.dominant_eigenvalue = sd.eigenvalues.front();
  out.tau_asymmetry = t.asymmetry;
  out.warnings = t.warnings;
  if (t.conclusive()) out.f_a = lambda_gap(*t.tau);
  return out;
}

QuasiPureResult f_a(const DensityMatrix& rho, double cutoff) { return f_a(spectral_decompose(rho, cutoff)); }

}  // namespace tricrit
