#pragma once

#include <optional>

#include "tricrit/state.hpp"

namespace tricrit {

/// Below this the dominant A element is treated as zero and F_a as undefined.
inline constexpr double kDominantElementFloor = 1e-14;

struct TauMatrix {
  /// Empty when the dominant element vanishes: the approximation is
  /// inconclusive there, which is not the same as F_a = 0.
  std::optional<CMatrix> tau;
  double dominant_element = 0.0;  ///< A_{11,11}^{11,11}
  double asymmetry = 0.0;         ///< ||tau - tau^T||_F
  Warnings warnings;

  bool conclusive() const { return tau.has_value(); }
};

/// tau_ab = A[(a,1,1,1),(b,1,1,1)] / A_{1111}^{3/4}, from r^2 entries of the
/// A tensor only. Index 1 is the dominant eigenvector.
TauMatrix tau_matrix(const SpectralDecomposition& sd);

struct QuasiPureResult {
  std::optional<double> f_a;  ///< empty when inconclusive
  int rank = 0;
  double dominant_eigenvalue = 0.0;
  double tau_asymmetry = 0.0;
  Warnings warnings;

  bool conclusive() const { return f_a.has_value(); }
};

QuasiPureResult f_a(const SpectralDecomposition& sd);
QuasiPureResult f_a(const DensityMatrix& rho, double cutoff = kDefaultRankCutoff);

}  // namespace tricrit
