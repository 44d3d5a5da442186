#pragma once

#include <span>

#include "tricrit/types.hpp"

namespace tricrit {

/// Tripartite pure state a_{ijk} in the standard basis. Amplitudes are kept
/// exactly as given; no normalization is ever applied implicitly.
class PureState {
 public:
  PureState(Dims dims, CVector amplitudes);

  const Dims& dims() const { return dims_; }
  const CVector& amplitudes() const { return amplitudes_; }

  Complex operator()(int i, int j, int k) const { return amplitudes_[dims_.index(i, j, k)]; }
  double norm_squared() const { return amplitudes_.squaredNorm(); }

  PureState scaled(Complex c) const { return PureState(dims_, c * amplitudes_); }
  PureState normalized() const;

 private:
  Dims dims_;
  CVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite operator on the joint space.
class DensityMatrix {
 public:
  /// Validates hermiticity, trace and positivity within `tol`.
  DensityMatrix(Dims dims, CMatrix entries, double tol = 1e-8);

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return entries_; }
  int size() const { return static_cast<int>(entries_.rows()); }

 private:
  Dims dims_;
  CMatrix entries_;
};

/// Eigenpairs of a density matrix, largest eigenvalue first.
struct SpectralDecomposition {
  Dims dims;
  std::vector<double> eigenvalues;
  std::vector<PureState> eigenvectors;

  int rank() const { return static_cast<int>(eigenvalues.size()); }
  /// Sum_a u_a |Psi_a><Psi_a|.
  CMatrix reconstruct() const;
};

/// Bijection of the party labels (0, 1, 2). Entry k names the old party that
/// becomes party k.
class PartyPermutation {
 public:
  explicit PartyPermutation(std::array<int, 3> map);
  static PartyPermutation identity() { return PartyPermutation({0, 1, 2}); }
  static std::vector<PartyPermutation> all();

  int operator[](std::size_t k) const { return map_[k]; }
  const std::array<int, 3>& map() const { return map_; }

  /// Permutation equivalent to applying `*this` first, then `second`.
  PartyPermutation then(const PartyPermutation& second) const;

  friend bool operator==(const PartyPermutation&, const PartyPermutation&) = default;

 private:
  std::array<int, 3> map_;
};

enum class NamedState { ghz2, ghz, w, w_tilde };

inline constexpr double kDefaultRankCutoff = 1e-12;

PureState make_pure_state(Dims dims, std::span<const Complex> amplitudes);
PureState named_state(NamedState kind, int d = 2);
PureState product_state(const CVector& v1, const CVector& v2, const CVector& v3);
PureState permute_parties(const PureState& s, const PartyPermutation& p);

DensityMatrix pure_density(const PureState& s);
DensityMatrix ghz_w_mixture(double x);
DensityMatrix white_noise_mixture(const PureState& s, double p);

/// Eigenpairs with u_a > cutoff * u_1, descending. Each eigenvector has its
/// largest-magnitude component (first such index on ties) made real positive.
SpectralDecomposition spectral_decompose(const DensityMatrix& rho,
                                         double cutoff = kDefaultRankCutoff);

}  // namespace tricrit
