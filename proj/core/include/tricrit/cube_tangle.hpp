#pragma once

#include <array>
#include <vector>

#include "tricrit/state.hpp"

namespace tricrit {

/// One 2x2x2 minimal unit c_{abc} of the coefficient tensor, not normalized.
struct SubCube {
  std::array<Complex, 8> c{};

  Complex& operator()(int a, int b, int k) { return c[(a << 2) | (b << 1) | k]; }
  Complex operator()(int a, int b, int k) const { return c[(a << 2) | (b << 1) | k]; }
  SubCube scaled(Complex s) const;
};

struct CubeInvariants {
  Complex d1, d2, d3;
  double tau = 0.0;  ///< |d1 - 2 d2 + 4 d3| (times 4 under CKW normalization)
  double f = 0.0;    ///< tau^2
};

enum class Normalization {
  raw,    ///< constant factor dropped: tau(GHZ) = 1/4
  ckw,    ///< tau scaled by 4 so that tau(GHZ) = 1
};

/// Two levels lo < hi of one party.
struct LevelPair {
  int lo = 0;
  int hi = 1;
  friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

/// 2 x n 0/1 matrix with rows e_lo, e_hi: the support of the SO(n) generator
/// for the (lo, hi) plane with its zero rows deleted.
struct SelectionMatrix {
  int n = 2;
  LevelPair levels;

  Eigen::MatrixXd matrix() const;
};

/// Choice of one level pair per party, i.e. one sub-cube of the tensor grid.
struct CubeIndex {
  std::array<LevelPair, 3> pairs;
  friend bool operator==(const CubeIndex&, const CubeIndex&) = default;
};

/// n(n-1)/2 matrices, one per unordered level pair, lexicographic.
std::vector<SelectionMatrix> selection_matrices(int n);

/// All N1*N2*N3 sub-cubes in lexicographic order (party C's pair fastest).
std::vector<CubeIndex> cube_indices(const Dims& dims);

/// Direct index slicing.
SubCube extract_cube(const PureState& s, const CubeIndex& c);

/// (s_alpha (x) s_beta (x) s_gamma) applied to the amplitude vector.
SubCube extract_cube_by_selection(const PureState& s, const CubeIndex& c);

CubeInvariants cube_invariants(const SubCube& c, Normalization norm = Normalization::raw);

/// g_{t,i}(ca, cb) = ca_{00t} cb_{11i} + ca_{11t} cb_{00i} - ca_{01t} cb_{10i} - ca_{10t} cb_{01i}.
/// Bilinear (no conjugation); g(ca, cb, t, i) == g(cb, ca, i, t).
Complex pair_bilinear(const SubCube& ca, const SubCube& cb, int t, int i);

/// R_{ij} = sum_r g_{j,r} conj(g_{i,r}) with g = pair_bilinear(c, c, ., .).
/// Hermitian PSD with det R = f.
Eigen::Matrix2cd r_matrix(const SubCube& c);

struct CubeContribution {
  CubeIndex index;
  CubeInvariants invariants;
};

/// Per-cube invariants in lexicographic order.
std::vector<CubeContribution> cube_report(const PureState& s, Normalization norm = Normalization::raw);

/// F = (sum over sub-cubes of f)^(1/4), summed in lexicographic cube order.
double big_f(const PureState& s, Normalization norm = Normalization::raw);

/// Same quantity evaluated through selection-matrix products.
double big_f_by_selection(const PureState& s, Normalization norm = Normalization::raw);

}  // namespace tricrit
