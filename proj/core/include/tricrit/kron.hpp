#pragma once

#include <vector>

#include "tricrit/types.hpp"

namespace tricrit::kron {

/// Shapes of the outer (p1 x q1) and inner (p2 x q2) Kronecker factors.
struct BlockDims {
  int p1 = 1, q1 = 1;
  int p2 = 1, q2 = 1;

  int rows() const { return p1 * p2; }
  int cols() const { return q1 * q2; }
  BlockDims swapped() const { return {p2, q2, p1, q1}; }
  static BlockDims square(int outer, int inner) { return {outer, outer, inner, inner}; }
};

struct KronTerm {
  CMatrix x;  ///< p1 x q1
  CMatrix y;  ///< p2 x q2
  double sigma = 0.0;
};

/// m ~= sum_i x_i (x) y_i, sigma descending.
using KronTerms = std::vector<KronTerm>;

/// m = sum_i b_i (x) b_i.
struct SymmetricTerm {
  CMatrix b;
  double sigma = 0.0;
};

/// m = sum_i sign_i b_i (x) b_i, with each b_i fixed by the supplied
/// conjugation involution (see signed_symmetric_kp_decompose).
struct SignedSymmetricTerm {
  CMatrix b;
  double sigma = 0.0;
  int sign = 1;
};

/// m = sum_i sign_i c_i (x) conj(c_i).
struct ConjugateTerm {
  CMatrix c;
  double sigma = 0.0;
  int sign = 1;
};

/// Relative singular-value cutoff below which terms are dropped.
inline constexpr double kTermCutoff = 1e-12;
/// Relative tolerance for the symmetry / hermiticity preconditions.
inline constexpr double kStructureTol = 1e-8;

/// Column-stacked vector of a p x q matrix.
CVector vec(const CMatrix& m);
/// Inverse of vec.
CMatrix unvec(const CVector& v, int rows, int cols);

/// (p1 q1) x (p2 q2) matrix with rearrange(A (x) B) = vec(A) vec(B)^T.
CMatrix rearrange(const CMatrix& m, const BlockDims& b);
/// Inverse of rearrange for the same block shape.
CMatrix unrearrange(const CMatrix& r, const BlockDims& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// SVD of the rearranged matrix; the leading term is the nearest Kronecker
/// product in Frobenius norm.
KronTerms kp_decompose(const CMatrix& m, const BlockDims& b);

CMatrix reconstruct(const KronTerms& terms);

/// Takagi factorization R = W Sigma W^T of a complex-symmetric R.
struct Takagi {
  RVector sigma;  ///< descending
  CMatrix w;      ///< orthonormal columns
};
Takagi takagi(const CMatrix& r);

/// m = sum_i b_i (x) b_i via Takagi factorization of rearrange(m). Needs
/// square, equal factor shapes and a complex-symmetric rearrangement.
std::vector<SymmetricTerm> symmetric_kp_decompose(const CMatrix& m, const BlockDims& b);

/// Variant of symmetric_kp_decompose for matrices whose rearrangement R also
/// satisfies P R P = conj(R) for a permutation involution P on vec indices.
/// The factors are chosen with P vec(b_i) = conj(vec(b_i)), which forces real
/// but possibly negative weights: m = sum_i sign_i b_i (x) b_i.
/// `involution[k]` is the image of vec index k.
std::vector<SignedSymmetricTerm> signed_symmetric_kp_decompose(const CMatrix& m, const BlockDims& b,
                                                               const std::vector<int>& involution);

/// m = sum_i sign_i c_i (x) conj(c_i) from the eigendecomposition of the
/// Hermitian matrix rearrange(m). Needs equal factor shapes.
std::vector<ConjugateTerm> conjugate_kp_decompose(const CMatrix& m, const BlockDims& b);

}  // namespace tricrit::kron
