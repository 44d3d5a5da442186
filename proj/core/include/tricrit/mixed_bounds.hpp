#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tricrit/cube_tangle.hpp"
#include "tricrit/state.hpp"

namespace tricrit {

/// Largest rank for which the full r^4 x r^4 A tensor is built.
inline constexpr int kDefaultRankLimit = 6;

/// g_{t,i}(sqrt(u_l) Psi_l, sqrt(u_l') Psi_l') for every sub-cube, as r x r
/// matrices indexed (l, l'). Building block of every A-tensor entry.
struct WeightedPairTables {
  int rank = 0;
  std::vector<std::array<std::array<CMatrix, 2>, 2>> per_cube;  // [cube][t][i]
};

WeightedPairTables weighted_pair_tables(const SpectralDecomposition& sd);

/// Quartic-form tensor over the eigenbasis. Row multi-index (l, m, j, k),
/// column (l', m', j', k'), k fastest. Slots l, l', j, j' carry unconjugated
/// coefficients, m, m', k, k' conjugated ones, so that for a decomposition
/// vector y,  F^4 = sum A y_l y_l' conj(y_m y_m') y_j y_j' conj(y_k y_k').
///
///   A = 1/2 sum_cubes [Q00 (x) Q11 + Q11 (x) Q00 - Q01 (x) Q10 - Q10 (x) Q01],
///   Q_tt'[(l,m),(l',m')] = sum_i g_{t,i}(l,l') conj(g_{t',i}(m,m')).
struct ATensor {
  int rank = 0;
  CMatrix entries;

  static int flat(int r, const std::array<int, 4>& idx) {
    return ((idx[0] * r + idx[1]) * r + idx[2]) * r + idx[3];
  }
  Complex operator()(const std::array<int, 4>& row, const std::array<int, 4>& col) const {
    return entries(flat(rank, row), flat(rank, col));
  }
};

/// One entry of A without forming the tensor.
Complex a_entry(const WeightedPairTables& tables, const std::array<int, 4>& row, const std::array<int, 4>& col);

ATensor a_tensor(const SpectralDecomposition& sd, int rank_limit = kDefaultRankLimit);

/// Deviation from invariance under the (l,m) <-> (j,k) block exchange.
double block_swap_asymmetry(const ATensor& a);
/// Deviation of A under the l<->m, j<->k exchange from conj(A).
double conjugation_asymmetry(const ATensor& a);

struct CTerm {
  CMatrix c;  ///< r x r over (l, l')
  double sigma = 0.0;
  int sign = 1;
};

struct BTerm {
  CMatrix b;  ///< r^2 x r^2 over ((l,m), (l',m'))
  double sigma = 0.0;
  int sign = 1;
  std::vector<CTerm> c_terms;  ///< b = sum sign * c (x) conj(c)
};

/// A = sum_j sign_j B_j (x) B_j, each B_j = sum_m sign_jm (C_j)_m (x) conj((C_j)_m).
struct CChain {
  int rank = 0;
  std::vector<BTerm> b_terms;
  Warnings warnings;

  bool empty() const { return b_terms.empty(); }
  std::size_t c_count() const;
};

CChain c_chain(const ATensor& a);
CMatrix reconstruct(const BTerm& b);
CMatrix reconstruct(const CChain& chain);

/// max{lambda_1 - sum_{i>1} lambda_i, 0} over the singular values of m.
double lambda_gap(const CMatrix& m);

enum class BoundMethod {
  zz,        ///< optimize over z_j (sum |z|^4 = 1) and Z_jm (sum |Z|^2 = 1)
  uniform,   ///< (1/r')^(1/4) times the optimum over Z_jm alone
  dominant,  ///< lambda gap of the single heaviest (C_j)_m
};

struct BoundParams {
  BoundMethod method = BoundMethod::zz;
  int restarts = 512;
  int refine_steps = 64;
  std::uint64_t seed = 0;
};

struct BoundResult {
  BoundMethod method = BoundMethod::zz;
  double value = 0.0;
  Warnings warnings;
};

BoundResult lower_bound(const CChain& chain, const BoundParams& params);

const char* to_string(BoundMethod m);

}  // namespace tricrit
