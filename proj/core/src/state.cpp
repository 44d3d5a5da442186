#include "tricrit/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tricrit {

namespace {

void check_dims(const Dims& dims) {
  for (int p = 0; p < 3; ++p) {
    if (dims[p] < 2) {
      throw InvalidInput("party " + std::to_string(p) + " has dimension " +
                         std::to_string(dims[p]) + "; every party needs at least 2 levels");
    }
  }
}

bool all_finite(const CVector& v) {
  return std::all_of(v.data(), v.data() + v.size(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

PureState::PureState(Dims dims, CVector amplitudes) : dims_(dims), amplitudes_(std::move(amplitudes)) {
  check_dims(dims_);
  if (amplitudes_.size() != dims_.total()) {
    throw InvalidInput("expected " + std::to_string(dims_.total()) + " amplitudes, got " +
                       std::to_string(amplitudes_.size()));
  }
  if (!all_finite(amplitudes_)) throw InvalidInput("amplitudes must be finite");
}

PureState PureState::normalized() const {
  const double nrm = amplitudes_.norm();
  if (nrm == 0.0) throw InvalidInput("cannot normalize the zero vector");
  return PureState(dims_, amplitudes_ / nrm);
}

DensityMatrix::DensityMatrix(Dims dims, CMatrix entries, double tol)
    : dims_(dims), entries_(std::move(entries)) {
  check_dims(dims_);
  const int d = dims_.total();
  if (entries_.rows() != d || entries_.cols() != d) {
    throw InvalidInput("density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
    if (!all_finite(entries_.col(c))) throw InvalidInput("density matrix entries must be finite");
  }
  const double herm_err = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol) {
    throw InvalidInput("density matrix is not Hermitian (max deviation " + std::to_string(herm_err) + ")");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw InvalidInput("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw InvalidInput("density matrix has negative eigenvalue " +
                       std::to_string(es.eigenvalues().minCoeff()));
  }
}

CMatrix SpectralDecomposition::reconstruct() const {
  const int d = dims.total();
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < eigenvalues.size(); ++a) {
    const CVector& v = eigenvectors[a].amplitudes();
    out.noalias() += eigenvalues[a] * (v * v.adjoint());
  }
  return out;
}

PartyPermutation::PartyPermutation(std::array<int, 3> map) : map_(map) {
  std::array<int, 3> sorted = map;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2}) throw InvalidInput("party permutation must be a bijection of {0,1,2}");
}

std::vector<PartyPermutation> PartyPermutation::all() {
  std::array<int, 3> m{0, 1, 2};
  std::vector<PartyPermutation> out;
  do {
    out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

PartyPermutation PartyPermutation::then(const PartyPermutation& second) const {
  return PartyPermutation({map_[second[0]], map_[second[1]], map_[second[2]]});
}

PureState make_pure_state(Dims dims, std::span<const Complex> amplitudes) {
  check_dims(dims);
  if (static_cast<int>(amplitudes.size()) != dims.total()) {
    throw InvalidInput("expected " + std::to_string(dims.total()) + " amplitudes, got " +
                       std::to_string(amplitudes.size()));
  }
  CVector a(dims.total());
  std::copy(amplitudes.begin(), amplitudes.end(), a.data());
  return PureState(dims, std::move(a));
}

PureState named_state(NamedState kind, int d) {
  switch (kind) {
    case NamedState::ghz2:
      return named_state(NamedState::ghz, 2);
    case NamedState::ghz: {
      if (d < 2) throw InvalidInput("GHZ(d) requires d >= 2");
      const Dims dims{{d, d, d}};
      CVector a = CVector::Zero(dims.total());
      for (int i = 0; i < d; ++i) a[dims.index(i, i, i)] = 1.0 / std::sqrt(static_cast<double>(d));
      return PureState(dims, std::move(a));
    }
    case NamedState::w:
    case NamedState::w_tilde: {
      const Dims dims{{2, 2, 2}};
      const int b = kind == NamedState::w ? 1 : 0;
      CVector a = CVector::Zero(8);
      const double c = 1.0 / std::sqrt(3.0);
      a[dims.index(1 - b, 1 - b, b)] = c;
      a[dims.index(1 - b, b, 1 - b)] = c;
      a[dims.index(b, 1 - b, 1 - b)] = c;
      return PureState(dims, std::move(a));
    }
  }
  throw InvalidInput("unknown named state");
}

PureState product_state(const CVector& v1, const CVector& v2, const CVector& v3) {
  const Dims dims{{static_cast<int>(v1.size()), static_cast<int>(v2.size()), static_cast<int>(v3.size())}};
  check_dims(dims);
  CVector a(dims.total());
  for (int i = 0; i < dims[0]; ++i)
    for (int j = 0; j < dims[1]; ++j)
      for (int k = 0; k < dims[2]; ++k) a[dims.index(i, j, k)] = v1[i] * v2[j] * v3[k];
  return PureState(dims, std::move(a));
}

PureState permute_parties(const PureState& s, const PartyPermutation& p) {
  const Dims& old_dims = s.dims();
  const Dims new_dims{{old_dims[p[0]], old_dims[p[1]], old_dims[p[2]]}};
  CVector a(new_dims.total());
  std::array<int, 3> idx{};
  for (idx[0] = 0; idx[0] < old_dims[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < old_dims[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < old_dims[2]; ++idx[2])
        a[new_dims.index(idx[p[0]], idx[p[1]], idx[p[2]])] = s(idx[0], idx[1], idx[2]);
  return PureState(new_dims, std::move(a));
}

DensityMatrix pure_density(const PureState& s) {
  const CVector& v = s.amplitudes();
  return DensityMatrix(s.dims(), v * v.adjoint());
}

DensityMatrix ghz_w_mixture(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("mixing weight x must lie in [0, 1]");
  const CVector g = named_state(NamedState::ghz2).amplitudes();
  const CVector w = named_state(NamedState::w).amplitudes();
  const CVector wt = named_state(NamedState::w_tilde).amplitudes();
  CMatrix rho = x * (g * g.adjoint()) + 0.5 * (1.0 - x) * (w * w.adjoint() + wt * wt.adjoint());
  return DensityMatrix(Dims{{2, 2, 2}}, std::move(rho));
}

DensityMatrix white_noise_mixture(const PureState& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("mixing weight p must lie in [0, 1]");
  if (std::abs(s.norm_squared() - 1.0) > 1e-8) throw InvalidInput("white-noise mixture needs a normalized state");
  const int d = s.dims().total();
  const CVector& v = s.amplitudes();
  CMatrix rho = p * (v * v.adjoint()) + ((1.0 - p) / d) * CMatrix::Identity(d, d);
  return DensityMatrix(s.dims(), std::move(rho));
}

SpectralDecomposition spectral_decompose(const DensityMatrix& rho, double cutoff) {
  const CMatrix& m = rho.matrix();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-8) throw InvalidInput("spectral_decompose needs a Hermitian matrix");
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) throw InvalidInput("eigendecomposition did not converge");
  const RVector& vals = es.eigenvalues();
  if (vals.minCoeff() < -1e-8) throw InvalidInput("density matrix has a negative eigenvalue");

  SpectralDecomposition out{rho.dims(), {}, {}};
  const Eigen::Index d = vals.size();
  const double top = vals[d - 1];
  for (Eigen::Index a = d - 1; a >= 0; --a) {
    if (!(vals[a] > cutoff * top)) break;
    CVector v = es.eigenvectors().col(a);
    const double vmax = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(v[pivot]) < vmax * (1.0 - 1e-9)) ++pivot;
    v *= std::conj(v[pivot]) / std::abs(v[pivot]);
    v[pivot] = std::abs(v[pivot]);
    out.eigenvalues.push_back(vals[a]);
    out.eigenvectors.emplace_back(rho.dims(), std::move(v));
  }
  return out;
}

}  // namespace tricrit
