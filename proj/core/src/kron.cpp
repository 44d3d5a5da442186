#include "tricrit/kron.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace tricrit::kron {

namespace {

void check_shape(const CMatrix& m, const BlockDims& b) {
  if (b.p1 < 1 || b.q1 < 1 || b.p2 < 1 || b.q2 < 1) throw InvalidInput("block dimensions must be positive");
  if (m.rows() != b.rows() || m.cols() != b.cols()) {
    throw InvalidInput("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", block shape needs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void check_equal_factors(const BlockDims& b) {
  if (b.p1 != b.p2 || b.q1 != b.q2) throw InvalidInput("both Kronecker factors must have the same shape");
}

double relative_gap(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace

CVector vec(const CMatrix& m) { return m.reshaped(); }

CMatrix unvec(const CVector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw InvalidInput("unvec: length does not match shape");
  return v.reshaped(rows, cols);
}

CMatrix rearrange(const CMatrix& m, const BlockDims& b) {
  check_shape(m, b);
  CMatrix r(b.p1 * b.q1, b.p2 * b.q2);
  for (int i1 = 0; i1 < b.p1; ++i1)
    for (int j1 = 0; j1 < b.q1; ++j1)
      for (int i2 = 0; i2 < b.p2; ++i2)
        for (int j2 = 0; j2 < b.q2; ++j2) r(i1 + b.p1 * j1, i2 + b.p2 * j2) = m(i1 * b.p2 + i2, j1 * b.q2 + j2);
  return r;
}

CMatrix unrearrange(const CMatrix& r, const BlockDims& b) {
  if (r.rows() != b.p1 * b.q1 || r.cols() != b.p2 * b.q2) throw InvalidInput("unrearrange: shape mismatch");
  CMatrix m(b.rows(), b.cols());
  for (int i1 = 0; i1 < b.p1; ++i1)
    for (int j1 = 0; j1 < b.q1; ++j1)
      for (int i2 = 0; i2 < b.p2; ++i2)
        for (int j2 = 0; j2 < b.q2; ++j2) m(i1 * b.p2 + i2, j1 * b.q2 + j2) = r(i1 + b.p1 * j1, i2 + b.p2 * j2);
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

KronTerms kp_decompose(const CMatrix& m, const BlockDims& b) {
  const CMatrix r = rearrange(m, b);
  KronTerms out;
  if (r.size() == 0) return out;
  const Eigen::BDCSVD<CMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s[i] > kTermCutoff * s[0])) break;
    const double root = std::sqrt(s[i]);
    out.push_back({unvec(root * svd.matrixU().col(i), b.p1, b.q1),
                   unvec(root * svd.matrixV().col(i).conjugate(), b.p2, b.q2), s[i]});
  }
  return out;
}

CMatrix reconstruct(const KronTerms& terms) {
  if (terms.empty()) return {};
  CMatrix m = CMatrix::Zero(terms[0].x.rows() * terms[0].y.rows(), terms[0].x.cols() * terms[0].y.cols());
  for (const KronTerm& t : terms) m += kron(t.x, t.y);
  return m;
}

Takagi takagi(const CMatrix& r) {
  if (r.rows() != r.cols()) throw InvalidInput("Takagi factorization needs a square matrix");
  const Eigen::BDCSVD<CMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();
  const Eigen::Index n = s.size();
  CMatrix w(n, n);
  const double top = n > 0 ? s[0] : 0.0;
  const double degenerate_tol = 1e-9 * std::max(top, 1e-300);

  // R = U S V^H = conj(V) S U^T, so within each block of equal singular
  // values U_b = conj(V_b) Z with Z = V_b^T U_b symmetric unitary.
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && s[end - 1] - s[end] <= degenerate_tol) ++end;
    const Eigen::Index k = end - start;
    const CMatrix vb = v.middleCols(start, k);
    if (!(s[start] > kTermCutoff * top)) {
      // Null space: any orthonormal basis works.
      w.middleCols(start, k) = vb.conjugate();
    } else {
      CMatrix z = vb.transpose() * u.middleCols(start, k);
      z = 0.5 * (z + z.transpose()).eval();
      // Re Z and Im Z are commuting real symmetric matrices; a generic real
      // combination shares their eigenbasis.
      const Eigen::MatrixXd mix = z.real() + std::sqrt(2.0) * z.imag();
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mix);
      const Eigen::MatrixXd& o = es.eigenvectors();
      const CMatrix oc = o.cast<Complex>();
      const CMatrix dz = oc.transpose() * z * oc;
      CVector half(k);
      for (Eigen::Index q = 0; q < k; ++q) half[q] = std::polar(1.0, 0.5 * std::arg(dz(q, q)));
      w.middleCols(start, k) = vb.conjugate() * oc * half.asDiagonal();
    }
    start = end;
  }
  return {s, w};
}

std::vector<SymmetricTerm> symmetric_kp_decompose(const CMatrix& m, const BlockDims& b) {
  check_shape(m, b);
  check_equal_factors(b);
  const CMatrix r = rearrange(m, b);
  if (relative_gap(r, r.transpose()) > kStructureTol) {
    throw SymmetryViolation("rearranged matrix is not complex symmetric");
  }
  const Takagi t = takagi(r);
  std::vector<SymmetricTerm> out;
  if (t.sigma.size() == 0 || t.sigma[0] == 0.0) return out;
  for (Eigen::Index i = 0; i < t.sigma.size(); ++i) {
    if (!(t.sigma[i] > kTermCutoff * t.sigma[0])) break;
    out.push_back({unvec(std::sqrt(t.sigma[i]) * t.w.col(i), b.p1, b.q1), t.sigma[i]});
  }
  return out;
}

std::vector<SignedSymmetricTerm> signed_symmetric_kp_decompose(const CMatrix& m, const BlockDims& b,
                                                               const std::vector<int>& involution) {
  check_shape(m, b);
  check_equal_factors(b);
  const CMatrix r = rearrange(m, b);
  const Eigen::Index n = r.rows();
  if (static_cast<Eigen::Index>(involution.size()) != n) throw InvalidInput("involution has the wrong length");
  for (Eigen::Index k = 0; k < n; ++k) {
    const int pk = involution[k];
    if (pk < 0 || pk >= n || involution[pk] != k) throw InvalidInput("map is not a permutation involution");
  }
  if (relative_gap(r, r.transpose()) > kStructureTol) {
    throw SymmetryViolation("rearranged matrix is not complex symmetric");
  }
  CMatrix prp(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) prp(i, j) = r(involution[i], involution[j]);
  if (relative_gap(prp, r.conjugate()) > kStructureTol) {
    throw SymmetryViolation("rearranged matrix is not mapped to its conjugate by the involution");
  }

  // T = O D: O the real eigenbasis of P, D = 1 on its +1 and i on its -1
  // eigenspace. T^H R conj(T) is then real symmetric.
  CMatrix t = CMatrix::Zero(n, n);
  Eigen::Index col = 0;
  const double h = 1.0 / std::sqrt(2.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int pk = involution[k];
    if (pk == k) {
      t(k, col++) = 1.0;
    } else if (k < pk) {
      t(k, col) = h;
      t(pk, col++) = h;
      t(k, col) = Complex(0.0, h);
      t(pk, col++) = Complex(0.0, -h);
    }
  }
  const CMatrix nc = t.adjoint() * r * t.conjugate();
  const Eigen::MatrixXd nr = 0.5 * (nc.real() + nc.real().transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nr);
  const RVector& mu = es.eigenvalues();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index c) { return std::abs(mu[a]) > std::abs(mu[c]); });

  std::vector<SignedSymmetricTerm> out;
  if (n == 0) return out;
  const double top = std::abs(mu[order[0]]);
  if (top == 0.0) return out;
  for (Eigen::Index idx : order) {
    const double s = std::abs(mu[idx]);
    if (!(s > kTermCutoff * top)) break;
    const CVector w = t * es.eigenvectors().col(idx).cast<Complex>();
    out.push_back({unvec(std::sqrt(s) * w, b.p1, b.q1), s, mu[idx] < 0 ? -1 : 1});
  }
  return out;
}

std::vector<ConjugateTerm> conjugate_kp_decompose(const CMatrix& m, const BlockDims& b) {
  check_shape(m, b);
  check_equal_factors(b);
  const CMatrix r = rearrange(m, b);
  if (relative_gap(r, r.adjoint()) > kStructureTol) {
    throw SymmetryViolation("rearranged matrix is not Hermitian");
  }
  const CMatrix h = 0.5 * (r + r.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& mu = es.eigenvalues();
  const Eigen::Index n = mu.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index c) { return std::abs(mu[a]) > std::abs(mu[c]); });

  std::vector<ConjugateTerm> out;
  if (n == 0) return out;
  const double top = std::abs(mu[order[0]]);
  if (top == 0.0) return out;
  for (Eigen::Index idx : order) {
    const double s = std::abs(mu[idx]);
    if (!(s > kTermCutoff * top)) break;
    out.push_back({unvec(std::sqrt(s) * es.eigenvectors().col(idx), b.p1, b.q1), s, mu[idx] < 0 ? -1 : 1});
  }
  return out;
}

}  // namespace tricrit::kron
