#include "tricrit/cube_tangle.hpp"

#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

namespace tricrit {

namespace {

struct TwoTerm {
  double hi = 0.0, lo = 0.0;
  void add_product(double x, double y) {
    const double p = x * y;
    const double pe = std::fma(x, y, -p);
    const double s = hi + p;
    const double bp = s - hi;
    lo += (hi - (s - bp)) + (p - bp) + pe;
    hi = s;
  }
  double value() const { return hi + lo; }
};

/// Sum of complex products x_i * y_i in doubled precision.
Complex accurate_sum(std::initializer_list<std::pair<Complex, Complex>> terms) {
  TwoTerm re, im;
  for (const auto& [x, y] : terms) {
    re.add_product(x.real(), y.real());
    re.add_product(-x.imag(), y.imag());
    im.add_product(x.real(), y.imag());
    im.add_product(x.imag(), y.real());
  }
  return {re.value(), im.value()};
}

void check_index(const Dims& dims, const CubeIndex& c) {
  for (int p = 0; p < 3; ++p) {
    const LevelPair& lp = c.pairs[p];
    if (lp.lo < 0 || lp.lo >= lp.hi || lp.hi >= dims[p]) {
      throw InvalidInput("level pair (" + std::to_string(lp.lo) + "," + std::to_string(lp.hi) +
                         ") invalid for party " + std::to_string(p) + " of dimension " +
                         std::to_string(dims[p]));
    }
  }
}

std::vector<LevelPair> level_pairs(int n) {
  std::vector<LevelPair> out;
  for (int lo = 0; lo < n; ++lo)
    for (int hi = lo + 1; hi < n; ++hi) out.push_back({lo, hi});
  return out;
}

double sum_to_big_f(double sum_f) { return std::pow(std::max(sum_f, 0.0), 0.25); }

}  // namespace

SubCube SubCube::scaled(Complex s) const {
  SubCube out = *this;
  for (Complex& z : out.c) z *= s;
  return out;
}

Eigen::MatrixXd SelectionMatrix::matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, n);
  m(0, levels.lo) = 1.0;
  m(1, levels.hi) = 1.0;
  return m;
}

std::vector<SelectionMatrix> selection_matrices(int n) {
  if (n < 2) throw InvalidInput("selection matrices need n >= 2");
  std::vector<SelectionMatrix> out;
  for (const LevelPair& lp : level_pairs(n)) out.push_back({n, lp});
  return out;
}

std::vector<CubeIndex> cube_indices(const Dims& dims) {
  const auto a = level_pairs(dims[0]);
  const auto b = level_pairs(dims[1]);
  const auto c = level_pairs(dims[2]);
  std::vector<CubeIndex> out;
  out.reserve(a.size() * b.size() * c.size());
  for (const auto& pa : a)
    for (const auto& pb : b)
      for (const auto& pc : c) out.push_back({{pa, pb, pc}});
  return out;
}

SubCube extract_cube(const PureState& s, const CubeIndex& c) {
  check_index(s.dims(), c);
  SubCube out;
  for (int a = 0; a < 2; ++a) {
    const int i = a ? c.pairs[0].hi : c.pairs[0].lo;
    for (int b = 0; b < 2; ++b) {
      const int j = b ? c.pairs[1].hi : c.pairs[1].lo;
      for (int k = 0; k < 2; ++k) out(a, b, k) = s(i, j, k ? c.pairs[2].hi : c.pairs[2].lo);
    }
  }
  return out;
}

SubCube extract_cube_by_selection(const PureState& s, const CubeIndex& c) {
  check_index(s.dims(), c);
  const Eigen::MatrixXd sa = SelectionMatrix{s.dims()[0], c.pairs[0]}.matrix();
  const Eigen::MatrixXd sb = SelectionMatrix{s.dims()[1], c.pairs[1]}.matrix();
  const Eigen::MatrixXd sc = SelectionMatrix{s.dims()[2], c.pairs[2]}.matrix();
  const Eigen::MatrixXd sel = Eigen::kroneckerProduct(sa, Eigen::kroneckerProduct(sb, sc).eval()).eval();
  const CVector v = sel.cast<Complex>() * s.amplitudes();
  SubCube out;
  for (int q = 0; q < 8; ++q) out.c[q] = v[q];
  return out;
}

CubeInvariants cube_invariants(const SubCube& c, Normalization norm) {
  const auto a = [&](int i, int j, int k) { return c(i, j, k); };
  CubeInvariants out;
  out.d1 = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) + a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
           a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) + a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
  out.d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0) + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0) +
           a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1) + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0) +
           a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1) + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
  out.d3 = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
  // |d1 - 2 d2 + 4 d3| as the discriminant of det(x A0 + y A1), with
  // error-free products.
  const Complex det0 = accurate_sum({{a(0, 0, 0), a(1, 1, 0)}, {-a(0, 1, 0), a(1, 0, 0)}});
  const Complex det1 = accurate_sum({{a(0, 0, 1), a(1, 1, 1)}, {-a(0, 1, 1), a(1, 0, 1)}});
  const Complex mixed = accurate_sum({{a(0, 0, 0), a(1, 1, 1)},
                                      {a(0, 0, 1), a(1, 1, 0)},
                                      {-a(0, 1, 0), a(1, 0, 1)},
                                      {-a(0, 1, 1), a(1, 0, 0)}});
  out.tau = std::abs(accurate_sum({{mixed, mixed}, {-4.0 * det0, det1}}));
  if (norm == Normalization::ckw) out.tau *= 4.0;
  out.f = out.tau * out.tau;
  return out;
}

Complex pair_bilinear(const SubCube& ca, const SubCube& cb, int t, int i) {
  return ca(0, 0, t) * cb(1, 1, i) + ca(1, 1, t) * cb(0, 0, i) - ca(0, 1, t) * cb(1, 0, i) -
         ca(1, 0, t) * cb(0, 1, i);
}

Eigen::Matrix2cd r_matrix(const SubCube& c) {
  Eigen::Matrix2cd g;
  for (int t = 0; t < 2; ++t)
    for (int r = 0; r < 2; ++r) g(t, r) = pair_bilinear(c, c, t, r);
  Eigen::Matrix2cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = g(j, 0) * std::conj(g(i, 0)) + g(j, 1) * std::conj(g(i, 1));
  return out;
}

std::vector<CubeContribution> cube_report(const PureState& s, Normalization norm) {
  std::vector<CubeContribution> out;
  for (const CubeIndex& idx : cube_indices(s.dims())) out.push_back({idx, cube_invariants(extract_cube(s, idx), norm)});
  return out;
}

double big_f(const PureState& s, Normalization norm) {
  double sum = 0.0;
  for (const CubeIndex& idx : cube_indices(s.dims())) sum += cube_invariants(extract_cube(s, idx), norm).f;
  return sum_to_big_f(sum);
}

double big_f_by_selection(const PureState& s, Normalization norm) {
  double sum = 0.0;
  for (const CubeIndex& idx : cube_indices(s.dims()))
    sum += cube_invariants(extract_cube_by_selection(s, idx), norm).f;
  return sum_to_big_f(sum);
}

}  // namespace tricrit
