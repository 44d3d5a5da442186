#include "tricrit/mixed_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "tricrit/kron.hpp"

namespace tricrit {

namespace {

constexpr std::array<std::array<int, 4>, 4> kPatterns{{{0, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}}};
constexpr std::array<double, 4> kPatternSigns{1.0, 1.0, -1.0, -1.0};

CMatrix q_block(const std::array<std::array<CMatrix, 2>, 2>& g, int t, int tp, int r) {
  CMatrix q(r * r, r * r);
  for (int l = 0; l < r; ++l)
    for (int m = 0; m < r; ++m)
      for (int lp = 0; lp < r; ++lp)
        for (int mp = 0; mp < r; ++mp)
          q(l * r + m, lp * r + mp) = g[t][0](l, lp) * std::conj(g[tp][0](m, mp)) +
                                      g[t][1](l, lp) * std::conj(g[tp][1](m, mp));
  return q;
}

double relative_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct GapTerm {
  int j = 0;
  CMatrix c;
  double weight = 0.0;
};

/// lambda gap from the eigenvalues of M^H M. Loses accuracy in the smallest
/// singular values (~sqrt(eps) relative), which is fine for steering the
/// search; reported values go through lambda_gap.
double fast_gap(const CMatrix& m) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const Eigen::Index n = ev.size();
  double rest = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) rest += std::sqrt(std::max(ev[i], 0.0));
  return std::max(std::sqrt(std::max(ev[n - 1], 0.0)) - rest, 0.0);
}

/// Golden-section maximization of a scalar function on [a, b].
template <typename F>
std::pair<double, double> golden_max(F&& fn, double a, double b, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Maximizes lambda_gap(sum_t a_t C_t) with a_t = x_{j(t)} y_t e^{i psi_t},
/// sum_j x_j^4 = 1 (x fixed to 1 without z) and sum_t y_t^2 = 1.
class GapSearch {
 public:
  GapSearch(const std::vector<GapTerm>& terms, int num_j, bool with_z)
      : terms_(terms), num_j_(num_j), with_z_(with_z), dim_(terms.front().c.rows()) {}

  double run(const BoundParams& p) const {
    double best = refine(aligned_start(), p.refine_steps);
    // Single-term vertices; the heaviest one is refined as well.
    std::size_t heaviest = 0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const Point v = vertex(t);
      best = std::max(best, evaluate(v));
      if (terms_[t].weight > terms_[heaviest].weight) heaviest = t;
    }
    best = std::max(best, refine(vertex(heaviest), p.refine_steps));
    for (int rs = 0; rs < p.restarts; ++rs) {
      std::mt19937_64 rng(splitmix64(p.seed ^ splitmix64(static_cast<std::uint64_t>(rs) + 1)));
      best = std::max(best, refine(random_start(rng), p.refine_steps));
    }
    return best;
  }

 private:
  static constexpr int kGoldenIterations = 20;

  struct Point {
    std::vector<double> x;    // per j
    std::vector<double> y;    // per term
    std::vector<double> psi;  // per term
  };

  Point aligned_start() const {
    Point pt;
    pt.x.assign(num_j_, with_z_ ? std::pow(1.0 / num_j_, 0.25) : 1.0);
    pt.y.resize(terms_.size());
    double n2 = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      pt.y[t] = terms_[t].weight;
      n2 += pt.y[t] * pt.y[t];
    }
    for (double& v : pt.y) v /= std::sqrt(n2);
    pt.psi.assign(terms_.size(), 0.0);
    return pt;
  }

  Point vertex(std::size_t t) const {
    Point pt;
    pt.x.assign(num_j_, with_z_ ? 0.0 : 1.0);
    pt.x[terms_[t].j] = 1.0;
    pt.y.assign(terms_.size(), 0.0);
    pt.y[t] = 1.0;
    pt.psi.assign(terms_.size(), 0.0);
    return pt;
  }

  Point random_start(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    Point pt;
    pt.x.assign(num_j_, 1.0);
    if (with_z_) {
      // Uniform point of the simplex mapped onto sum x^4 = 1.
      double s = 0.0;
      for (double& v : pt.x) s += (v = expo(rng));
      for (double& v : pt.x) v = std::pow(v / s, 0.25);
    }
    pt.y.resize(terms_.size());
    double n2 = 0.0;
    for (double& v : pt.y) {
      v = std::abs(normal(rng));
      n2 += v * v;
    }
    for (double& v : pt.y) v /= std::sqrt(n2);
    pt.psi.resize(terms_.size());
    for (double& v : pt.psi) v = phase(rng);
    return pt;
  }

  CMatrix assemble(const Point& pt) const {
    CMatrix m = CMatrix::Zero(dim_, dim_);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      m += std::polar(pt.x[terms_[t].j] * pt.y[t], pt.psi[t]) * terms_[t].c;
    }
    return m;
  }

  double evaluate(const Point& pt) const { return lambda_gap(assemble(pt)); }

  // Rotates y within the unit sphere: y_t -> cos(theta), the rest rescaled
  // to sin(theta). Returns false when there is nothing to rotate into.
  static bool rotate_l2(std::vector<double>& y, std::size_t t, double theta) {
    double rest = 0.0;
    for (std::size_t s = 0; s < y.size(); ++s)
      if (s != t) rest += y[s] * y[s];
    if (rest <= 0.0) {
      if (y.size() == 1) return false;
      // Spread evenly over the other coordinates.
      for (std::size_t s = 0; s < y.size(); ++s) y[s] = s == t ? 0.0 : 1.0;
      rest = static_cast<double>(y.size() - 1);
    }
    const double scale = std::sin(theta) / std::sqrt(rest);
    for (std::size_t s = 0; s < y.size(); ++s) y[s] = s == t ? std::cos(theta) : y[s] * scale;
    return true;
  }

  // Same on the l4 sphere: x_j^4 -> cos^2(theta), the rest to sin^2(theta).
  static bool rotate_l4(std::vector<double>& x, std::size_t j, double theta) {
    double rest = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s)
      if (s != j) rest += std::pow(x[s], 4);
    if (rest <= 0.0) {
      if (x.size() == 1) return false;
      for (std::size_t s = 0; s < x.size(); ++s) x[s] = s == j ? 0.0 : 1.0;
      rest = static_cast<double>(x.size() - 1);
    }
    const double scale = std::pow(std::sin(theta) * std::sin(theta) / rest, 0.25);
    for (std::size_t s = 0; s < x.size(); ++s) {
      x[s] = s == j ? std::sqrt(std::abs(std::cos(theta))) : x[s] * scale;
    }
    return true;
  }

  // Cyclic coordinate ascent. Each step visits one term: its phase over a
  // full period, its l2 magnitude, and (with z) the l4 magnitude of its
  // group; a move is kept only if it improves the gap. Every trial matrix is
  // a two-piece linear combination, so a trial costs one small SVD.
  double refine(Point pt, int steps) const {
    CMatrix m = assemble(pt);
    double current = fast_gap(m);
    const std::size_t n = terms_.size();
    for (int s = 0; s < steps; ++s) {
      const std::size_t t = static_cast<std::size_t>(s) % n;
      const CMatrix& ct = terms_[t].c;
      const std::size_t j = static_cast<std::size_t>(terms_[t].j);

      {
        const double amp = pt.x[j] * pt.y[t];
        const CMatrix base = m - std::polar(amp, pt.psi[t]) * ct;
        const auto [psi, f] = golden_max([&](double v) { return fast_gap(base + std::polar(amp, v) * ct); },
                                         pt.psi[t] - std::numbers::pi, pt.psi[t] + std::numbers::pi,
                                         kGoldenIterations);
        if (f > current) {
          pt.psi[t] = psi;
          m = base + std::polar(amp, psi) * ct;
          current = f;
        }
      }

      if (n > 1) {
        double rest = 0.0;
        for (std::size_t q = 0; q < n; ++q)
          if (q != t) rest += pt.y[q] * pt.y[q];
        if (rest > 0.0) {
          const CMatrix own = std::polar(pt.x[j], pt.psi[t]) * ct;
          const CMatrix others = (m - pt.y[t] * own) / std::sqrt(rest);
          const auto [theta, f] = golden_max(
              [&](double v) { return fast_gap(std::cos(v) * own + std::sin(v) * others); }, 0.0,
              std::numbers::pi / 2, kGoldenIterations);
          if (f > current) {
            rotate_l2(pt.y, t, theta);
            m = std::cos(theta) * own + std::sin(theta) * others;
            current = f;
          }
        } else {
          const auto [theta, f] = golden_max(
              [&](double v) {
                Point trial = pt;
                rotate_l2(trial.y, t, v);
                return fast_gap(assemble(trial));
              },
              0.0, std::numbers::pi / 2, kGoldenIterations);
          if (f > current) {
            rotate_l2(pt.y, t, theta);
            m = assemble(pt);
            current = f;
          }
        }
      }

      if (with_z_ && num_j_ > 1) {
        double rest = 0.0;
        for (std::size_t q = 0; q < pt.x.size(); ++q)
          if (q != j) rest += std::pow(pt.x[q], 4);
        CMatrix group = CMatrix::Zero(dim_, dim_);
        for (std::size_t q = 0; q < n; ++q)
          if (static_cast<std::size_t>(terms_[q].j) == j) group += std::polar(pt.y[q], pt.psi[q]) * terms_[q].c;
        if (rest > 0.0) {
          const CMatrix others = m - pt.x[j] * group;
          const auto trial = [&](double v) {
            const double sn = std::sin(v);
            return std::sqrt(std::abs(std::cos(v))) * group + std::pow(sn * sn / rest, 0.25) * others;
          };
          const auto [theta, f] = golden_max([&](double v) { return fast_gap(trial(v)); }, 0.0,
                                             std::numbers::pi / 2, kGoldenIterations);
          if (f > current) {
            m = trial(theta);
            rotate_l4(pt.x, j, theta);
            current = f;
          }
        } else {
          const auto [theta, f] = golden_max(
              [&](double v) {
                Point trial = pt;
                rotate_l4(trial.x, j, v);
                return fast_gap(assemble(trial));
              },
              0.0, std::numbers::pi / 2, kGoldenIterations);
          if (f > current) {
            rotate_l4(pt.x, j, theta);
            m = assemble(pt);
            current = f;
          }
        }
      }
    }
    return evaluate(pt);
  }

  const std::vector<GapTerm>& terms_;
  int num_j_;
  bool with_z_;
  Eigen::Index dim_;
};

}  // namespace

WeightedPairTables weighted_pair_tables(const SpectralDecomposition& sd) {
  const int r = sd.rank();
  std::vector<PureState> weighted;
  weighted.reserve(r);
  for (int a = 0; a < r; ++a) weighted.push_back(sd.eigenvectors[a].scaled(std::sqrt(sd.eigenvalues[a])));

  WeightedPairTables out;
  out.rank = r;
  for (const CubeIndex& idx : cube_indices(sd.dims)) {
    std::vector<SubCube> cubes;
    cubes.reserve(r);
    for (const PureState& w : weighted) cubes.push_back(extract_cube(w, idx));
    std::array<std::array<CMatrix, 2>, 2> g;
    for (int t = 0; t < 2; ++t)
      for (int i = 0; i < 2; ++i) {
        g[t][i].resize(r, r);
        for (int l = 0; l < r; ++l)
          for (int lp = 0; lp < r; ++lp) g[t][i](l, lp) = pair_bilinear(cubes[l], cubes[lp], t, i);
      }
    out.per_cube.push_back(std::move(g));
  }
  return out;
}

Complex a_entry(const WeightedPairTables& tables, const std::array<int, 4>& row, const std::array<int, 4>& col) {
  for (int s = 0; s < 4; ++s) {
    if (row[s] < 0 || row[s] >= tables.rank || col[s] < 0 || col[s] >= tables.rank) {
      throw InvalidInput("A-tensor index out of range");
    }
  }
  const auto q = [](const std::array<std::array<CMatrix, 2>, 2>& g, int t, int tp, int l, int m, int lp, int mp) {
    return g[t][0](l, lp) * std::conj(g[tp][0](m, mp)) + g[t][1](l, lp) * std::conj(g[tp][1](m, mp));
  };
  Complex sum = 0.0;
  for (const auto& g : tables.per_cube) {
    for (std::size_t p = 0; p < kPatterns.size(); ++p) {
      const auto& pat = kPatterns[p];
      sum += kPatternSigns[p] * q(g, pat[0], pat[1], row[0], row[1], col[0], col[1]) *
             q(g, pat[2], pat[3], row[2], row[3], col[2], col[3]);
    }
  }
  return 0.5 * sum;
}

ATensor a_tensor(const SpectralDecomposition& sd, int rank_limit) {
  const int r = sd.rank();
  if (r > rank_limit) {
    throw RankLimitExceeded("rank " + std::to_string(r) + " exceeds the A-tensor limit of " +
                            std::to_string(rank_limit) + "; use the quasi-pure approximation");
  }
  const WeightedPairTables tables = weighted_pair_tables(sd);
  const int n = r * r * r * r;
  ATensor out{r, CMatrix::Zero(n, n)};
  for (const auto& g : tables.per_cube) {
    const CMatrix q00 = q_block(g, 0, 0, r);
    const CMatrix q11 = q_block(g, 1, 1, r);
    const CMatrix q01 = q_block(g, 0, 1, r);
    const CMatrix q10 = q_block(g, 1, 0, r);
    out.entries += 0.5 * (kron::kron(q00, q11) + kron::kron(q11, q00) - kron::kron(q01, q10) - kron::kron(q10, q01));
  }
  return out;
}

double block_swap_asymmetry(const ATensor& a) {
  const int r = a.rank;
  const int r2 = r * r;
  CMatrix swapped(a.entries.rows(), a.entries.cols());
  for (int p = 0; p < r2; ++p)
    for (int q = 0; q < r2; ++q)
      for (int pp = 0; pp < r2; ++pp)
        for (int qp = 0; qp < r2; ++qp) swapped(p * r2 + q, pp * r2 + qp) = a.entries(q * r2 + p, qp * r2 + pp);
  return relative_diff(a.entries, swapped);
}

double conjugation_asymmetry(const ATensor& a) {
  const int r = a.rank;
  const int n = static_cast<int>(a.entries.rows());
  std::vector<int> perm(n);
  for (int l = 0; l < r; ++l)
    for (int m = 0; m < r; ++m)
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) perm[ATensor::flat(r, {l, m, j, k})] = ATensor::flat(r, {m, l, k, j});
  CMatrix mapped(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) mapped(i, c) = a.entries(perm[i], perm[c]);
  return relative_diff(mapped, a.entries.conjugate());
}

std::size_t CChain::c_count() const {
  std::size_t n = 0;
  for (const BTerm& b : b_terms) n += b.c_terms.size();
  return n;
}

CChain c_chain(const ATensor& a) {
  const int r = a.rank;
  const int r2 = r * r;
  CChain out;
  out.rank = r;
  if (r == 0 || a.entries.norm() == 0.0) return out;

  // Vec index of a B entry ((l,m),(l',m')) and its image under l<->m, l'<->m'.
  std::vector<int> involution(static_cast<std::size_t>(r2 * r2));
  for (int l = 0; l < r; ++l)
    for (int m = 0; m < r; ++m)
      for (int lp = 0; lp < r; ++lp)
        for (int mp = 0; mp < r; ++mp)
          involution[(l * r + m) + r2 * (lp * r + mp)] = (m * r + l) + r2 * (mp * r + lp);

  const auto b_split = kron::signed_symmetric_kp_decompose(a.entries, kron::BlockDims::square(r2, r2), involution);
  int negative_b = 0;
  int negative_c = 0;
  for (const auto& bt : b_split) {
    BTerm term{bt.b, bt.sigma, bt.sign, {}};
    if (bt.sign < 0) ++negative_b;
    const auto c_split = kron::conjugate_kp_decompose(bt.b, kron::BlockDims::square(r, r));
    const double top = c_split.empty() ? 0.0 : c_split.front().sigma;
    for (const auto& ct : c_split) {
      if (ct.sign < 0 && ct.sigma > 1e-8 * top) ++negative_c;
      term.c_terms.push_back({ct.c, ct.sigma, ct.sign});
    }
    out.b_terms.push_back(std::move(term));
  }
  if (negative_b > 0) {
    out.warnings.push_back(std::to_string(negative_b) + " of " + std::to_string(b_split.size()) +
                           " B-level terms carry negative weight");
  }
  if (negative_c > 0) {
    out.warnings.push_back(std::to_string(negative_c) + " C-level terms carry negative weight");
  }
  return out;
}

CMatrix reconstruct(const BTerm& b) {
  CMatrix m = CMatrix::Zero(b.b.rows(), b.b.cols());
  for (const CTerm& c : b.c_terms) m += static_cast<double>(c.sign) * kron::kron(c.c, c.c.conjugate());
  return m;
}

CMatrix reconstruct(const CChain& chain) {
  const int n = chain.rank * chain.rank * chain.rank * chain.rank;
  CMatrix m = CMatrix::Zero(n, n);
  for (const BTerm& b : chain.b_terms) m += static_cast<double>(b.sign) * kron::kron(b.b, b.b);
  return m;
}

double lambda_gap(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector& s = svd.singularValues();
  return std::max(s[0] - (s.sum() - s[0]), 0.0);
}

const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::zz:
      return "zz";
    case BoundMethod::uniform:
      return "uniform";
    case BoundMethod::dominant:
      return "dominant";
  }
  return "unknown";
}

BoundResult lower_bound(const CChain& chain, const BoundParams& params) {
  if (params.restarts < 1) throw InvalidInput("restarts must be at least 1");
  if (params.refine_steps < 0) throw InvalidInput("refine steps must be nonnegative");
  BoundResult out{params.method, 0.0, chain.warnings};
  if (chain.empty() || chain.c_count() == 0) return out;

  std::vector<GapTerm> terms;
  int asymmetric = 0;
  for (std::size_t j = 0; j < chain.b_terms.size(); ++j) {
    const BTerm& b = chain.b_terms[j];
    for (const CTerm& c : b.c_terms) {
      CMatrix cm = c.c;
      if ((cm - cm.transpose()).norm() > 1e-8 * cm.norm()) {
        ++asymmetric;
        cm = 0.5 * (cm + cm.transpose()).eval();
      }
      terms.push_back({static_cast<int>(j), std::move(cm), std::sqrt(b.sigma) * std::sqrt(c.sigma)});
    }
  }
  if (asymmetric > 0) {
    out.warnings.push_back(std::to_string(asymmetric) + " C matrices were not complex symmetric and were symmetrized");
  }

  const int num_j = static_cast<int>(chain.b_terms.size());
  switch (params.method) {
    case BoundMethod::dominant: {
      const auto top = std::max_element(terms.begin(), terms.end(),
                                        [](const GapTerm& a, const GapTerm& b) { return a.weight < b.weight; });
      out.value = lambda_gap(top->c);
      break;
    }
    case BoundMethod::zz:
      out.value = GapSearch(terms, num_j, true).run(params);
      break;
    case BoundMethod::uniform:
      out.value = std::pow(1.0 / num_j, 0.25) * GapSearch(terms, num_j, false).run(params);
      break;
  }
  return out;
}

}  // namespace tricrit
