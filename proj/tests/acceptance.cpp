// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "test_support.hpp"
#include "tricrit/cube_tangle.hpp"
#include "tricrit/kron.hpp"
#include "tricrit/mixed_bounds.hpp"
#include "tricrit/quasi_pure.hpp"
#include "tricrit/state.hpp"
#include "tricrit/state_io.hpp"

namespace {

using namespace tricrit;
using testing::random_density;
using testing::random_matrix;
using testing::random_state;

/// Collects failed checks of one criterion with a short reason each.
struct Check {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.17g, want %.17g (tol %.1e)", what.c_str(), got, want, tol);
      failures.push_back(buf);
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 = none
  std::function<void(Check&)> body;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void closed_forms(Check& c) {
  SubCube ghz;
  ghz(0, 0, 0) = ghz(1, 1, 1) = 1.0 / std::sqrt(2.0);
  const CubeInvariants inv = cube_invariants(ghz);
  c.near(inv.tau, 0.25, 1e-10, "tau(GHZ2 cube)");
  c.near(inv.f, 0.0625, 1e-10, "f(GHZ2 cube)");
  c.near(big_f(named_state(NamedState::ghz2)), 0.5, 1e-10, "F(GHZ2)");
  c.near(cube_invariants(ghz, Normalization::ckw).tau, 1.0, 1e-10, "tau(GHZ2 cube), ckw");
  std::ostringstream out, err;
  const auto dir = std::filesystem::temp_directory_path() / "tricrit_acceptance_1";
  std::filesystem::create_directories(dir);
  const std::string file = (dir / "ghz2.json").string();
  io::write_file(file, io::to_json(named_state(NamedState::ghz2)));
  c.expect(cli::run({"tangle", file, "--ckw"}, out, err) == cli::kOk, "tangle --ckw exit code");
  const auto doc = nlohmann::json::parse(out.str());
  c.near(doc["cubes"][0]["tau"].get<double>(), 1.0, 1e-10, "tangle --ckw cube tau");
  std::filesystem::remove_all(dir);

  c.near(big_f(named_state(NamedState::w)), 0.0, 1e-10, "F(W)");
  c.near(big_f(named_state(NamedState::w_tilde)), 0.0, 1e-10, "F(W~)");
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const PureState s = product_state(testing::random_vector(rng, 3), testing::random_vector(rng, 3),
                                      testing::random_vector(rng, 3))
                            .normalized();
    worst = std::max(worst, big_f(s));
  }
  c.near(worst, 0.0, 1e-10, "max F over 20 product states in (3,3,3)");
  const double g3 = big_f(named_state(NamedState::ghz, 3));
  c.near(g3, std::pow(3.0, -0.75), 1e-9, "F(GHZ(3))");
  c.detail = "F(GHZ(3)) = " + fmt("%.13f", g3) + ", max F(product) = " + fmt("%.1e", worst);
}

void oracle_equivalence(Check& c) {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (const Dims d : {Dims{{2, 2, 3}}, Dims{{3, 3, 3}}, Dims{{2, 3, 4}}})
    for (int t = 0; t < 50; ++t) {
      const PureState s = random_state(rng, d);
      worst = std::max(worst, std::abs(big_f(s) - big_f_by_selection(s)));
    }
  c.expect(worst < 1e-12, "max |dF| = " + fmt("%.3e", worst));
  c.detail = "max |dF| = " + fmt("%.2e", worst);
}

void permutation_invariance(Check& c) {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (const Dims d : {Dims{{2, 2, 2}}, Dims{{2, 2, 3}}, Dims{{3, 3, 3}}, Dims{{2, 3, 4}}})
    for (int t = 0; t < 50; ++t) {
      const PureState s = random_state(rng, d);
      const double f = big_f(s);
      for (const auto& p : PartyPermutation::all()) worst = std::max(worst, std::abs(big_f(permute_parties(s, p)) - f));
    }
  c.expect(worst < 1e-10, "max |dF| = " + fmt("%.3e", worst));
  c.detail = "max |dF| = " + fmt("%.2e", worst);
}

void cross_formula(Check& c) {
  std::mt19937_64 rng(1004);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    SubCube cube;
    for (auto& z : cube.c) z = Complex(normal(rng), normal(rng));
    const CubeInvariants inv = cube_invariants(cube);
    const double direct = std::norm(inv.d1 - 2.0 * inv.d2 + 4.0 * inv.d3);
    const double det = r_matrix(cube).determinant().real();
    worst = std::max(worst, std::abs(det - direct) / std::max(1.0, direct));
  }
  c.expect(worst <= 1e-12, "max |det R - f| = " + fmt("%.3e", worst));
  c.detail = "max |det R - f| = " + fmt("%.2e", worst);
}

void kronecker_suite(Check& c) {
  using kron::BlockDims;
  using kron::conjugate_kp_decompose;
  using kron::KronTerms;
  using kron::kp_decompose;
  using kron::rearrange;
  using kron::reconstruct;
  using kron::symmetric_kp_decompose;
  using kron::unvec;
  std::mt19937_64 rng(1005);
  double round_trip = 0.0, isometry = 0.0, eckart = 0.0;
  const std::vector<BlockDims> shapes{BlockDims::square(2, 2), BlockDims::square(2, 3), BlockDims::square(3, 3)};
  for (int t = 0; t < 100; ++t) {
    const BlockDims& b = shapes[t % 3];
    const CMatrix m = random_matrix(rng, b.rows(), b.cols());
    isometry = std::max(isometry, std::abs(rearrange(m, b).norm() - m.norm()) / m.norm());
    const KronTerms terms = kp_decompose(m, b);
    round_trip = std::max(round_trip, (m - reconstruct(terms)).norm() / m.norm());
    CMatrix partial = CMatrix::Zero(m.rows(), m.cols());
    for (std::size_t k = 0; k <= terms.size(); ++k) {
      double tail = 0.0;
      for (std::size_t i = k; i < terms.size(); ++i) tail += terms[i].sigma * terms[i].sigma;
      eckart = std::max(eckart, std::abs((m - partial).squaredNorm() - tail) / m.squaredNorm());
      if (k < terms.size()) partial += kron::kron(terms[k].x, terms[k].y);
    }
  }
  c.expect(round_trip <= 1e-10, "round trip " + fmt("%.2e", round_trip));
  c.expect(isometry <= 1e-12, "rearrange isometry " + fmt("%.2e", isometry));
  c.expect(eckart <= 1e-10, "truncation optimality " + fmt("%.2e", eckart));

  double sym = 0.0;
  bool sym_throws = false;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    CMatrix m = CMatrix::Zero(n * n, n * n);
    for (int i = 0; i < 3; ++i) {
      const CMatrix b = random_matrix(rng, n, n);
      m += kron::kron(b, b);
    }
    CMatrix sum = CMatrix::Zero(m.rows(), m.cols());
    for (const auto& term : symmetric_kp_decompose(m, BlockDims::square(n, n))) sum += kron::kron(term.b, term.b);
    sym = std::max(sym, (sum - m).norm() / m.norm());
  }
  try {
    symmetric_kp_decompose(kron::kron(random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)), BlockDims::square(2, 2));
  } catch (const SymmetryViolation&) {
    sym_throws = true;
  }
  c.expect(sym <= 1e-8, "symmetric round trip " + fmt("%.2e", sym));
  c.expect(sym_throws, "asymmetric rearrangement is rejected");

  const CMatrix c1 = random_matrix(rng, 2, 2);
  const auto one = conjugate_kp_decompose(kron::kron(c1, c1.conjugate()), BlockDims::square(2, 2));
  c.expect(one.size() == 1 && one[0].sign == 1, "C (x) C* gives one positive term");
  const auto neg = conjugate_kp_decompose(-kron::kron(c1, c1.conjugate()), BlockDims::square(2, 2));
  c.expect(neg.size() == 1 && neg[0].sign == -1, "-C (x) C* gives one negative term");
  const Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, 9, 2));
  const CMatrix q = CMatrix(qr.householderQ()).leftCols(2);
  const CMatrix a1 = unvec(q.col(0), 3, 3), a2 = unvec(q.col(1), 3, 3);
  const CMatrix m2 = 2.0 * kron::kron(a1, a1.conjugate()) + kron::kron(a2, a2.conjugate());
  const auto two = conjugate_kp_decompose(m2, BlockDims::square(3, 3));
  c.expect(two.size() == 2, "2 C1 (x) C1* + C2 (x) C2* gives two terms");
  if (two.size() == 2) {
    c.near(two[0].sigma, 2.0, 1e-10, "leading conjugate weight");
    c.near(two[1].sigma, 1.0, 1e-10, "second conjugate weight");
  }
  c.detail = "round trip " + fmt("%.1e", round_trip) + ", Eckart-Young " + fmt("%.1e", eckart) + ", symmetric " +
             fmt("%.1e", sym);
}

void mixed_pinning(Check& c) {
  std::mt19937_64 rng(1006);
  double rank1 = 0.0, over = -1.0;
  BoundParams p;
  p.restarts = 64;
  p.refine_steps = 32;
  for (int t = 0; t < 20; ++t) {
    const PureState s = random_state(rng, t % 2 ? Dims{{2, 2, 3}} : Dims{{2, 2, 2}});
    const double f = big_f(s);
    const ATensor a = a_tensor(spectral_decompose(pure_density(s)));
    rank1 = std::max(rank1, std::abs(a.entries(0, 0) - std::pow(f, 4)) / std::pow(f, 4));
    const CChain chain = c_chain(a);
    for (auto m : {BoundMethod::zz, BoundMethod::uniform, BoundMethod::dominant}) {
      p.method = m;
      const double v = lower_bound(chain, p).value;
      c.expect(v >= 0.0, std::string("negative ") + to_string(m) + " bound");
      over = std::max(over, v - f);
    }
  }
  c.expect(rank1 <= 1e-10, "rank-1 A vs F^4: " + fmt("%.2e", rank1));
  c.expect(over <= 1e-8, "bound exceeds F by " + fmt("%.2e", over));

  p.method = BoundMethod::dominant;
  const CChain ghz = c_chain(a_tensor(spectral_decompose(pure_density(named_state(NamedState::ghz2)))));
  c.near(lower_bound(ghz, p).value, 0.5, 1e-8, "DOMINANT bound on GHZ2");

  double asym = 0.0;
  for (int rank = 1; rank <= 4; ++rank)
    for (int t = 0; t < 3; ++t) {
      const ATensor a = a_tensor(spectral_decompose(random_density(rng, Dims{{2, 2, 2}}, rank)));
      asym = std::max({asym, block_swap_asymmetry(a), conjugation_asymmetry(a)});
    }
  c.expect(asym <= 1e-8, "A-tensor symmetry deviation " + fmt("%.2e", asym));
  c.detail = "rank-1 rel err " + fmt("%.1e", rank1) + ", max bound - F " + fmt("%.1e", over) + ", symmetry " +
             fmt("%.1e", asym);
}

void quasi_pure_consistency(Check& c) {
  std::mt19937_64 rng(1007);
  double worst = 0.0;
  int used = 0;
  for (int t = 0; t < 30; ++t) {
    const PureState s = random_state(rng, t % 2 ? Dims{{2, 2, 3}} : Dims{{2, 2, 2}});
    const double f = big_f(s);
    if (f <= 1e-6) continue;
    const QuasiPureResult r = f_a(pure_density(s));
    c.expect(r.conclusive(), "pure state reported inconclusive");
    if (r.conclusive()) worst = std::max(worst, std::abs(*r.f_a - f));
    ++used;
  }
  c.expect(used == 30, "fewer than 30 usable random states");
  c.expect(worst < 1e-8, "max |F_a - F| = " + fmt("%.2e", worst));
  const QuasiPureResult x1 = f_a(ghz_w_mixture(1.0));
  c.expect(x1.conclusive(), "rho(1) inconclusive");
  if (x1.conclusive()) c.near(*x1.f_a, 0.5, 1e-8, "F_a(rho(1))");
  c.detail = "max |F_a - F| = " + fmt("%.1e", worst);
}

std::vector<std::pair<double, double>> read_curve(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return rows;
}

void sweep_reproduction(Check& c) {
  const auto rows = cli::sweep_ghzw(0.35, 1.0, 66);
  c.expect(rows.size() == 66, "expected 66 points");
  std::vector<double> values;
  bool all_conclusive = true;
  for (const auto& r : rows) {
    all_conclusive = all_conclusive && r.f_a.has_value();
    values.push_back(r.f_a.value_or(-1.0));
  }
  c.expect(all_conclusive, "inconclusive point on the curve");
  for (double v : values) c.expect(v >= 0.0, "negative F_a on the curve");
  c.expect(testing::is_continuous(values), "curve has a jump");
  c.near(values.back(), 0.5, 1e-8, "F_a(x = 1)");
  c.expect(values.size() > 60 && values[60] > 0.0 && std::abs(rows[60].x - 0.95) < 1e-12, "F_a(x = 0.95) > 0");

  const auto frozen = read_curve(std::string(TRICRIT_TEST_DATA_DIR) + "/ghzw_curve.csv");
  c.expect(frozen.size() == rows.size(), "frozen curve has " + std::to_string(frozen.size()) + " rows");
  double drift = 0.0;
  for (std::size_t i = 0; i < std::min(frozen.size(), rows.size()); ++i) {
    c.near(frozen[i].first, rows[i].x, 5e-7, "frozen x grid");
    drift = std::max(drift, std::abs(frozen[i].second - values[i]));
  }
  c.expect(drift <= 1e-8, "drift from frozen curve " + fmt("%.2e", drift));
  c.expect(cli::format_sweep_csv(rows) == io::read_file(std::string(TRICRIT_TEST_DATA_DIR) + "/ghzw_curve.csv"),
           "CSV differs from the frozen file");
  c.detail = "F_a(0.95) = " + fmt("%.9f", values.size() > 60 ? values[60] : -1.0) + ", max drift " +
             fmt("%.1e", drift);
}

void higher_dimension(Check& c) {
  const QuasiPureResult r = f_a(white_noise_mixture(named_state(NamedState::ghz, 3), 0.99));
  c.expect(r.conclusive(), "inconclusive");
  if (!r.conclusive()) return;
  c.expect(*r.f_a > 0.0, "F_a not positive");
  c.near(*r.f_a, 0.43284211981548654, 1e-10, "frozen F_a");
  c.detail = "F_a = " + fmt("%.15f", *r.f_a) + ", rank " + std::to_string(r.rank);
}

void determinism(Check& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tricrit_acceptance_10";
  fs::create_directories(dir);
  auto p = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> commands{
      {"gen", "--kind", "ghz2", "-o", p("ghz2.json")},
      {"gen", "--kind", "w", "-o", p("w.json")},
      {"gen", "--kind", "wtilde", "-o", p("wt.json")},
      {"gen", "--kind", "ghz", "--d", "3", "-o", p("ghz3.json")},
      {"gen", "--kind", "product", "--d", "3", "--seed", "42", "-o", p("prod.json")},
      {"gen", "--kind", "ghzw-mixture", "--x", "0.8", "-o", p("mix.json")},
      {"gen", "--kind", "noise-mixture", "--d", "3", "--p", "0.99", "-o", p("noise.json")},
      {"normalize", p("prod.json"), "-o", p("prod_n.json")},
      {"tangle", p("ghz3.json")},
      {"tangle", p("prod.json"), "--ckw"},
      {"quasipure", p("mix.json")},
      {"quasipure", p("noise.json")},
      {"bounds", p("mix.json"), "--seed", "7"},
      {"sweep-ghzw", "--from", "0.35", "--to", "1", "--steps", "66", "-o", p("curve.csv")},
  };
  int compared = 0;
  for (const auto& cmd : commands) {
    const bool writes = cmd[0] == "gen" || cmd[0] == "normalize" || cmd[0] == "sweep-ghzw";
    std::string outputs[2], files[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      std::ostringstream out, err;
      codes[run] = cli::run(cmd, out, err);
      outputs[run] = out.str() + "\x1f" + err.str();
      if (writes) files[run] = io::read_file(cmd.back());
    }
    const std::string name = cmd[0] + " " + cmd[1];
    c.expect(codes[0] == cli::kOk && codes[1] == cli::kOk, name + ": exit code");
    c.expect(outputs[0] == outputs[1], name + ": output differs");
    c.expect(files[0] == files[1], name + ": written file differs");
    ++compared;
  }
  fs::remove_all(dir);
  c.detail = std::to_string(compared) + " commands run twice";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form values", 1.0, closed_forms},
      {2, "selection/slicing oracle equivalence", 10.0, oracle_equivalence},
      {3, "party permutation invariance", 10.0, permutation_invariance},
      {4, "det R = |d1 - 2 d2 + 4 d3|^2", 1.0, cross_formula},
      {5, "Kronecker decomposition suite", 10.0, kronecker_suite},
      {6, "mixed-state pinning", 60.0, mixed_pinning},
      {7, "quasi-pure consistency", 0.0, quasi_pure_consistency},
      {8, "GHZ/W mixture curve", 30.0, sweep_reproduction},
      {9, "noisy GHZ(3) has nonzero F_a", 30.0, higher_dimension},
      {10, "CLI determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.time_limit > 0.0 && secs >= cr.time_limit)
      check.failures.push_back("runtime " + fmt("%.2f", secs) + " s exceeds " + fmt("%.0f", cr.time_limit) + " s");
    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s %2d %-40s %7.3f s  %s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs, check.detail.c_str());
    for (const auto& f : check.failures) std::printf("       - %s\n", f.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
