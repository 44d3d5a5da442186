#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tricrit/cube_tangle.hpp"
#include "tricrit/mixed_bounds.hpp"
#include "tricrit/quasi_pure.hpp"
#include "tricrit/state.hpp"
#include "tricrit/state_io.hpp"

namespace tricrit::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Parameter combination the parser accepts but the command rejects.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json dims_json(const Dims& d) { return Json::array({d[0], d[1], d[2]}); }

Json warnings_json(const Warnings& w) {
  Json arr = Json::array();
  for (const auto& s : w) arr.push_back(s);
  return arr;
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

DensityMatrix load_density(const std::string& path, Warnings& warnings) {
  const io::StateFile file = io::parse_state_file(io::read_file(path));
  if (const auto* pure = std::get_if<PureState>(&file)) {
    warnings.push_back("pure-state file promoted to its projector");
    return pure_density(*pure);
  }
  return std::get<DensityMatrix>(file);
}

// --- gen --------------------------------------------------------------------

struct GenOptions {
  std::string kind;
  int d = 0;
  double x = -1.0;
  double p = -1.0;
  std::uint64_t seed = 0;
  std::string output;
};

PureState random_product(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<CVector, 3> v;
  for (auto& vec : v) {
    vec.resize(d);
    for (int i = 0; i < d; ++i) vec[i] = Complex(normal(rng), normal(rng));
    vec.normalize();
  }
  return product_state(v[0], v[1], v[2]);
}

int run_gen(const GenOptions& o, std::ostream& out) {
  std::string contents;
  Dims dims;
  if (o.kind == "ghz2" || o.kind == "ghz" || o.kind == "w" || o.kind == "wtilde" || o.kind == "product") {
    PureState s = [&] {
      if (o.kind == "ghz2") return named_state(NamedState::ghz2);
      if (o.kind == "ghz") return named_state(NamedState::ghz, o.d > 0 ? o.d : 2);
      if (o.kind == "w") return named_state(NamedState::w);
      if (o.kind == "wtilde") return named_state(NamedState::w_tilde);
      return random_product(o.d > 0 ? o.d : 2, o.seed);
    }();
    dims = s.dims();
    contents = io::to_json(s);
  } else if (o.kind == "ghzw-mixture") {
    if (o.x < 0.0) throw UsageError("--kind ghzw-mixture requires --x");
    const DensityMatrix rho = ghz_w_mixture(o.x);
    dims = rho.dims();
    contents = io::to_json(rho);
  } else if (o.kind == "noise-mixture") {
    if (o.p < 0.0) throw UsageError("--kind noise-mixture requires --p");
    const DensityMatrix rho = white_noise_mixture(named_state(NamedState::ghz, o.d > 0 ? o.d : 2), o.p);
    dims = rho.dims();
    contents = io::to_json(rho);
  } else {
    throw UsageError("unknown --kind " + o.kind);
  }
  io::write_file(o.output, contents);
  Json doc;
  doc["command"] = "gen";
  doc["kind"] = o.kind;
  doc["dims"] = dims_json(dims);
  doc["file"] = o.output;
  emit(out, doc);
  return kOk;
}

// --- tangle / normalize -------------------------------------------------------

int run_tangle(const std::string& path, bool ckw, std::ostream& out) {
  const PureState s = io::parse_pure_state(io::read_file(path));
  const Normalization norm = ckw ? Normalization::ckw : Normalization::raw;
  Warnings warnings;
  if (std::abs(s.norm_squared() - 1.0) > 1e-8) {
    warnings.push_back("state is not normalized; F is reported for the amplitudes as given");
  }
  Json cubes = Json::array();
  double sum_f = 0.0;
  for (const CubeContribution& c : cube_report(s, norm)) {
    Json levels = Json::array();
    for (const LevelPair& lp : c.index.pairs) levels.push_back(Json::array({lp.lo, lp.hi}));
    Json item;
    item["levels"] = std::move(levels);
    item["tau"] = c.invariants.tau;
    item["f"] = c.invariants.f;
    cubes.push_back(std::move(item));
    sum_f += c.invariants.f;
  }
  Json doc;
  doc["command"] = "tangle";
  doc["quantity"] = "F";
  doc["value"] = big_f(s, norm);
  doc["normalization"] = ckw ? "ckw" : "raw";
  doc["dims"] = dims_json(s.dims());
  doc["norm_squared"] = s.norm_squared();
  doc["sum_f"] = sum_f;
  doc["cubes"] = std::move(cubes);
  doc["warnings"] = warnings_json(warnings);
  emit(out, doc);
  return kOk;
}

int run_normalize(const std::string& path, const std::string& output, std::ostream& out) {
  const PureState s = io::parse_pure_state(io::read_file(path));
  io::write_file(output, io::to_json(s.normalized()));
  Json doc;
  doc["command"] = "normalize";
  doc["dims"] = dims_json(s.dims());
  doc["input_norm_squared"] = s.norm_squared();
  doc["file"] = output;
  emit(out, doc);
  return kOk;
}

// --- quasipure ----------------------------------------------------------------

int run_quasipure(const std::string& path, std::ostream& out) {
  Warnings warnings;
  const DensityMatrix rho = load_density(path, warnings);
  const QuasiPureResult r = f_a(rho);
  warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
  Json doc;
  doc["command"] = "quasipure";
  doc["quantity"] = "F_a";
  if (r.conclusive()) {
    doc["value"] = *r.f_a;
  } else {
    doc["value"] = "inconclusive";
  }
  doc["dims"] = dims_json(rho.dims());
  doc["rank"] = r.rank;
  doc["dominant_eigenvalue"] = r.dominant_eigenvalue;
  doc["tau_asymmetry"] = r.tau_asymmetry;
  doc["warnings"] = warnings_json(warnings);
  emit(out, doc);
  return r.conclusive() ? kOk : kInconclusive;
}

// --- bounds -------------------------------------------------------------------

struct BoundsOptions {
  std::string path;
  std::string method = "all";
  int restarts = 512;
  int refine = 64;
  std::uint64_t seed = 0;
};

int run_bounds(const BoundsOptions& o, std::ostream& out) {
  std::vector<BoundMethod> methods;
  if (o.method == "all") {
    methods = {BoundMethod::zz, BoundMethod::uniform, BoundMethod::dominant};
  } else if (o.method == "zz") {
    methods = {BoundMethod::zz};
  } else if (o.method == "uniform") {
    methods = {BoundMethod::uniform};
  } else if (o.method == "dominant") {
    methods = {BoundMethod::dominant};
  } else {
    throw UsageError("unknown --method " + o.method);
  }
  if (o.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (o.refine < 0) throw UsageError("--refine must be nonnegative");

  Warnings warnings;
  const DensityMatrix rho = load_density(o.path, warnings);
  const SpectralDecomposition sd = spectral_decompose(rho);
  const CChain chain = c_chain(a_tensor(sd));

  Json bounds = Json::array();
  Warnings bound_warnings;
  for (BoundMethod m : methods) {
    const BoundResult r = lower_bound(chain, BoundParams{m, o.restarts, o.refine, o.seed});
    Json item;
    item["method"] = to_string(m);
    item["value"] = r.value;
    if (m != BoundMethod::dominant) {
      item["restarts"] = o.restarts;
      item["refine"] = o.refine;
      item["seed"] = o.seed;
    }
    bounds.push_back(std::move(item));
    for (const auto& w : r.warnings) {
      if (std::find(bound_warnings.begin(), bound_warnings.end(), w) == bound_warnings.end()) bound_warnings.push_back(w);
    }
  }
  warnings.insert(warnings.end(), bound_warnings.begin(), bound_warnings.end());

  Json doc;
  doc["command"] = "bounds";
  doc["dims"] = dims_json(rho.dims());
  doc["rank"] = sd.rank();
  doc["b_terms"] = chain.b_terms.size();
  doc["c_terms"] = chain.c_count();
  doc["bounds"] = std::move(bounds);
  doc["warnings"] = warnings_json(warnings);
  emit(out, doc);
  return kOk;
}

// --- sweep-ghzw ---------------------------------------------------------------

int run_sweep(double from, double to, int steps, const std::string& output, std::ostream& out) {
  const std::vector<SweepRow> rows = sweep_ghzw(from, to, steps);
  io::write_file(output, format_sweep_csv(rows));
  std::size_t inconclusive = 0;
  for (const SweepRow& r : rows) inconclusive += r.f_a ? 0 : 1;
  Json doc;
  doc["command"] = "sweep-ghzw";
  doc["file"] = output;
  doc["rows"] = rows.size();
  doc["inconclusive_rows"] = inconclusive;
  emit(out, doc);
  return inconclusive == 0 ? kOk : kInconclusive;
}

}  // namespace

std::vector<SweepRow> sweep_ghzw(double from, double to, int steps) {
  if (!(from > 1.0 / 3.0)) throw UsageError("--from must exceed 1/3 (quasi-pure regime of the mixture)");
  if (!(from <= to && to <= 1.0)) throw UsageError("need from <= to <= 1");
  if (steps < 1) throw UsageError("--steps must be at least 1");
  if (steps == 1 && from != to) throw UsageError("a single step needs --from equal to --to");
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double x = steps == 1 ? from : (k == steps - 1 ? to : from + (to - from) * k / (steps - 1));
    rows[k] = {x, f_a(ghz_w_mixture(x)).f_a};
  }
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string csv = "x,F_a\n";
  char buf[64];
  for (const SweepRow& r : rows) {
    if (r.f_a) {
      std::snprintf(buf, sizeof buf, "%.6f,%#.9g\n", r.x, *r.f_a);
    } else {
      std::snprintf(buf, sizeof buf, "%.6f,inconclusive\n", r.x);
    }
    csv += buf;
  }
  return csv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genuine tripartite entanglement criterion: sub-cube tangles, mixed-state bounds, quasi-pure approximation"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a named state, product state or mixture file");
  gen_cmd->add_option("--kind", gen.kind, "ghz2|ghz|w|wtilde|product|ghzw-mixture|noise-mixture")
      ->required()
      ->check(CLI::IsMember({"ghz2", "ghz", "w", "wtilde", "product", "ghzw-mixture", "noise-mixture"}));
  gen_cmd->add_option("--d", gen.d, "Local dimension for ghz, product and noise-mixture")->check(CLI::Range(2, 64));
  gen_cmd->add_option("--x", gen.x, "GHZ weight of the GHZ/W mixture")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--p", gen.p, "Pure-state weight of the white-noise mixture")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed, "Seed for --kind product");
  gen_cmd->add_option("-o", gen.output, "Output file")->required();

  std::string tangle_file;
  bool ckw = false;
  auto* tangle_cmd = app.add_subcommand("tangle", "Per-cube tangles and F of a pure-state file");
  tangle_cmd->add_option("FILE", tangle_file)->required();
  tangle_cmd->add_flag("--ckw", ckw, "Scale tau by 4 so that tau(GHZ) = 1");

  std::string norm_file, norm_out;
  auto* norm_cmd = app.add_subcommand("normalize", "Write a unit-norm copy of a pure-state file");
  norm_cmd->add_option("FILE", norm_file)->required();
  norm_cmd->add_option("-o", norm_out, "Output file")->required();

  std::string qp_file;
  auto* qp_cmd = app.add_subcommand("quasipure", "Quasi-pure approximation F_a of a density file");
  qp_cmd->add_option("FILE", qp_file)->required();

  BoundsOptions bo;
  auto* bounds_cmd = app.add_subcommand("bounds", "Lower bounds on F(rho) from the Kronecker chain");
  bounds_cmd->add_option("FILE", bo.path)->required();
  bounds_cmd->add_option("--method", bo.method, "zz|uniform|dominant|all")
      ->check(CLI::IsMember({"zz", "uniform", "dominant", "all"}));
  bounds_cmd->add_option("--restarts", bo.restarts, "Random restarts of the optimizer");
  bounds_cmd->add_option("--refine", bo.refine, "Coordinate refinement steps per restart");
  bounds_cmd->add_option("--seed", bo.seed, "Base seed");

  double from = 0.0, to = 0.0;
  int steps = 0;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep-ghzw", "F_a of the GHZ/W mixture on an x grid, as CSV");
  sweep_cmd->add_option("--from", from)->required();
  sweep_cmd->add_option("--to", to)->required();
  sweep_cmd->add_option("--steps", steps)->required();
  sweep_cmd->add_option("-o", sweep_out, "Output CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*gen_cmd) return run_gen(gen, out);
    if (*tangle_cmd) return run_tangle(tangle_file, ckw, out);
    if (*norm_cmd) return run_normalize(norm_file, norm_out, out);
    if (*qp_cmd) return run_quasipure(qp_file, out);
    if (*bounds_cmd) return run_bounds(bo, out);
    if (*sweep_cmd) return run_sweep(from, to, steps, sweep_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace tricrit::cli
