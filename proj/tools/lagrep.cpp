// Command-line front end: one subcommand per library operation, JSON in and
// out, CSV for scans. Exit codes: 0 success, 1 domain failure, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lagrep/io.hpp"

namespace {

using lagrep::io::json;

struct Config {
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  int restarts = 50;
  int max_iters = 2000;
  double resolution = 0.05;
  std::optional<double> margin;
  std::string format = "json";
  int n = 2;
  int index_value = 3;
  std::size_t max_solver_points = 200;
  std::size_t samples = 0;
};

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kInputError = 2;

json read_input(const Config& c) {
  if (c.input.empty()) throw lagrep::InputError("--input is required");
  std::ifstream in(c.input, std::ios::binary);
  if (!in) throw lagrep::InputError("cannot open " + c.input);
  std::stringstream ss;
  ss << in.rdbuf();
  return lagrep::io::parse(ss.str());
}

void write_text(const Config& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw lagrep::InputError("cannot write " + c.output);
  out << text;
}

// The artifact goes to --output (summary on stdout) or, without --output,
// the summary and artifact are printed together.
void emit(const Config& c, json summary, const json& artifact, const char* key) {
  if (c.output.empty()) {
    summary[key] = artifact;
    std::cout << lagrep::io::canonical(summary);
  } else {
    write_text(c, lagrep::io::canonical(artifact));
    std::cout << lagrep::io::canonical(summary);
  }
}

lagrep::Seed seed_of(const Config& c) {
  if (c.seed) return {*c.seed};
  if (const char* env = std::getenv("LAGREP_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return {v};
    } catch (const std::exception&) {
    }
    throw lagrep::InputError("LAGREP_SEED is not an unsigned integer");
  }
  return {0};
}

lagrep::SolveOptions solve_options(const Config& c) {
  lagrep::SolveOptions o;
  o.restarts = c.restarts;
  o.max_iters = c.max_iters;
  if (c.tol) o.tol_residual = *c.tol;
  o.seed = seed_of(c);
  return o;
}

int run_spec(const Config& c) {
  const auto u = lagrep::io::decode_unitary(read_input(c));
  const auto s = lagrep::spectrum(u);
  write_text(c, lagrep::io::canonical({{"alpha", s.alpha}, {"clusters", lagrep::cluster_sizes(s)}}));
  return kOk;
}

int run_split(const Config& c) {
  const auto u = lagrep::io::decode_unitary(read_input(c));
  auto [l1, l2] = lagrep::tau2_split(u);
  write_text(c, lagrep::io::canonical(lagrep::io::encode(lagrep::LagrangianTuple({l1, l2}))));
  return kOk;
}

int run_maslov(const Config& c) {
  const auto lambda = lagrep::io::decode_lagrangian_tuple(read_input(c));
  const auto r = lagrep::check_index_identities(lambda);
  json out = lagrep::io::encode(r);
  if (lambda.size() == 3) {
    const auto d = lagrep::triple_invariants(lambda[0], lambda[1], lambda[2]);
    out["invariants"] = lagrep::io::encode(d);
    out["identities"]["admissible"] = lagrep::classify_valid(d, static_cast<int>(lambda.dim()));
  }
  write_text(c, lagrep::io::canonical(out));
  return r.all() ? kOk : kDomainFailure;
}

int run_walls(const Config& c) {
  const auto a = lagrep::io::decode_spectrum_tuple(read_input(c));
  const auto f = lagrep::feasible(a);
  write_text(c, lagrep::io::canonical(lagrep::io::encode(f)));
  return f.feasible ? kOk : kDomainFailure;
}

int run_realize(const Config& c) {
  const auto a = lagrep::io::decode_spectrum_tuple(read_input(c));
  const auto o = lagrep::realize_unitary(a, solve_options(c));
  emit(c, lagrep::io::encode_summary(o), o.witness ? lagrep::io::encode(*o.witness) : json(), "witness");
  return o.success ? kOk : kDomainFailure;
}

int run_realize_lagrangian(const Config& c) {
  const auto a = lagrep::io::decode_spectrum_tuple(read_input(c));
  const auto o = lagrep::realize_lagrangian(a, solve_options(c));
  emit(c, lagrep::io::encode_summary(o), o.witness ? lagrep::io::encode(*o.witness) : json(), "witness");
  return o.success ? kOk : kDomainFailure;
}

// {"sol_ell": tuple, "sol_3": tuple}
int run_compose(const Config& c) {
  const json in = read_input(c);
  const auto a = lagrep::io::decode_lagrangian_tuple(lagrep::io::detail::field(in, "", "sol_ell"), {}, "/sol_ell");
  const auto b = lagrep::io::decode_lagrangian_tuple(lagrep::io::detail::field(in, "", "sol_3"), {}, "/sol_3");
  const auto glued = lagrep::compose_triple(a, b);
  const auto spectra = lagrep::spectral_projection(lagrep::phi_tilde(glued));
  emit(c, {{"spectra", lagrep::io::encode(spectra)}}, lagrep::io::encode(glued), "tuple");
  return kOk;
}

int run_scan(const Config& c) {
  if (c.format != "json" && c.format != "csv") throw lagrep::InputError("--format must be json or csv");
  lagrep::ScanOptions so;
  so.resolution = c.resolution;
  so.margin = c.margin;
  so.max_solver_points = c.max_solver_points;
  so.sample_points = c.samples;
  so.seed = seed_of(c);
  const auto r = lagrep::chamber_scan(c.n, c.index_value, so, solve_options(c));
  const json summary = lagrep::io::encode_summary(r);
  if (c.format == "csv") {
    std::ostringstream csv;
    lagrep::io::write_scan_csv(csv, r);
    if (c.output.empty()) {
      std::cout << csv.str();
    } else {
      write_text(c, csv.str());
      std::cout << lagrep::io::canonical(summary);
    }
  } else {
    write_text(c, lagrep::io::canonical(summary));
  }
  return kOk;
}

// {"lambda": tuple, "twist": [[re, im], ...]} or
// {"lambda": tuple, "bend": {"s": int, "r": int, "a": [[...], ...]}} (s 0-based)
int run_deform(const Config& c) {
  namespace d = lagrep::io::detail;
  const json in = read_input(c);
  const auto lambda = lagrep::io::decode_lagrangian_tuple(d::field(in, "", "lambda"), {}, "/lambda");
  lagrep::LagrangianTuple out;
  if (in.contains("twist")) {
    const json& ph = d::array(in["twist"], "/twist");
    std::vector<lagrep::cplx> phases;
    for (std::size_t s = 0; s < ph.size(); ++s)
      phases.push_back(lagrep::io::decode_complex(ph[s], d::at("/twist", s)));
    out = lagrep::twist(lambda, phases);
  } else if (in.contains("bend")) {
    const json& b = in["bend"];
    const auto s = d::integer(d::field(b, "/bend", "s"), "/bend/s");
    const auto r = d::integer(d::field(b, "/bend", "r"), "/bend/r");
    if (s < 0) throw lagrep::io::DecodeError("/bend/s", "expected a non-negative integer");
    if (r < 1) throw lagrep::io::DecodeError("/bend/r", "expected a positive integer");
    const json& rows = d::array(d::field(b, "/bend", "a"), "/bend/a");
    const auto n = lambda.dim();
    if (static_cast<lagrep::Index>(rows.size()) != n)
      throw lagrep::io::DecodeError("/bend/a", "expected " + std::to_string(n) + " rows");
    lagrep::RMatrix a(n, n);
    for (lagrep::Index i = 0; i < n; ++i) {
      const auto rp = d::at("/bend/a", static_cast<std::size_t>(i));
      const json& row = d::array(rows[static_cast<std::size_t>(i)], rp);
      if (static_cast<lagrep::Index>(row.size()) != n)
        throw lagrep::io::DecodeError(rp, "expected " + std::to_string(n) + " columns");
      for (lagrep::Index k = 0; k < n; ++k)
        a(i, k) = d::number(row[static_cast<std::size_t>(k)], d::at(rp, static_cast<std::size_t>(k)));
    }
    out = lagrep::bend(lambda, static_cast<std::size_t>(s), static_cast<std::size_t>(r), a);
  } else {
    throw lagrep::io::DecodeError("", "expected a \"twist\" or \"bend\" field");
  }
  write_text(c, lagrep::io::canonical(lagrep::io::encode(out)));
  return kOk;
}

int run_isotropy(const Config& c) {
  const auto lambda = lagrep::io::decode_lagrangian_tuple(read_input(c));
  const auto r = lagrep::isotropy_defect(lambda);
  const double threshold = c.tol.value_or(1e-8);
  json out = lagrep::io::encode(r);
  out["isotropic"] = r.defect < threshold;
  write_text(c, lagrep::io::canonical(out));
  return r.defect < threshold ? kOk : kDomainFailure;
}

int run_symmetrize(const Config& c) {
  const auto lambda = lagrep::io::decode_lagrangian_tuple(read_input(c));
  const auto cs = lagrep::pairwise_symmetrizers(lambda);
  json mats = json::array();
  for (const auto& m : cs) mats.push_back(lagrep::io::encode(m.matrix()));
  emit(c, {{"defect", lagrep::symmetrizer_defect(lambda, cs)}}, mats, "conjugators");
  return kOk;
}

int run_dims(const Config& c) {
  const auto a = lagrep::io::decode_spectrum_tuple(read_input(c));
  const auto m = lagrep::multiplicity_structure(a);
  const auto d = lagrep::expected_dimensions(static_cast<int>(a.n()), static_cast<int>(a.ell()), m);
  write_text(c, lagrep::io::canonical({{"structure", lagrep::io::encode(m)},
                                       {"dimensions", lagrep::io::encode(d)}}));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian involutions and unitary representations of punctured-sphere groups"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--input,-i", c.input, "Input JSON file");
  app.add_option("--output,-o", c.output, "Output file (stdout if omitted)");
  app.add_option("--seed", c.seed, "Random seed (falls back to LAGREP_SEED, then 0)");
  app.add_option("--tol", c.tol, "Residual tolerance (solvers) or isotropy threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--restarts", c.restarts, "Solver restarts")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", c.max_iters, "Iterations per restart")->check(CLI::PositiveNumber);
  app.add_option("--resolution", c.resolution, "Scan grid spacing (1/N)")->check(CLI::PositiveNumber);
  app.add_option("--margin", c.margin, "Minimal wall distance for solver runs (default 2 x resolution)");
  app.add_option("--format", c.format, "Scan output format: json or csv");
  app.add_option("--n", c.n, "Scan rank (2 or 3)");
  app.add_option("--index", c.index_value, "Scan index plane");
  app.add_option("--max-solver-points", c.max_solver_points, "Scan solver budget in points");
  app.add_option("--samples", c.samples, "Random grid sample size (0 for the full grid)");

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Entry entries[] = {
      {"spec", "Spectrum of a unitary matrix", run_spec},
      {"split", "Split a unitary as the product of two Lagrangian involutions", run_split},
      {"maslov", "Inertia index and index identities of a Lagrangian tuple", run_maslov},
      {"walls", "U(2)/U(3) feasibility of a spectrum tuple", run_walls},
      {"realize", "Realize a spectrum tuple by a unitary representation", run_realize},
      {"realize-lagrangian", "Realize a spectrum tuple by a Lagrangian tuple", run_realize_lagrangian},
      {"compose", "Glue an l-tuple and a triple into an (l+1)-tuple", run_compose},
      {"scan", "Chamber scan of an index plane for l = 3", run_scan},
      {"deform", "Twist or bend a Lagrangian tuple", run_deform},
      {"isotropy", "Two-form on fixed-class deformations", run_isotropy},
      {"symmetrize", "Pairwise symmetrizing conjugators", run_symmetrize},
      {"dims", "Multiplicity structure and expected dimensions", run_dims},
  };
  for (const auto& e : entries) app.add_subcommand(e.name, e.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  try {
    for (const auto& e : entries)
      if (app.got_subcommand(e.name)) return e.run(c);
  } catch (const lagrep::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kInputError;
}
