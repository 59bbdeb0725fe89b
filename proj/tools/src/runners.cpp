#include "specshift_cli/runners.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "specshift/specshift.hpp"

namespace specshift::cli {

namespace {

std::string extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

std::string render(const Table& t, Format f) { return f == Format::csv ? to_csv(t) : to_json_text(t); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

const ScalarFunction& function_of(const ExperimentConfig& cfg) {
  if (!cfg.function) throw ConfigError(to_string(cfg.command) + " needs \"function\"");
  return *cfg.function;
}

SearchOptions search_options(int threads) {
  SearchOptions o;
  o.threads = threads;
  return o;
}

// Matrix Horner scheme, independent of the spectral route.
ComplexMatrix matrix_horner(const std::vector<double>& ascending, const ComplexMatrix& a) {
  const auto n = a.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
    acc = acc * a;
    acc += *it * ComplexMatrix::Identity(n, n);
  }
  return acc;
}

struct VerifyRow {
  std::string property;
  std::string subject;
  std::int64_t dim;
  std::int64_t cases;
  double measured;
  double threshold;
};

}  // namespace

RunResult run_ratio_search(const ExperimentConfig& cfg, const std::string& report_stem, int threads) {
  const ScalarFunction& f = function_of(cfg);
  const FiniteSpectrumSet f0 = restrict_to_grid(cfg.grid.interval, cfg.grid.count);
  RunResult out;
  out.report.columns = {"dim", "norm_kind", "budget", "seed", "best_ratio", "witness_file"};
  for (int dim : cfg.dims) {
    for (NormKind kind : cfg.norm_kinds) {
      const SeminormLowerBound lb = seminorm_lower_bound(f, f0, dim, kind, cfg.budget, cfg.seed, search_options(threads));
      std::string witness_file;
      if (!report_stem.empty()) {
        witness_file = report_stem + ".dim" + std::to_string(dim) + "." + to_string(kind) + ".json";
        out.artifacts.push_back({witness_file, dump(to_json(lb, f.id()))});
      }
      out.report.add({std::int64_t{dim}, to_string(kind), std::int64_t{cfg.budget},
                      static_cast<std::int64_t>(cfg.seed), lb.value, witness_file});
    }
  }
  return out;
}

RunResult run_divergence(const ExperimentConfig& cfg, const std::string& report_stem, int threads) {
  const ScalarFunction& f = function_of(cfg);
  FamilyOptions options;
  options.block_dim = cfg.block_dim;
  options.initial_grid_points = cfg.initial_grid_points;
  options.max_grid_points = cfg.max_grid_points;
  options.search = search_options(threads);
  const std::vector<double> deltas = geometric_schedule(cfg.delta0, cfg.count);
  const DivergentFamily family = build_divergent_family(f, deltas, cfg.count, cfg.budget, cfg.seed, options);

  RunResult out;
  out.report.columns = {"n",            "delta",         "target_ratio",
                        "achieved_ratio", "multiplicity", "increment_s1",
                        "perturbation_partial_sum", "increment_partial_sum", "status"};
  for (std::size_t i = 0; i < family.blocks.size(); ++i) {
    const FamilyBlock& b = family.blocks[i];
    const PartialSums s = partial_sums(family, i + 1);
    out.report.add({std::int64_t{b.n}, b.delta, b.target_ratio, b.achieved_ratio, to_decimal(b.multiplicity),
                    b.increment_s1, s.perturbation_sum, s.increment_sum, std::string("ok")});
  }
  if (family.failure) {
    const FailedBlock& fb = *family.failure;
    const PartialSums s = partial_sums(family, family.blocks.size());
    out.report.add({std::int64_t{fb.n}, fb.delta, fb.target_ratio, fb.best_ratio, std::string("0"), 0.0,
                    s.perturbation_sum, s.increment_sum, std::string("failed")});
  }
  if (!report_stem.empty()) out.artifacts.push_back({report_stem + ".family.json", dump(to_json(family))});
  return out;
}

RunResult run_commuting(const ExperimentConfig& cfg, const std::string& report_stem, int /*threads*/) {
  const ScalarFunction& f = function_of(cfg);
  const ScalarWitnessSearch search = scalar_ratio_witnesses(f, cfg.count, cfg.search_grid, cfg.seed);

  RunResult out;
  out.report.columns = {"k", "t", "s", "n", "weighted_perturbation", "weighted_increment",
                        "bound_2_pow_1_minus_k", "ok"};
  SequenceWitness witness;
  witness.function_id = f.id();
  if (search.witness) {
    witness = multiplicity_sequence(f, *search.witness);
    const DivergenceReport rep = divergence_check(f, witness, static_cast<int>(witness.size()));
    for (const DivergenceRow& r : rep.rows) {
      out.report.add({std::int64_t{r.k}, r.t, r.s, to_decimal(r.n), r.weighted_perturbation, r.weighted_increment,
                      r.bound, r.ok});
    }
  }

  if (!report_stem.empty()) {
    Table levels;
    levels.columns = {"k", "found", "t", "s", "quotient"};
    for (const LevelSearch& l : search.levels) levels.add({std::int64_t{l.k}, l.found, l.t, l.s, l.quotient});
    out.artifacts.push_back({report_stem + ".witness.json", dump(to_json(witness))});
    out.artifacts.push_back({report_stem + ".levels" + extension(cfg.format), render(levels, cfg.format)});
  }
  return out;
}

RunResult run_verify(const ExperimentConfig& cfg, const std::string& /*report_stem*/, int /*threads*/) {
  const std::vector<int> dims = cfg.dims.empty() ? std::vector<int>{2, 3, 4, 5, 6, 7, 8} : cfg.dims;
  std::vector<VerifyRow> rows;
  Rng rng(cfg.seed);
  const auto random_op = [&](int d) { return random_hermitian(rng, d, -1.0, 1.0); };

  // Functional calculus against direct polynomial evaluation, normalized by (1 + ||A||)^3.
  const std::vector<std::pair<std::string, std::vector<double>>> polys = {
      {"x^2", {0, 0, 1}}, {"x^3", {0, 0, 0, 1}}, {"1-2x+3x^3", {1, -2, 0, 3}}};
  for (const auto& [name, coeffs] : polys) {
    const ScalarFunction p = get_function("poly", coeffs);
    for (int d : dims) {
      double worst = 0.0;
      for (int c = 0; c < cfg.cases; ++c) {
        const HermitianOperator a = random_op(d);
        const double scale = 1.0 + schatten_norm(a, Schatten::infinity);
        const ComplexMatrix diff = apply_function(p, a).matrix() - matrix_horner(coeffs, a.matrix());
        worst = std::max(worst, diff.cwiseAbs().maxCoeff() / (scale * scale * scale));
      }
      rows.push_back({"polynomial_calculus", name, d, cfg.cases, worst, 1e-9});
    }
  }

  // Loewner perturbation identity, normalized by the pair scale.
  for (const char* id : {"x^2", "sin"}) {
    const ScalarFunction f = std::string(id) == "sin" ? get_function("sin") : get_function("poly", {0, 0, 1});
    for (int d : dims) {
      double worst = 0.0;
      for (int c = 0; c < cfg.cases; ++c) {
        const HermitianOperator a = random_op(d), b = random_op(d);
        worst = std::max(worst, perturbation_identity_residual(f, a, b) / operator_scale(a, b));
      }
      rows.push_back({"perturbation_identity", id, d, cfg.cases, worst, 1e-8});
    }
  }

  // Norm axioms: triangle inequality, homogeneity, and ||.||_inf <= ||.||_2 <= ||.||_1.
  for (int d : dims) {
    double triangle = -1.0, homogeneity = 0.0, ordering = -1.0;
    for (int c = 0; c < cfg.cases; ++c) {
      const HermitianOperator a = random_op(d), b = random_op(d);
      const double t = uniform_real(rng, -3.0, 3.0);
      for (Schatten p : {Schatten::one, Schatten::two, Schatten::infinity}) {
        const double na = schatten_norm(a, p), nb = schatten_norm(b, p);
        triangle = std::max(triangle, (schatten_norm(a + b, p) - na - nb) / std::max(1.0, na + nb));
        homogeneity = std::max(homogeneity, std::abs(schatten_norm(t * a, p) - std::abs(t) * na) / std::max(1.0, na));
      }
      const double n1 = schatten_norm(a, Schatten::one), n2 = schatten_norm(a, Schatten::two),
                   ni = schatten_norm(a, Schatten::infinity);
      ordering = std::max({ordering, (ni - n2) / std::max(1.0, n1), (n2 - n1) / std::max(1.0, n1)});
    }
    rows.push_back({"norm_triangle", "schatten", d, cfg.cases, triangle, 1e-12});
    rows.push_back({"norm_homogeneity", "schatten", d, cfg.cases, homogeneity, 1e-12});
    rows.push_back({"norm_ordering", "schatten", d, cfg.cases, ordering, 1e-12});
  }

  // Truncation ranks: eigenvalues with |l| > delta are discarded.
  for (int d : dims) {
    double mismatches = 0.0;
    for (int c = 0; c < cfg.cases; ++c) {
      const HermitianOperator a = random_op(d);
      const double delta = uniform_real(rng, 0.05, 1.0);
      const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
      const auto expected = (es.eigenvalues().array().abs() > delta).count();
      if (spectral_truncation(a, delta).discarded_rank != expected) mismatches += 1.0;
    }
    rows.push_back({"truncation_rank", "mismatches", d, cfg.cases, mismatches, 0.0});
  }

  // Trace-class reassembly through finite-rank tails.
  for (int d : dims) {
    double worst = 0.0;
    const ScalarFunction f = get_function("smoothed_abs", {0.05});
    for (int c = 0; c < cfg.cases; ++c) {
      const HermitianOperator a = random_op(d), b = random_op(d);
      const TraceTransferReport r = trace_transfer_check(f, uniform_real(rng, 0.05, 0.5), a, b);
      worst = std::max(worst, r.residual_s1 / r.scale);
    }
    rows.push_back({"trace_transfer", "smoothed_abs", d, cfg.cases, worst, 1e-9});
  }

  // Fixture matrices go through the strict loader; a malformed one aborts the run.
  for (const auto& path : cfg.matrix_files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read matrix fixture " + path.string());
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError("matrix fixture " + path.string() + " is not valid JSON: " + e.what());
    }
    const HermitianOperator a = hermitian_from_json(j);
    const SpectralDecomposition eig = decompose(a);
    const ComplexMatrix back = eig.eigenvectors * eig.eigenvalues.cast<std::complex<double>>().asDiagonal() *
                               eig.eigenvectors.adjoint();
    rows.push_back({"fixture_reconstruction", path.filename().string(), a.dim(), 1,
                    (back - a.matrix()).cwiseAbs().maxCoeff() / std::max(1.0, a.max_abs_entry()), 1e-10});
  }

  RunResult out;
  out.report.columns = {"property", "subject", "dim", "cases", "measured", "threshold", "pass"};
  for (const VerifyRow& r : rows) {
    const bool pass = r.measured <= r.threshold;
    out.passed = out.passed && pass;
    out.report.add({r.property, r.subject, r.dim, r.cases, r.measured, r.threshold, pass});
  }
  return out;
}

RunResult run(const ExperimentConfig& cfg, const std::string& report_stem, int threads) {
  switch (cfg.command) {
    case Command::ratio_search: return run_ratio_search(cfg, report_stem, threads);
    case Command::divergence: return run_divergence(cfg, report_stem, threads);
    case Command::commuting: return run_commuting(cfg, report_stem, threads);
    case Command::verify: return run_verify(cfg, report_stem, threads);
  }
  throw ConfigError("unknown command");
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f.flush()) throw ConfigError("cannot write " + path.string());
}

bool is_parameter_error(ErrorKind k) {
  return k == ErrorKind::BadParams || k == ErrorKind::BadInterval || k == ErrorKind::UnknownFunction;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator Lipschitz experiments: seminorm searches, divergent families, commuting witnesses.",
               "specshift"};
  std::string command_name, config_path, output, format;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command_name, "ratio-search | divergence | commuting | verify")->required();
  app.add_option("config", config_path, "experiment config (JSON)")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--output", output, "report path; side files are written next to it");
  app.add_option("--format", format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "specshift: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const Command command = parse_command(command_name);
    const int threads = thread_cap(std::getenv("SPECSHIFT_THREADS"));
    ExperimentConfig cfg = load_config(command, config_path);
    if (seed) cfg.seed = *seed;
    if (!output.empty()) cfg.output = output;
    if (!format.empty()) cfg.format = parse_format(format);

    std::string stem;
    std::filesystem::path dir;
    if (cfg.output) {
      dir = cfg.output->parent_path();
      stem = cfg.output->stem().string();
      if (!dir.empty() && !std::filesystem::is_directory(dir)) {
        throw ConfigError("output directory " + dir.string() + " does not exist");
      }
    }

    const RunResult result = run(cfg, stem, threads);
    const std::string report = render(result.report, cfg.format);
    if (cfg.output) {
      write_file(*cfg.output, report);
      for (const Artifact& a : result.artifacts) write_file(dir / a.name, a.content);
    } else {
      out << report;
      out.flush();
    }
    if (!result.passed) {
      err << "specshift: verification failed\n";
      return kExitNumeric;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "specshift: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "specshift: " << (is_parameter_error(e.kind()) ? "config error: " : "numeric failure: ") << e.what()
        << "\n";
    return is_parameter_error(e.kind()) ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    err << "specshift: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace specshift::cli
