// Command-line front end for the MAXCUT adiabatic-gap pipelines.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaegap/evolution.hpp"
#include "qaegap/gap_scan.hpp"

namespace {

using namespace qaegap;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNonConvergence = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitResourceCap = 4;

struct CommonOptions {
  std::string instance_path;
  std::string out_path;
  std::string format = "csv";
  int grid_points = 0;  // 0 -> method default
  double s_min = -1.0;
  double s_max = -1.0;
  double eta = kDefaultEta;
  double mixing = 0.3;
  double tol = 1e-8;
  int max_iter = 500;
  std::string xc = "none";
  std::string xc_params_path;
  std::uint64_t seed = 0;
  int workers = 1;
};

// JSON config mirrors the flags; values already set in `opts` are only
// replaced when the key is present, and explicit flags override afterwards
// because CLI11 writes bound variables only when a flag is given.
void apply_config(const std::string& path, CommonOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid config JSON: ") + e.what());
  }
  opts.instance_path = j.value("instance", opts.instance_path);
  opts.out_path = j.value("out", opts.out_path);
  opts.format = j.value("format", opts.format);
  opts.grid_points = j.value("grid", opts.grid_points);
  opts.s_min = j.value("smin", opts.s_min);
  opts.s_max = j.value("smax", opts.s_max);
  opts.eta = j.value("eta", opts.eta);
  opts.mixing = j.value("mix", opts.mixing);
  opts.tol = j.value("tol", opts.tol);
  opts.max_iter = j.value("max_iter", opts.max_iter);
  opts.xc = j.value("xc", opts.xc);
  opts.xc_params_path = j.value("xc_params", opts.xc_params_path);
  opts.seed = j.value("seed", opts.seed);
  opts.workers = j.value("workers", opts.workers);
}

XCFunctional load_xc(const CommonOptions& opts) {
  if (!opts.xc_params_path.empty()) {
    std::ifstream in(opts.xc_params_path);
    if (!in) throw ParseError("cannot open xc params file: " + opts.xc_params_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return XCFunctional::from_json(ss.str());
  }
  if (opts.xc == "none") return XCFunctional::none();
  if (opts.xc == "local_correlation")
    throw ParseError("xc local_correlation needs --xc-params with coefficients");
  if (opts.xc == "probe" || opts.xc == "discontinuity_probe")
    throw ParseError("xc probe needs --xc-params with base/step/threshold");
  throw ParseError("unknown xc variant: " + opts.xc);
}

ScanOptions scan_options(const CommonOptions& opts) {
  ScanOptions so;
  so.xc = load_xc(opts);
  so.scf.mixing = opts.mixing;
  so.scf.tol = opts.tol;
  so.scf.max_iter = opts.max_iter;
  so.eta = opts.eta;
  so.workers = opts.workers;
  return so;
}

std::vector<double> make_grid(const CommonOptions& opts, ScanMethod method) {
  if (opts.grid_points == 0 && opts.s_min < 0.0 && opts.s_max < 0.0)
    return default_grid(method);
  const double lo = opts.s_min >= 0.0
                        ? opts.s_min
                        : (method == ScanMethod::Exact ? 0.0 : 0.02);
  const double hi = opts.s_max >= 0.0
                        ? opts.s_max
                        : (method == ScanMethod::Exact ? 1.0 : 0.98);
  const int pts = opts.grid_points > 0
                      ? opts.grid_points
                      : (method == ScanMethod::Exact ? 101 : 49);
  return uniform_grid(lo, hi, pts);
}

MaxCutInstance load_instance(const CommonOptions& opts) {
  if (opts.instance_path.empty())
    throw ParseError("an instance file is required (--instance)");
  return read_instance(opts.instance_path);
}

void emit_report(const GapReport& report, const CommonOptions& opts) {
  const std::string text =
      opts.format == "json" ? report_to_json(report) : report_to_csv(report);
  if (opts.out_path.empty())
    std::cout << text;
  else
    write_text_atomic(text, opts.out_path);
  std::printf("%s: gap_min=%.12g s_star=%.12g points=%zu\n",
              report.method.c_str(), report.gap_min, report.s_star,
              report.points.size());
}

void add_common_flags(CLI::App* cmd, CommonOptions& opts,
                      std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config mirroring the flags");
  cmd->add_option("--instance", opts.instance_path, "instance file (JSON)");
  cmd->add_option("--out", opts.out_path, "output path");
  cmd->add_option("--format", opts.format, "csv|json");
  cmd->add_option("--grid", opts.grid_points, "number of grid points");
  cmd->add_option("--smin", opts.s_min, "grid lower bound");
  cmd->add_option("--smax", opts.s_max, "grid upper bound");
  cmd->add_option("--eta", opts.eta, "response broadening");
  cmd->add_option("--mix", opts.mixing, "SCF linear mixing");
  cmd->add_option("--tol", opts.tol, "SCF tolerance");
  cmd->add_option("--max-iter", opts.max_iter, "SCF iteration cap");
  cmd->add_option("--xc", opts.xc, "none|local_correlation|probe");
  cmd->add_option("--xc-params", opts.xc_params_path, "xc parameter file");
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--workers", opts.workers, "worker pool size");
}

int run_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("%-42s %s\n", name, ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
  };

  const LatticeGeometry geom{2, 2};
  RandomInstanceParams params;
  const MaxCutInstance inst = generate_random(geom, params, 7);

  {
    const auto bf = brute_force_max(inst);
    bool ok = !bf.maximizers.empty();
    for (const auto& s : bf.maximizers)
      ok = ok && std::abs(payoff(inst, s) - bf.max_payoff) < 1e-12;
    check("brute force maximizers reproduce payoff", ok);
  }
  {
    const MaxCutInstance again = generate_random(geom, params, 7);
    check("generation deterministic for fixed seed",
          instance_digest(inst) == instance_digest(again));
  }
  {
    const QubitOperator h = interpolate(build_driver(4), build_problem(inst), 0.4);
    check("interpolated Hamiltonian Hermitian",
          h.hermiticity_defect() < 1e-12);
  }
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(
        interpolate(build_driver(4), build_problem(inst), 0.4).dense());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> b(
        build_fermionized_hamiltonian(inst, 0.4).dense());
    check("fermionized spectrum matches qubit spectrum",
          (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  }
  {
    const auto gf = lattice_green_function(geom);
    check("lattice Green function residual", green_residual(gf, geom) < 1e-10);
  }
  {
    MaxCutInstance free = inst;
    free.edges.clear();
    const KohnShamState state = scf_solve(free, 0.5, XCFunctional::none());
    const auto g = dft_gap(free, state, XCFunctional::none());
    const auto exact = gap_at(free, 0.5);
    check("zero-interaction DFT gap matches oracle",
          std::abs(g.gap - exact.gap) < 1e-8);
  }
  std::printf("selftest: %d failure(s)\n", failures);
  return failures == 0 ? kExitOk : kExitNonConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-gap estimation for quantum adiabatic MAXCUT"};
  app.require_subcommand(1);

  std::string config_path;
  CommonOptions opts;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int rows = 1, cols = 2;
  double extra_edge_prob = 0.0;
  gen->add_option("--rows", rows, "lattice rows");
  gen->add_option("--cols", cols, "lattice cols");
  gen->add_option("--extra-edge-prob", extra_edge_prob,
                  "probability of non-neighbor edges");
  add_common_flags(gen, opts, config_path);

  auto* exact = app.add_subcommand("exact", "exact oracle gap curve");
  add_common_flags(exact, opts, config_path);

  auto* scf = app.add_subcommand("scf", "single Kohn-Sham SCF solve");
  double scf_s = 0.5;
  scf->add_option("--s", scf_s, "schedule point");
  add_common_flags(scf, opts, config_path);

  auto* dft = app.add_subcommand("dft", "DFT gap curve");
  double dft_s = -1.0;
  dft->add_option("--s", dft_s, "single schedule point instead of a grid");
  add_common_flags(dft, opts, config_path);

  auto* scan_cmd = app.add_subcommand("scan", "gap scan (exact, dft, or both)");
  std::string method = "both";
  scan_cmd->add_option("--method", method, "exact|dft|both");
  add_common_flags(scan_cmd, opts, config_path);

  auto* scale = app.add_subcommand("scale", "N-scaling study");
  std::vector<int> n_list;
  std::vector<std::uint64_t> seed_list;
  std::string scale_method = "exact";
  std::string instance_dir = ".";
  scale->add_option("--n", n_list, "qubit counts (1xN chains)")->required();
  scale->add_option("--seeds", seed_list, "seeds")->required();
  scale->add_option("--method", scale_method, "exact|dft|both");
  scale->add_option("--instance-dir", instance_dir, "where instances are stored");
  add_common_flags(scale, opts, config_path);

  auto* evolve = app.add_subcommand("evolve", "Schrodinger propagation");
  double T = 0.0, dt = 0.0, safety = 100.0;
  std::string trace_path;
  evolve->add_option("--T", T, "runtime (0: use c*M/Delta^2 from the oracle)");
  evolve->add_option("--dt", dt, "step size (0: auto)");
  evolve->add_option("--safety", safety, "safety factor c for the bound");
  evolve->add_option("--trace", trace_path, "per-step trace CSV");
  add_common_flags(evolve, opts, config_path);

  auto* cmp_cmd = app.add_subcommand("compare", "compare two report JSON files");
  std::string report_a, report_b;
  cmp_cmd->add_option("report_a", report_a)->required();
  cmp_cmd->add_option("report_b", report_b)->required();
  add_common_flags(cmp_cmd, opts, config_path);

  app.add_subcommand("selftest", "run the invariant battery");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kExitInvalidInput;
    }

    if (!config_path.empty()) {
      apply_config(config_path, opts);
      // Flags still win: re-parse writes flag values over config values.
      app.clear();
      (void)app.parse(argc, argv);
    }

    if (app.got_subcommand("selftest")) return run_selftest();

    if (app.got_subcommand(gen)) {
      RandomInstanceParams params;
      params.extra_edge_prob = extra_edge_prob;
      const MaxCutInstance inst =
          generate_random(LatticeGeometry{rows, cols}, params, opts.seed);
      const std::string out = opts.out_path.empty() ? "instance.json" : opts.out_path;
      write_instance(inst, out);
      std::printf("gen: N=%d edges=%zu digest=%s -> %s\n", inst.sites(),
                  inst.edges.size(), instance_digest(inst).c_str(), out.c_str());
      return kExitOk;
    }

    if (app.got_subcommand(exact)) {
      const MaxCutInstance inst = load_instance(opts);
      const auto report = scan(inst, make_grid(opts, ScanMethod::Exact),
                               ScanMethod::Exact, scan_options(opts));
      emit_report(report, opts);
      return kExitOk;
    }

    if (app.got_subcommand(scf)) {
      const MaxCutInstance inst = load_instance(opts);
      const auto so = scan_options(opts);
      const KohnShamState state = scf_solve(inst, scf_s, so.xc, so.scf);
      const auto energy = energy_functional(inst, state, so.xc);
      std::printf("scf: s=%g iters=%d residual=%.3g total=%.12g "
                  "(kinetic=%.6g external=%.6g hartree=%.6g corr=%.6g)\n",
                  scf_s, state.iterations, state.residual, energy.total,
                  energy.kinetic, energy.external, energy.hartree,
                  energy.correlation);
      if (!opts.out_path.empty()) {
        nlohmann::json j;
        j["s"] = state.s;
        j["iterations"] = state.iterations;
        j["residual"] = state.residual;
        j["n"] = std::vector<double>(state.n.data(),
                                     state.n.data() + state.n.size());
        j["v_ks"] = std::vector<double>(state.v_ks.data(),
                                        state.v_ks.data() + state.v_ks.size());
        j["energy_total"] = energy.total;
        write_text_atomic(j.dump(2), opts.out_path);
      }
      return kExitOk;
    }

    if (app.got_subcommand(dft)) {
      const MaxCutInstance inst = load_instance(opts);
      const auto so = scan_options(opts);
      std::vector<double> grid;
      if (dft_s >= 0.0) {
        if (dft_s <= 0.0 || dft_s >= 1.0)
          throw InvalidArgument("DFT schedule point must lie strictly inside (0, 1)");
        grid = {dft_s};
      } else {
        grid = make_grid(opts, ScanMethod::Dft);
      }
      const auto report = scan(inst, grid, ScanMethod::Dft, so);
      emit_report(report, opts);
      return kExitOk;
    }

    if (app.got_subcommand(scan_cmd)) {
      const MaxCutInstance inst = load_instance(opts);
      const auto so = scan_options(opts);
      const std::string base = opts.out_path.empty() ? "report" : opts.out_path;
      auto emit = [&](const GapReport& rep, const std::string& suffix) {
        const std::string text = opts.format == "json" ? report_to_json(rep)
                                                       : report_to_csv(rep);
        write_text_atomic(text, base + "." + suffix + "." + opts.format);
        std::printf("%s: gap_min=%.12g s_star=%.12g\n", rep.method.c_str(),
                    rep.gap_min, rep.s_star);
      };
      if (method == "exact" || method == "both")
        emit(scan(inst, make_grid(opts, ScanMethod::Exact), ScanMethod::Exact, so),
             "exact");
      if (method == "dft" || method == "both")
        emit(scan(inst, make_grid(opts, ScanMethod::Dft), ScanMethod::Dft, so),
             "dft");
      if (method == "both") {
        // Comparison on the shared DFT grid.
        const auto grid = make_grid(opts, ScanMethod::Dft);
        const auto ea = scan(inst, grid, ScanMethod::Exact, so);
        const auto db = scan(inst, grid, ScanMethod::Dft, so);
        const auto cmp = compare(ea, db);
        write_text_atomic(comparison_to_csv(ea, db, cmp), base + ".compare.csv");
        std::printf("compare: max_abs_diff=%.6g max_rel_diff=%.6g\n",
                    cmp.max_abs_diff, cmp.max_rel_diff);
      }
      if (method != "exact" && method != "dft" && method != "both")
        throw ParseError("unknown scan method: " + method);
      return kExitOk;
    }

    if (app.got_subcommand(scale)) {
      ScalingStudyOptions sopts;
      sopts.n_values = n_list;
      sopts.seeds = seed_list;
      sopts.instance_dir = instance_dir;
      sopts.scan = scan_options(opts);
      if (scale_method == "exact")
        sopts.methods = {ScanMethod::Exact};
      else if (scale_method == "dft")
        sopts.methods = {ScanMethod::Dft};
      else if (scale_method == "both")
        sopts.methods = {ScanMethod::Exact, ScanMethod::Dft};
      else
        throw ParseError("unknown scale method: " + scale_method);
      const auto rows_out = scaling_study(sopts);
      const std::string out =
          opts.out_path.empty() ? "scaling.csv" : opts.out_path;
      write_text_atomic(scaling_to_csv(rows_out), out);
      std::printf("scale: %zu rows -> %s\n", rows_out.size(), out.c_str());
      return kExitOk;
    }

    if (app.got_subcommand(evolve)) {
      const MaxCutInstance inst = load_instance(opts);
      double runtime = T;
      if (runtime <= 0.0) {
        const auto grid = uniform_grid(0.0, 1.0, 101);
        const double m_val = adiabatic_numerator(inst, grid);
        const auto curve = exact_gap_curve(inst, grid);
        runtime = runtime_bound(m_val, curve.gap_min, safety);
        std::printf("evolve: M=%.6g Delta=%.6g -> T=%.6g\n", m_val,
                    curve.gap_min, runtime);
      }
      EvolutionOptions eopts;
      eopts.dt = dt;
      eopts.trace_path = trace_path;
      const auto result = propagate(inst, runtime, eopts);
      std::printf("evolve: T=%.6g dt=%.3g p=%.6f drift=%.3g\n", result.runtime,
                  result.dt, result.success_probability, result.norm_drift);
      return kExitOk;
    }

    if (app.got_subcommand(cmp_cmd)) {
      auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open report: " + path);
        json j;
        in >> j;
        GapReport rep;
        rep.instance_digest = j.at("instance_digest").get<std::string>();
        rep.method = j.at("method").get<std::string>();
        rep.grid = j.at("grid").get<std::vector<double>>();
        rep.gap_min = j.at("gap_min").get<double>();
        rep.s_star = j.at("s_star").get<double>();
        for (const auto& pj : j.at("points")) {
          ScanPoint p;
          p.s = pj.at("s").get<double>();
          p.gap = pj.at("gap").get<double>();
          rep.points.push_back(p);
        }
        return rep;
      };
      const GapReport a = load(report_a);
      const GapReport b = load(report_b);
      const auto cmp = compare(a, b);
      const std::string text = comparison_to_csv(a, b, cmp);
      if (opts.out_path.empty())
        std::cout << text;
      else
        write_text_atomic(text, opts.out_path);
      std::printf("compare: max_abs_diff=%.6g max_rel_diff=%.6g s_star_agree=%d\n",
                  cmp.max_abs_diff, cmp.max_rel_diff, cmp.s_star_agrees ? 1 : 0);
      return kExitOk;
    }
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const ResourceLimit& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResourceCap;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  return kExitOk;
}
