// Command-line driver for the Stokes-Darcy experiments.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sdlab/error.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sdlab;

namespace {

struct Common {
  std::string case_name = "NE";
  std::vector<double> mu{1.0};
  std::vector<double> K{1.0};
  double alpha = 0.5;
  std::vector<int> nref{1};
  double reduction = 1e-12;
  int maxit = 2000;
  bool deflate = false;
  double gamma_mult = 1.0;
  bool diagnostic = false;
  std::string out = "out";
  bool check = false;
  double tol = 0.15;
  int inclusions = 2;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_sweep_values(const std::vector<double>& values, const char* name) {
  for (double v : values) {
    const double e = std::log10(v);
    if (!(v > 0.0) || std::abs(e - std::round(e)) > 1e-9 || e < -8.0 - 1e-9 || e > 8.0 + 1e-9) {
      throw ConfigurationError(std::string(name) + " values must be powers of ten in [1e-8, 1e8]");
    }
  }
}

json base_summary(const std::string& command, const Common& c) {
  return {{"command", command},
          {"case", c.case_name},
          {"mu", c.mu},
          {"K", c.K},
          {"alpha", c.alpha},
          {"nref", c.nref},
          {"reduction", c.reduction},
          {"maxit", c.maxit},
          {"deflate", c.deflate},
          {"gamma_mult", c.gamma_mult},
          {"diagnostic", c.diagnostic}};
}

std::string tag_of(double mu, double K, int nref) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "mu%g_K%g_n%d", mu, K, nref);
  return buf;
}

int cmd_mms(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const PhysParams params{c.mu.front(), c.K.front(), c.alpha};
  const auto rows = run_mms(params, c.nref);
  std::cout << format_mms_table(rows);
  const fs::path csv = fs::path(c.out) / "mms.csv";
  write_mms_csv(csv, rows);
  const auto rates = convergence_rates(rows);
  bool ok = true;
  if (!rates.empty()) {
    const auto& r = rates.back();
    const double expected[4] = {2.0, 2.0, 1.0, 1.0};
    for (int k = 0; k < 4; ++k) ok = ok && std::abs(r[k] - expected[k]) <= c.tol;
  }
  json s = base_summary("mms", c);
  s["case"] = "NE*";
  s["seconds"] = seconds_since(t0);
  s["rates_ok"] = ok;
  write_sidecar(csv, s);
  if (c.check) {
    std::cout << (ok ? "rates within tolerance\n" : "rates outside tolerance\n");
    return ok ? 0 : 1;
  }
  return 0;
}

int cmd_cond_sweep(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  check_sweep_values(c.mu, "mu");
  check_sweep_values(c.K, "K");
  const BcConfig config = parse_bc_config(c.case_name);
  std::vector<SweepRow> rows;
  json timings = json::array();
  for (int nref : c.nref) {
    for (double mu : c.mu) {
      for (double K : c.K) {
        const auto t1 = std::chrono::steady_clock::now();
        try {
          rows.push_back(condition_row(config, {mu, K, c.alpha}, nref, c.deflate, c.gamma_mult));
        } catch (const BudgetError& e) {
          std::cerr << "warning: skipping " << tag_of(mu, K, nref) << ": " << e.what() << '\n';
          continue;
        }
        const auto& r = rows.back();
        std::printf("%-4s mu=%-8g K=%-8g nref=%d dofs=%-6d kappa=%-12.5g kappa_eff=%-10.5g\n",
                    std::string(to_string(config)).c_str(), mu, K, nref, r.dofs, r.kappa, r.kappa_eff);
        timings.push_back({{"point", tag_of(mu, K, nref)}, {"seconds", seconds_since(t1)}});
      }
    }
  }
  const fs::path csv = fs::path(c.out) / ("cond_" + std::string(to_string(config)) + (c.deflate ? "_defl" : "") + ".csv");
  write_sweep_csv(csv, rows);
  json s = base_summary("cond-sweep", c);
  s["seconds"] = seconds_since(t0);
  s["timings"] = timings;
  bool ok = !rows.empty();
  if (ok) {
    const bool eff = config == BcConfig::EE;
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : rows) {
      const double k = eff ? r.kappa_eff : r.kappa;
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    s["kappa_spread"] = hi / lo;
    ok = hi / lo <= 2.0;
  }
  write_sidecar(csv, s);
  return c.check && !ok ? 1 : 0;
}

int report_solve(const Common& c, const Problem& p, const SolveOptions& opt, const std::string& command,
                 const std::string& stem) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveRun run = run_minres(p, opt);
  const auto& log = run.result.log;
  const fs::path csv = fs::path(c.out) / (stem + ".csv");
  write_solve_log_csv(csv, log);
  std::ofstream(fs::path(c.out) / (stem + "_solution.txt")) << std::setprecision(17) << run.result.x << '\n';
  json s = base_summary(command, c);
  s["case"] = std::string(to_string(p.config));
  s["mu"] = p.params.mu;
  s["K"] = p.params.K;
  s["nref"] = p.mesh.nref;
  s["deflate"] = opt.deflate;
  s["dofs"] = p.layout.total;
  s["iterations"] = log.iterations;
  s["stop_reason"] = std::string(to_string(log.reason));
  s["maxit_exhausted"] = log.reason == StopReason::MaxIterations;
  s["plateaus"] = json::array();
  for (const auto& pl : run.plateaus) s["plateaus"].push_back({{"start", pl.start}, {"length", pl.length}});
  s["gamma"] = run.gamma;
  if (run.spectrum) {
    write_spectrum_csv(fs::path(c.out) / (stem + "_spectrum.csv"), *run.spectrum);
    s["spectrum"] = spectrum_summary(*run.spectrum);
    const BoundCheck bc = check_residual_bound(log, run.spectrum->hull);
    s["bound_check"] = {{"holds", bc.holds}, {"pairs", bc.pairs_checked}, {"worst_ratio", bc.worst_ratio}};
    s["orthogonality_loss"] = log.max_orthogonality_loss;
  }
  s["seconds"] = {{"solve", run.seconds}, {"total", seconds_since(t0)}};
  write_sidecar(csv, s);
  std::printf("%-4s mu=%-8g K=%-8g nref=%d %s iterations=%-5d plateaus=%zu %s\n",
              std::string(to_string(p.config)).c_str(), p.params.mu, p.params.K, p.mesh.nref,
              opt.deflate ? "B_W" : "B  ", log.iterations, run.plateaus.size(),
              std::string(to_string(log.reason)).c_str());
  return log.converged() ? 0 : 1;
}

SolveOptions solve_options(const Common& c) {
  SolveOptions opt;
  opt.reduction = c.reduction;
  opt.maxit = c.maxit;
  opt.deflate = c.deflate;
  opt.gamma_mult = c.gamma_mult;
  opt.diagnostic = c.diagnostic;
  return opt;
}

int cmd_solve(const Common& c) {
  const BcConfig config = parse_bc_config(c.case_name);
  int status = 0;
  for (int nref : c.nref) {
    for (double mu : c.mu) {
      for (double K : c.K) {
        const Problem p = build_mms_problem(config, {mu, K, c.alpha}, nref);
        const std::string stem = "solve_" + std::string(to_string(config)) + "_" + tag_of(mu, K, nref) +
                                 (c.deflate ? "_defl" : "");
        status |= report_solve(c, p, solve_options(c), "solve", stem);
      }
    }
  }
  return c.check ? status : 0;
}

int cmd_floating(const Common& c) {
  int status = 0;
  for (int nref : c.nref) {
    for (double K : c.K) {
      const Problem p = build_floating_problem(c.inclusions, {c.mu.front(), K, c.alpha}, nref);
      for (bool deflate : {false, true}) {
        SolveOptions opt = solve_options(c);
        opt.deflate = deflate;
        const std::string stem = "floating_" + std::to_string(c.inclusions) + "_" + tag_of(c.mu.front(), K, nref) +
                                 (deflate ? "_defl" : "");
        status |= report_solve(c, p, opt, "floating", stem);
      }
    }
  }
  return c.check ? status : 0;
}

int cmd_mesh(const Common& c) {
  const BcConfig config = parse_bc_config(c.case_name);
  const DomainSpec spec = config == BcConfig::MultiInclusion ? floating_domain(c.inclusions) : mms_domain();
  const Mesh mesh = tag_boundaries(build_coupled_mesh(spec, c.nref.front()), config);
  const fs::path path = fs::path(c.out) / ("mesh_" + std::string(to_string(config)) + ".json");
  fs::create_directories(path.parent_path());
  std::ofstream(path) << mesh_to_json(mesh) << '\n';
  std::cout << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes-Darcy preconditioning experiments"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Common c;

  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--case", c.case_name, "NN, EE, NE*, EN*, NE, EN or multi-inclusion")->capture_default_str();
    sub->add_option("--mu", c.mu, "viscosity (list)")->delimiter(',')->capture_default_str();
    sub->add_option("--K", c.K, "hydraulic conductivity (list)")->delimiter(',')->capture_default_str();
    sub->add_option("--alpha", c.alpha, "BJS coefficient")->capture_default_str();
    sub->add_option("--nref", c.nref, "refinement levels (list)")->delimiter(',')->capture_default_str();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_flag("--check", c.check, "exit nonzero when the experiment's check fails");
  };
  auto add_solver = [&c](CLI::App* sub) {
    sub->add_option("--reduction", c.reduction, "relative residual reduction")->capture_default_str();
    sub->add_option("--maxit", c.maxit, "iteration limit")->capture_default_str();
    sub->add_flag("--deflate", c.deflate, "use the deflated preconditioner");
    sub->add_option("--gamma-mult", c.gamma_mult, "multiplier on the deflation scaling")->capture_default_str();
    sub->add_flag("--diagnostic", c.diagnostic, "reorthogonalize, log harmonic Ritz values and F_k");
  };

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence table");
  add_common(mms);
  mms->add_option("--tol", c.tol, "rate tolerance on the finest pair")->capture_default_str();
  auto* sweep = app.add_subcommand("cond-sweep", "condition numbers over a parameter grid");
  add_common(sweep);
  sweep->add_flag("--deflate", c.deflate, "use the deflated preconditioner");
  sweep->add_option("--gamma-mult", c.gamma_mult, "multiplier on the deflation scaling")->capture_default_str();
  auto* solve = app.add_subcommand("solve", "preconditioned MINRES on the manufactured problem");
  add_common(solve);
  add_solver(solve);
  auto* floating = app.add_subcommand("floating", "channel with floating Darcy inclusions, B and B_W");
  add_common(floating);
  add_solver(floating);
  floating->add_option("--inclusions", c.inclusions, "number of inclusions")->capture_default_str();
  auto* mesh = app.add_subcommand("mesh", "write the tagged mesh as JSON");
  add_common(mesh);
  mesh->add_option("--inclusions", c.inclusions, "number of inclusions")->capture_default_str();

  // Defaults that differ per subcommand when not given on the command line.
  mms->callback([&] {
    if (mms->count("--mu") == 0) c.mu = {3.0};
    if (mms->count("--nref") == 0) c.nref = {0, 1, 2, 3, 4};
  });
  sweep->callback([&] {
    if (sweep->count("--mu") == 0) c.mu = {1e-4, 1e-2, 1.0, 1e2, 1e4};
    if (sweep->count("--K") == 0) c.K = {1e-4, 1e-2, 1.0, 1e2, 1e4};
    if (sweep->count("--nref") == 0) c.nref = {0, 1, 2};
  });
  floating->callback([&] {
    if (floating->count("--mu") == 0) c.mu = {3.0};
    if (floating->count("--K") == 0) c.K = {1.0, 100.0};
  });

  CLI11_PARSE(app, argc, argv);
  try {
    if (*mms) return cmd_mms(c);
    if (*sweep) return cmd_cond_sweep(c);
    if (*solve) return cmd_solve(c);
    if (*floating) return cmd_floating(c);
    if (*mesh) return cmd_mesh(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
