#include "sdlab/experiments.hpp"

#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>

#include "sdlab/error.hpp"

namespace sdlab {

Problem build_problem(const DomainSpec& spec, int nref, BcConfig config, const PhysParams& params,
                      const LoadData& data) {
  params.validate();
  Problem p;
  p.mesh = tag_boundaries(build_coupled_mesh(spec, nref), config);
  p.layout = build_layout(p.mesh);
  p.essential = essential_dofs(p.layout, p.mesh);
  p.params = params;
  p.config = config;
  p.iface = std::make_shared<InterfaceOperator>(p.mesh.interface, config, params);
  p.A = assemble_operator(p.mesh, p.layout, params, p.essential);
  p.N = assemble_riesz(p.mesh, p.layout, params, p.essential, p.iface->matrix());
  p.rhs = assemble_rhs(p.mesh, p.layout, params, data, p.essential);
  return p;
}

Problem build_mms_problem(BcConfig config, const PhysParams& params, int nref) {
  return build_problem(mms_domain(), nref, config, params, mms_sources(params));
}

DomainSpec floating_domain(int inclusions, int base_divisions) {
  if (inclusions < 1) throw ConfigurationError("at least one inclusion is required");
  DomainSpec spec;
  spec.stokes = {0.0, 0.0, 1.0 + inclusions, 1.0};
  for (int i = 0; i < inclusions; ++i) spec.darcy.push_back({0.5 + i, 0.25, 1.0 + i, 0.75});
  spec.base_divisions = base_divisions;
  return spec;
}

Problem build_floating_problem(int inclusions, const PhysParams& params, int nref) {
  const DomainSpec spec = floating_domain(inclusions);
  const double x_left = spec.stokes.x0;
  LoadData data;
  // -sigma n = p n with p = 1 on the inlet and 0 on the outlet.
  data.traction = [x_left](Point x, Point n) {
    const double p = std::abs(x.x - x_left) < 1e-12 ? 1.0 : 0.0;
    return Point{-p * n.x, -p * n.y};
  };
  return build_problem(spec, nref, BcConfig::MultiInclusion, params, data);
}

int kernel_drop(const Problem& p) {
  switch (p.config) {
    case BcConfig::NE:
    case BcConfig::EN:
    case BcConfig::EE: return 1;
    case BcConfig::MultiInclusion: return p.mesh.darcy_components;
    default: return 0;
  }
}

Eigen::VectorXd direct_solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  return x;
}

Spectrum problem_spectrum(const Problem& p, bool deflate, double gamma_mult) {
  const int drop = kernel_drop(p);
  if (!deflate) return generalized_eigs(p.A, p.N, &p.essential, drop);
  const DeflationVectors dv = deflation_vectors(p.layout, p.config, p.params);
  const Deflation defl = build_deflation(p.N, dv.P, dv.gamma * gamma_mult);
  const int remaining = p.config == BcConfig::EE ? 1 : 0;
  return generalized_eigs(p.A, deflated_riesz_dense(p.N, defl), &p.essential, remaining);
}

SolveRun run_minres(const Problem& p, const SolveOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SolveRun run;
  const BlockPreconditioner bp(p.N, p.layout, p.iface);
  Deflation defl;
  if (opt.deflate) {
    const DeflationVectors dv = deflation_vectors(p.layout, p.config, p.params);
    defl = build_deflation(p.N, dv.P, dv.gamma * opt.gamma_mult);
    run.gamma = defl.gamma;
  }
  MinresOptions mo;
  mo.reduction = opt.reduction;
  mo.maxit = opt.maxit;
  mo.diagnostic = opt.diagnostic;
  if (opt.diagnostic) {
    run.spectrum = problem_spectrum(p, opt.deflate, opt.gamma_mult);
    mo.spectrum = run.spectrum->eigenvalues;
  }
  const LinearMap A = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return p.A * x; };
  const LinearMap B = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return opt.deflate ? apply_deflated(bp, defl, r) : bp.apply(r);
  };
  run.result = minres_solve(A, B, p.rhs, Eigen::VectorXd::Zero(p.rhs.size()), mo);
  run.plateaus = detect_plateaus(run.result.log.residuals);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

SweepRow condition_row(BcConfig config, const PhysParams& params, int nref, bool deflate, double gamma_mult) {
  const Problem p = build_mms_problem(config, params, nref);
  const Spectrum s = problem_spectrum(p, deflate, gamma_mult);
  SweepRow row;
  row.config = config;
  row.mu = params.mu;
  row.K = params.K;
  row.alpha = params.alpha_bjs;
  row.nref = nref;
  row.h = p.mesh.h;
  row.dofs = p.layout.total;
  row.deflated = deflate;
  row.kappa = s.kappa;
  row.kappa_eff = s.kappa_eff;
  row.lambda_min = s.eigenvalues.front();
  row.lambda_next = s.eigenvalues[s.drop];
  row.lambda_max = s.eigenvalues.back();
  return row;
}

std::vector<MmsRow> run_mms(const PhysParams& params, const std::vector<int>& nrefs) {
  std::vector<MmsRow> rows;
  for (int nref : nrefs) {
    const Problem p = build_mms_problem(BcConfig::NEstar, params, nref);
    const Eigen::VectorXd x = direct_solve(p.A, p.rhs);
    rows.push_back(compute_errors(x, p.mesh, p.layout, params));
  }
  return rows;
}

}  // namespace sdlab
