#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "sdlab/assembly.hpp"
#include "sdlab/frac_interface.hpp"
#include "sdlab/mesh.hpp"
#include "sdlab/minres.hpp"
#include "sdlab/mms.hpp"
#include "sdlab/precond.hpp"
#include "sdlab/spaces.hpp"
#include "sdlab/spectrum.hpp"

namespace sdlab {

/// Assembled coupled problem with its preconditioner ingredients.
struct Problem {
  Mesh mesh;
  BlockLayout layout;
  EssentialDofs essential;
  PhysParams params;
  BcConfig config = BcConfig::NEstar;
  std::shared_ptr<const InterfaceOperator> iface;
  SparseMatrix A;
  SparseMatrix N;
  Eigen::VectorXd rhs;
};

Problem build_problem(const DomainSpec& spec, int nref, BcConfig config, const PhysParams& params,
                      const LoadData& data);

/// Stacked unit squares with manufactured data in the given configuration.
Problem build_mms_problem(BcConfig config, const PhysParams& params, int nref);

/// Channel (0, 1 + n) x (0, 1) with n square inclusions [0.5 + i, 1 + i] x [0.25, 0.75],
/// driven by traction p = 1 on the left and p = 0 on the right.
DomainSpec floating_domain(int inclusions, int base_divisions = 4);
Problem build_floating_problem(int inclusions, const PhysParams& params, int nref);

/// Smallest-magnitude eigenvalues excluded from kappa_eff: the near-kernel
/// dimension, one per floating component, and the exact zero mode of EE.
int kernel_drop(const Problem& problem);

Eigen::VectorXd direct_solve(const SparseMatrix& A, const Eigen::VectorXd& b);

struct SolveOptions {
  double reduction = 1e-12;
  int maxit = 2000;
  bool deflate = false;
  double gamma_mult = 1.0;
  bool diagnostic = false;
};

struct SolveRun {
  MinresResult result;
  std::vector<Plateau> plateaus;
  std::optional<Spectrum> spectrum;  // diagnostic runs only
  double gamma = 0.0;                // deflation scaling actually used
  double seconds = 0.0;
};

/// MINRES from a zero initial guess with B or, when requested, B_W.
/// Diagnostic runs also compute the dense spectrum of the matching pencil.
SolveRun run_minres(const Problem& problem, const SolveOptions& options);

/// Spectrum of (A, N), or of (A, B_W^{-1}) when `deflate`.
Spectrum problem_spectrum(const Problem& problem, bool deflate = false, double gamma_mult = 1.0);

struct SweepRow {
  BcConfig config = BcConfig::NN;
  double mu = 0.0, K = 0.0, alpha = 0.0;
  int nref = 0;
  double h = 0.0;
  int dofs = 0;
  bool deflated = false;
  double kappa = 0.0, kappa_eff = 0.0;
  double lambda_min = 0.0;  // smallest magnitude
  double lambda_next = 0.0; // first retained after the drop
  double lambda_max = 0.0;
};

SweepRow condition_row(BcConfig config, const PhysParams& params, int nref, bool deflate = false,
                       double gamma_mult = 1.0);

/// Direct solves of the manufactured problem (NE*) on each level.
std::vector<MmsRow> run_mms(const PhysParams& params, const std::vector<int>& nrefs);

}  // namespace sdlab
