#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sdlab/assembly.hpp"
#include "sdlab/minres.hpp"
#include "sdlab/spaces.hpp"

namespace sdlab {

inline constexpr int kDenseBudget = 6000;

/// [a, b] U [c, d] with a <= b < 0 < c <= d.
struct Hull {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  /// (sqrt|ad| - sqrt|bc|) / (sqrt|ad| + sqrt|bc|).
  double rate() const;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // sorted by magnitude, ascending
  int eliminated = 0;               // unit eigenvalues contributed by essential dofs
  int drop = 0;                     // smallest-magnitude values excluded from kappa_eff and the hull
  double kappa = 0.0;
  double kappa_eff = 0.0;
  Hull hull;
};

/// Eigenvalues of the symmetric pencil (A, N) with N SPD, by Cholesky reduction
/// on the dofs outside `essential`; each essential dof adds an exact eigenvalue 1.
/// Throws BudgetError above `budget` free dofs.
Spectrum generalized_eigs(const SparseMatrix& A, const SparseMatrix& N, const EssentialDofs* essential,
                          int drop, int budget = kDenseBudget);

/// Same with a dense N, used for the deflated preconditioner.
Spectrum generalized_eigs(const SparseMatrix& A, const Eigen::MatrixXd& N, const EssentialDofs* essential,
                          int drop, int budget = kDenseBudget);

/// Spectrum from a list of eigenvalues (any order).
Spectrum make_spectrum(std::vector<double> eigenvalues, int drop, int eliminated = 0);

struct ConditionNumbers {
  double kappa = 0.0;
  double kappa_eff = 0.0;
};

/// kappa = |lambda_max| / |lambda_min|, kappa_eff = |lambda_max| / |lambda_(drop+1)|.
ConditionNumbers condition_numbers(const Spectrum& spec, int drop);

/// Extreme values after removing the `drop` smallest-magnitude eigenvalues.
Hull spectral_hull(const std::vector<double>& sorted_by_magnitude, int drop);

struct BoundCheck {
  bool holds = true;
  int pairs_checked = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max of observed / bound
};

/// Checks r_{m+j} / r_0 <= 2 F_m rate^{floor(j/2)} for all logged m >= 1, j >= 0.
BoundCheck check_residual_bound(const SolveLog& log, const Hull& hull);

}  // namespace sdlab
