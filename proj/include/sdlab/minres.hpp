#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace sdlab {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

enum class StopReason { Converged, MaxIterations, Breakdown };

std::string_view to_string(StopReason reason);

struct MinresOptions {
  double reduction = 1e-12;
  double absolute_floor = 1e-14;
  int maxit = 1000;
  /// Store Lanczos vectors, reorthogonalize, and record harmonic Ritz values.
  bool diagnostic = false;
  /// Generalized eigenvalues sorted by magnitude; enables F_k in diagnostic mode.
  std::vector<double> spectrum;
};

struct SolveLog {
  std::vector<double> residuals;  // preconditioned residual norms, entry 0 is the initial one
  std::vector<double> alpha;      // Lanczos diagonal
  std::vector<double> beta;       // Lanczos off-diagonal; beta[k] couples steps k and k+1
  std::vector<std::vector<double>> theta;  // harmonic Ritz values per iteration (diagnostic)
  std::vector<double> theta_closest;       // harmonic Ritz value closest to lambda_1
  std::vector<double> Fk;
  std::vector<int> excluded_ritz;          // zero harmonic shifts dropped per iteration
  double max_orthogonality_loss = 0.0;     // max |(v_i, v_j)_N| over stored vectors, diagnostic only
  StopReason reason = StopReason::MaxIterations;
  int iterations = 0;

  bool converged() const { return reason == StopReason::Converged; }
};

struct MinresResult {
  Eigen::VectorXd x;
  SolveLog log;
};

/// Preconditioned MINRES; `precond` applies the SPD preconditioner B.
/// Throws SolverError when (B r, r) < 0.
MinresResult minres_solve(const LinearMap& A, const LinearMap& precond, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& x0, const MinresOptions& options);

/// Harmonic Ritz values theta from T y = nu (T^2 + beta_{k+1}^2 e_k e_k^T) y, theta = 1 / nu.
/// `alpha` has k entries; `beta` has k entries, beta[i] linking rows i and i+1 (beta[k-1] = beta_{k+1}).
/// Values with nu = 0 are dropped and counted in `excluded`.
std::vector<double> harmonic_ritz(const std::vector<double>& alpha, const std::vector<double>& beta, int k,
                                  int* excluded = nullptr);

/// max over k >= 2 of |theta_1|/|lambda_1| |lambda_1 - lambda_k| / |theta_1 - lambda_k|,
/// with theta_1 the value closest to lambda_1. Returns +inf when theta_1 hits some lambda_k.
double compute_Fk(const std::vector<double>& theta, const std::vector<double>& spectrum);

/// theta_1 as used by compute_Fk.
double closest_ritz(const std::vector<double>& theta, double lambda1);

struct Plateau {
  int start = -1;   // first iteration of the run
  int length = 0;   // iterations in the run
};

/// Runs of at least `min_length` consecutive iterations, each reducing the
/// residual by less than `min_reduction` (relative).
std::vector<Plateau> detect_plateaus(const std::vector<double>& residuals, int min_length = 10,
                                     double min_reduction = 0.01);

}  // namespace sdlab
