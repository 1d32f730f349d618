#include "sdlab/minres.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "sdlab/error.hpp"

namespace sdlab {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::Breakdown: return "breakdown";
  }
  return "?";
}

MinresResult minres_solve(const LinearMap& A, const LinearMap& precond, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& x0, const MinresOptions& opt) {
  const Eigen::Index n = b.size();
  MinresResult out;
  SolveLog& log = out.log;
  Eigen::VectorXd x = x0.size() == n ? x0 : Eigen::VectorXd::Zero(n);

  Eigen::VectorXd v = b - A(x);
  Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = precond(v);
  double g = z.dot(v);
  if (g < 0.0) throw SolverError("preconditioner is not positive definite");
  g = std::sqrt(g);
  double g_old = 1.0;

  double eta = g;
  const double target = std::max(opt.reduction * eta, opt.absolute_floor);
  log.residuals.push_back(eta);
  if (eta <= target) {
    log.reason = StopReason::Converged;
    out.x = x;
    return out;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n), w_old = Eigen::VectorXd::Zero(n);
  double c = 1.0, c_old = 1.0, s = 0.0, s_old = 0.0;

  // Normalized Lanczos vectors v_hat (residual space) and z (solution space).
  std::vector<Eigen::VectorXd> V, Z;

  for (int j = 1; j <= opt.maxit; ++j) {
    z /= g;
    const Eigen::VectorXd Az = A(z);
    const double delta = z.dot(Az);
    Eigen::VectorXd v_new = Az - (delta / g) * v - (g / g_old) * v_old;
    if (opt.diagnostic) {
      V.push_back(v / g);
      Z.push_back(z);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < V.size(); ++i) v_new -= Z[i].dot(v_new) * V[i];
      }
    }
    Eigen::VectorXd z_new = precond(v_new);
    double g_new = z_new.dot(v_new);
    if (g_new < -1e-14 * std::abs(delta) * std::abs(delta)) {
      throw SolverError("preconditioner is not positive definite");
    }
    g_new = std::sqrt(std::max(g_new, 0.0));

    log.alpha.push_back(delta);
    log.beta.push_back(g_new);

    const double a0 = c * delta - c_old * s * g;
    const double a1 = std::hypot(a0, g_new);
    const double a2 = s * delta + c_old * c * g;
    const double a3 = s_old * g;
    if (a1 == 0.0) {
      log.reason = StopReason::Breakdown;
      break;
    }
    const double c_new = a0 / a1, s_new = g_new / a1;
    Eigen::VectorXd w_new = (z - a3 * w_old - a2 * w) / a1;
    x += c_new * eta * w_new;
    eta = -s_new * eta;

    log.residuals.push_back(std::abs(eta));
    log.iterations = j;

    if (opt.diagnostic) {
      int excluded = 0;
      auto theta = harmonic_ritz(log.alpha, log.beta, j, &excluded);
      log.excluded_ritz.push_back(excluded);
      if (!opt.spectrum.empty()) {
        log.theta_closest.push_back(closest_ritz(theta, opt.spectrum.front()));
        log.Fk.push_back(compute_Fk(theta, opt.spectrum));
      }
      log.theta.push_back(std::move(theta));
    }

    if (std::abs(eta) <= target) {
      log.reason = StopReason::Converged;
      break;
    }
    if (g_new <= 1e-300) {
      log.reason = StopReason::Breakdown;
      break;
    }

    v_old = std::move(v);
    v = std::move(v_new);
    z = std::move(z_new);
    w_old = std::move(w);
    w = std::move(w_new);
    g_old = g;
    g = g_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;
  }

  if (opt.diagnostic) {
    // (z_i, v_hat_j) equals (z_i, z_j)_N for the Riesz inner product N = B^{-1}.
    double loss = 0.0;
    for (std::size_t i = 0; i < Z.size(); ++i) {
      for (std::size_t k = 0; k < V.size(); ++k) {
        if (i != k) loss = std::max(loss, std::abs(Z[i].dot(V[k])));
      }
    }
    log.max_orthogonality_loss = loss;
  }
  out.x = std::move(x);
  return out;
}

std::vector<double> harmonic_ritz(const std::vector<double>& alpha, const std::vector<double>& beta, int k,
                                  int* excluded) {
  if (k < 1 || static_cast<int>(alpha.size()) < k || static_cast<int>(beta.size()) < k) {
    throw SolverError("harmonic Ritz values need k Lanczos steps");
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::MatrixXd G = T * T;
  G(k - 1, k - 1) += beta[k - 1] * beta[k - 1];
  G = 0.5 * (G + G.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(T, G);
  std::vector<double> theta;
  int dropped = 0;
  if (es.info() == Eigen::Success) {
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    for (int i = 0; i < k; ++i) {
      const double nu = es.eigenvalues()[i];
      if (std::abs(nu) <= 1e-14 * scale || nu == 0.0) {
        ++dropped;
        continue;
      }
      theta.push_back(1.0 / nu);
    }
  } else {
    // G singular: T is singular and beta_{k+1} = 0, fall back to the pencil (G, T) on T's range.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> et(T);
    for (int i = 0; i < k; ++i) {
      const double t = et.eigenvalues()[i];
      if (std::abs(t) <= 1e-14 * et.eigenvalues().cwiseAbs().maxCoeff()) {
        ++dropped;
        continue;
      }
      theta.push_back(t);
    }
  }
  std::sort(theta.begin(), theta.end());
  if (excluded) *excluded = dropped;
  return theta;
}

double closest_ritz(const std::vector<double>& theta, double lambda1) {
  double best = std::numeric_limits<double>::quiet_NaN();
  double dist = std::numeric_limits<double>::infinity();
  for (double t : theta) {
    if (std::abs(t - lambda1) < dist) {
      dist = std::abs(t - lambda1);
      best = t;
    }
  }
  return best;
}

double compute_Fk(const std::vector<double>& theta, const std::vector<double>& spectrum) {
  if (spectrum.size() < 2 || theta.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double l1 = spectrum.front();
  const double t1 = closest_ritz(theta, l1);
  double F = 0.0;
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double den = std::abs(t1 - spectrum[k]);
    if (den < 1e-14) return std::numeric_limits<double>::infinity();
    F = std::max(F, std::abs(t1) / std::abs(l1) * std::abs(l1 - spectrum[k]) / den);
  }
  return F;
}

std::vector<Plateau> detect_plateaus(const std::vector<double>& r, int min_length, double min_reduction) {
  std::vector<Plateau> out;
  int run = 0;
  for (std::size_t k = 1; k <= r.size(); ++k) {
    const bool slow = k < r.size() && r[k] > (1.0 - min_reduction) * r[k - 1];
    if (slow) {
      ++run;
      continue;
    }
    if (run >= min_length) out.push_back({static_cast<int>(k) - run, run});
    run = 0;
  }
  return out;
}

}  // namespace sdlab
