#include "sdlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdlab/error.hpp"

namespace sdlab {

namespace {

std::vector<int> free_dofs(Eigen::Index n, const EssentialDofs* essential) {
  std::vector<int> out;
  out.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!essential || !essential->contains(static_cast<int>(i))) out.push_back(static_cast<int>(i));
  }
  return out;
}

Eigen::MatrixXd restrict_dense(const Eigen::MatrixXd& M, const std::vector<int>& idx) {
  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd out(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) out(i, j) = M(idx[i], idx[j]);
  }
  return out;
}

Eigen::MatrixXd restrict_sparse(const SparseMatrix& M, const std::vector<int>& idx) {
  std::vector<int> pos(M.rows(), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(idx.size(), idx.size());
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(M, k); it; ++it) {
      const int r = pos[it.row()], c = pos[it.col()];
      if (r >= 0 && c >= 0) out(r, c) = it.value();
    }
  }
  return out;
}

Spectrum reduce_and_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& N, int eliminated, int drop) {
  Eigen::LLT<Eigen::MatrixXd> llt(N);
  if (llt.info() != Eigen::Success) throw SolverError("Riesz map is not positive definite");
  // C = L^{-1} A L^{-T}
  Eigen::MatrixXd C = llt.matrixL().solve(A);
  C = llt.matrixL().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolve failed");
  std::vector<double> values(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  values.insert(values.end(), eliminated, 1.0);
  return make_spectrum(std::move(values), drop, eliminated);
}

void check_budget(std::size_t n, int budget) {
  if (static_cast<long>(n) > budget) {
    throw BudgetError("dense eigensolve of dimension " + std::to_string(n) + " exceeds the budget of " +
                      std::to_string(budget) + "; use a coarser mesh");
  }
}

}  // namespace

double Hull::rate() const {
  const double ad = std::sqrt(std::abs(a * d)), bc = std::sqrt(std::abs(b * c));
  return (ad - bc) / (ad + bc);
}

Spectrum generalized_eigs(const SparseMatrix& A, const SparseMatrix& N, const EssentialDofs* essential, int drop,
                          int budget) {
  const auto idx = free_dofs(A.rows(), essential);
  check_budget(idx.size(), budget);
  return reduce_and_solve(restrict_sparse(A, idx), restrict_sparse(N, idx),
                          static_cast<int>(A.rows() - idx.size()), drop);
}

Spectrum generalized_eigs(const SparseMatrix& A, const Eigen::MatrixXd& N, const EssentialDofs* essential, int drop,
                          int budget) {
  const auto idx = free_dofs(A.rows(), essential);
  check_budget(idx.size(), budget);
  return reduce_and_solve(restrict_sparse(A, idx), restrict_dense(N, idx), static_cast<int>(A.rows() - idx.size()),
                          drop);
}

Spectrum make_spectrum(std::vector<double> values, int drop, int eliminated) {
  std::stable_sort(values.begin(), values.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  Spectrum s;
  s.eigenvalues = std::move(values);
  s.eliminated = eliminated;
  s.drop = drop;
  const auto cn = condition_numbers(s, drop);
  s.kappa = cn.kappa;
  s.kappa_eff = cn.kappa_eff;
  s.hull = spectral_hull(s.eigenvalues, drop);
  return s;
}

ConditionNumbers condition_numbers(const Spectrum& spec, int drop) {
  const auto& e = spec.eigenvalues;
  if (drop < 0 || static_cast<int>(e.size()) < drop + 1) {
    throw ConfigurationError("spectrum has fewer than drop + 1 eigenvalues");
  }
  const double top = std::abs(e.back());
  return {top / std::abs(e.front()), top / std::abs(e[drop])};
}

Hull spectral_hull(const std::vector<double>& e, int drop) {
  Hull h;
  double a = 0.0, b = -std::numeric_limits<double>::infinity();
  double c = std::numeric_limits<double>::infinity(), d = 0.0;
  for (std::size_t i = drop; i < e.size(); ++i) {
    const double x = e[i];
    if (x < 0.0) {
      a = std::min(a, x);
      b = std::max(b, x);
    } else if (x > 0.0) {
      c = std::min(c, x);
      d = std::max(d, x);
    }
  }
  h.a = a;
  h.b = std::isfinite(b) ? b : 0.0;
  h.c = std::isfinite(c) ? c : 0.0;
  h.d = d;
  return h;
}

BoundCheck check_residual_bound(const SolveLog& log, const Hull& hull) {
  BoundCheck out;
  const double rho = hull.rate();
  const auto& r = log.residuals;
  if (r.empty() || r.front() == 0.0) return out;
  for (std::size_t m = 1; m < r.size() && m - 1 < log.Fk.size(); ++m) {
    const double F = log.Fk[m - 1];
    if (!std::isfinite(F)) continue;
    for (std::size_t k = m; k < r.size(); ++k) {
      const double bound = 2.0 * F * std::pow(rho, static_cast<double>((k - m) / 2));
      const double observed = r[k] / r.front();
      ++out.pairs_checked;
      out.worst_ratio = std::max(out.worst_ratio, observed / bound);
      if (observed > bound) ++out.violations;
    }
  }
  out.holds = out.violations == 0;
  return out;
}

}  // namespace sdlab
