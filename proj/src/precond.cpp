#include "sdlab/precond.hpp"

#include "sdlab/error.hpp"

namespace sdlab {

BlockPreconditioner::BlockPreconditioner(const SparseMatrix& N, const BlockLayout& layout,
                                         std::shared_ptr<const InterfaceOperator> iface)
    : layout_(layout), iface_(std::move(iface)) {
  if (N.rows() != layout.total || N.cols() != layout.total) throw SolverError("Riesz map has the wrong size");
  for (int b = 0; b < kFieldCount; ++b) {
    const Field f = static_cast<Field>(b);
    if (layout.size[b] == 0 || (f == Multiplier && iface_)) continue;
    blocks_[b] = std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>(block(N, layout, f, f));
    if (blocks_[b]->info() != Eigen::Success) {
      throw SolverError("preconditioner block " + std::to_string(b) + " is not positive definite");
    }
  }
}

Eigen::VectorXd BlockPreconditioner::apply(const Eigen::VectorXd& r) const {
  Eigen::VectorXd z(r.size());
  for (int b = 0; b < kFieldCount; ++b) {
    const int off = layout_.offset[b], n = layout_.size[b];
    if (n == 0) continue;
    if (blocks_[b]) {
      z.segment(off, n) = blocks_[b]->solve(r.segment(off, n));
    } else {
      z.segment(off, n) = iface_->apply_inverse(r.segment(off, n));
    }
  }
  return z;
}

DeflationVectors deflation_vectors(const BlockLayout& L, BcConfig config, const PhysParams& params) {
  DeflationVectors out;
  out.P.resize(L.total, 0);
  const double muK = params.mu * params.K;
  auto ones = [&](Eigen::MatrixXd& P, int col, Field f) { P.col(col).segment(L.offset[f], L.size[f]).setOnes(); };
  switch (config) {
    case BcConfig::NE:
      out.P = Eigen::MatrixXd::Zero(L.total, 1);
      ones(out.P, 0, PressureD);
      ones(out.P, 0, Multiplier);
      out.gamma = 1.0 / muK;
      break;
    case BcConfig::EN:
      out.P = Eigen::MatrixXd::Zero(L.total, 1);
      ones(out.P, 0, PressureS);
      ones(out.P, 0, Multiplier);
      out.gamma = muK;
      break;
    case BcConfig::MultiInclusion: {
      int m = 0;
      for (int c : L.p0_component) m = std::max(m, c + 1);
      out.P = Eigen::MatrixXd::Zero(L.total, m);
      for (int k = 0; k < L.size[PressureD]; ++k) out.P(L.offset[PressureD] + k, L.p0_component[k]) = 1.0;
      for (int k = 0; k < L.size[Multiplier]; ++k) out.P(L.offset[Multiplier] + k, L.lambda_component[k]) = 1.0;
      out.gamma = 1.0 / muK;
      break;
    }
    default:
      break;
  }
  return out;
}

Deflation build_deflation(const SparseMatrix& N, const Eigen::MatrixXd& P, double gamma) {
  if (!(gamma > 0.0)) throw SolverError("deflation scaling must be positive");
  Deflation d;
  d.P = P;
  d.gamma = gamma;
  if (P.cols() == 0) return d;
  d.NP = N * P;
  const Eigen::MatrixXd PtNP = P.transpose() * d.NP;
  d.E = gamma * 0.5 * (PtNP + PtNP.transpose());
  d.llt.compute(d.E);
  if (d.llt.info() != Eigen::Success) throw SolverError("deflation matrix is not positive definite");
  return d;
}

Eigen::VectorXd apply_deflated(const BlockPreconditioner& bp, const Deflation& defl, const Eigen::VectorXd& r) {
  Eigen::VectorXd z = bp.apply(r);
  if (defl.columns() > 0) z += defl.P * defl.llt.solve(defl.P.transpose() * r);
  return z;
}

Eigen::MatrixXd deflated_riesz_dense(const SparseMatrix& N, const Deflation& defl) {
  Eigen::MatrixXd out = Eigen::MatrixXd(N);
  if (defl.columns() == 0) return out;
  const Eigen::MatrixXd G = (1.0 + defl.gamma) * (defl.P.transpose() * defl.NP);
  const Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (G + G.transpose()));
  out -= defl.NP * llt.solve(defl.NP.transpose());
  return 0.5 * (out + out.transpose());
}

}  // namespace sdlab
