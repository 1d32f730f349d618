#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <array>
#include <memory>

#include "sdlab/assembly.hpp"
#include "sdlab/frac_interface.hpp"
#include "sdlab/spaces.hpp"

namespace sdlab {

/// Exact inverse of the block-diagonal Riesz map N.
class BlockPreconditioner {
 public:
  /// Without `iface` the multiplier block of N is factorized like the others.
  BlockPreconditioner(const SparseMatrix& N, const BlockLayout& layout,
                      std::shared_ptr<const InterfaceOperator> iface = nullptr);

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;
  const BlockLayout& layout() const { return layout_; }

 private:
  BlockLayout layout_;
  std::array<std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>>, kFieldCount> blocks_;
  std::shared_ptr<const InterfaceOperator> iface_;
};

struct DeflationVectors {
  Eigen::MatrixXd P;   // one column per near-kernel mode, raw 0/1 entries
  double gamma = 1.0;  // scaling before the user multiplier
};

/// NE: ones on p_D and lambda; EN: ones on p_S and lambda; MultiInclusion: one
/// indicator per Darcy component. Other configurations give no columns.
DeflationVectors deflation_vectors(const BlockLayout& layout, BcConfig config, const PhysParams& params);

struct Deflation {
  Eigen::MatrixXd P;
  double gamma = 1.0;
  Eigen::MatrixXd E;  // gamma P^T N P
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::MatrixXd NP;  // N P, kept for the Woodbury form

  int columns() const { return static_cast<int>(P.cols()); }
};

/// Throws SolverError if E is not positive definite.
Deflation build_deflation(const SparseMatrix& N, const Eigen::MatrixXd& P, double gamma);

/// B r + P E^{-1} P^T r.
Eigen::VectorXd apply_deflated(const BlockPreconditioner& bp, const Deflation& defl, const Eigen::VectorXd& r);

/// Inverse of the deflated preconditioner, N - N P ((1 + gamma) P^T N P)^{-1} P^T N, as a dense matrix.
Eigen::MatrixXd deflated_riesz_dense(const SparseMatrix& N, const Deflation& defl);

}  // namespace sdlab
