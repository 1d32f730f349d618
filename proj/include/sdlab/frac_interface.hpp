#pragma once

#include <Eigen/Dense>
#include <utility>

#include "sdlab/assembly.hpp"
#include "sdlab/mesh.hpp"

namespace sdlab {

enum class EndpointBc { Free, Zero };

/// Generalized eigenpairs of (L + M, M) on the P0 multiplier space, where L is
/// the midpoint finite-volume Laplacian and M = diag(|F|).
struct InterfaceSpectralBasis {
  Eigen::VectorXd M;         // facet lengths
  Eigen::MatrixXd A_gamma;   // L + M
  Eigen::MatrixXd U;         // M-orthonormal eigenvectors, columns
  Eigen::VectorXd d;         // ascending eigenvalues
  EndpointBc bc = EndpointBc::Free;
};

InterfaceSpectralBasis build_interface_basis(const InterfaceFacets& iface, EndpointBc bc);

/// Endpoint conditions of the (mu^{-1} d^{-1/2}, K d^{1/2}) terms for a configuration.
std::pair<EndpointBc, EndpointBc> endpoint_conditions(BcConfig config);

/// S = M U diag(mu^{-1} d^{-1/2} + K d^{1/2}) U^T M for a single basis.
Eigen::MatrixXd multiplier_block_matrix(const InterfaceSpectralBasis& basis, const PhysParams& params);

/// U diag(1/s) U^T r, the exact inverse of multiplier_block_matrix.
Eigen::VectorXd apply_S_inverse(const InterfaceSpectralBasis& basis, const PhysParams& params,
                                const Eigen::VectorXd& r);

/// Multiplier block for a configuration. When both terms share an endpoint
/// condition the inverse is spectral; otherwise the summed matrix is factorized.
class InterfaceOperator {
 public:
  InterfaceOperator(const InterfaceFacets& iface, BcConfig config, const PhysParams& params);

  const Eigen::MatrixXd& matrix() const { return S_; }
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& r) const;
  bool spectral() const { return spectral_; }
  const InterfaceSpectralBasis& negative_basis() const { return neg_; }
  const InterfaceSpectralBasis& positive_basis() const { return pos_; }

 private:
  PhysParams params_;
  InterfaceSpectralBasis neg_, pos_;
  Eigen::MatrixXd S_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool spectral_ = true;
};

}  // namespace sdlab
