#include "sdlab/frac_interface.hpp"

#include <cmath>

#include "sdlab/error.hpp"

namespace sdlab {

namespace {

Eigen::VectorXd symbol(const Eigen::VectorXd& d, double scale, double power) {
  Eigen::VectorXd s(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) s[i] = scale * std::pow(d[i], power);
  return s;
}

Eigen::MatrixXd spectral_matrix(const InterfaceSpectralBasis& b, const Eigen::VectorXd& s) {
  const Eigen::MatrixXd MU = b.M.asDiagonal() * b.U;
  Eigen::MatrixXd S = MU * s.asDiagonal() * MU.transpose();
  return 0.5 * (S + S.transpose());
}

}  // namespace

InterfaceSpectralBasis build_interface_basis(const InterfaceFacets& iface, EndpointBc bc) {
  const int n = static_cast<int>(iface.facets.size());
  if (n == 0) throw ConfigurationError("interface has no facets");
  InterfaceSpectralBasis b;
  b.bc = bc;
  b.M.resize(n);
  for (int i = 0; i < n; ++i) {
    b.M[i] = iface.facets[i].length;
    if (!(b.M[i] > 0.0)) throw ConfigurationError("zero-length interface facet");
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : iface.adjacency) {
    const Point a = iface.facets[i].midpoint, c = iface.facets[j].midpoint;
    const double w = 1.0 / std::hypot(a.x - c.x, a.y - c.y);
    L(i, i) += w;
    L(j, j) += w;
    L(i, j) -= w;
    L(j, i) -= w;
  }
  if (bc == EndpointBc::Zero) {
    for (int i = 0; i < n; ++i) L(i, i) += 2.0 * iface.endpoint_count[i] / b.M[i];
  }
  b.A_gamma = L;
  b.A_gamma.diagonal() += b.M;

  // Symmetric scaling reduces the diagonal-mass pencil to a standard problem.
  const Eigen::VectorXd r = b.M.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd C = r.asDiagonal() * b.A_gamma * r.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()));
  if (es.info() != Eigen::Success) throw AssemblyError("interface eigensolve failed");
  b.d = es.eigenvalues();
  b.U = r.asDiagonal() * es.eigenvectors();
  return b;
}

std::pair<EndpointBc, EndpointBc> endpoint_conditions(BcConfig config) {
  using E = EndpointBc;
  switch (config) {
    case BcConfig::NN: return {E::Free, E::Zero};
    case BcConfig::EE: return {E::Zero, E::Free};
    case BcConfig::NE:
    case BcConfig::NEstar: return {E::Free, E::Free};
    case BcConfig::EN:
    case BcConfig::ENstar: return {E::Zero, E::Zero};
    case BcConfig::MultiInclusion: return {E::Free, E::Free};
  }
  return {E::Free, E::Free};
}

Eigen::MatrixXd multiplier_block_matrix(const InterfaceSpectralBasis& basis, const PhysParams& params) {
  const Eigen::VectorXd s = symbol(basis.d, 1.0 / params.mu, -0.5) + symbol(basis.d, params.K, 0.5);
  return spectral_matrix(basis, s);
}

Eigen::VectorXd apply_S_inverse(const InterfaceSpectralBasis& basis, const PhysParams& params,
                                const Eigen::VectorXd& r) {
  const Eigen::VectorXd s = symbol(basis.d, 1.0 / params.mu, -0.5) + symbol(basis.d, params.K, 0.5);
  return basis.U * (basis.U.transpose() * r).cwiseQuotient(s);
}

InterfaceOperator::InterfaceOperator(const InterfaceFacets& iface, BcConfig config, const PhysParams& params)
    : params_(params) {
  params.validate();
  const auto [neg, pos] = endpoint_conditions(config);
  neg_ = build_interface_basis(iface, neg);
  spectral_ = neg == pos;
  if (spectral_) {
    pos_ = neg_;
    S_ = multiplier_block_matrix(neg_, params);
    return;
  }
  pos_ = build_interface_basis(iface, pos);
  S_ = spectral_matrix(neg_, symbol(neg_.d, 1.0 / params.mu, -0.5)) +
       spectral_matrix(pos_, symbol(pos_.d, params.K, 0.5));
  llt_.compute(S_);
  if (llt_.info() != Eigen::Success) throw AssemblyError("multiplier block is not positive definite");
}

Eigen::VectorXd InterfaceOperator::apply_inverse(const Eigen::VectorXd& r) const {
  if (spectral_) return apply_S_inverse(neg_, params_, r);
  return llt_.solve(r);
}

}  // namespace sdlab
