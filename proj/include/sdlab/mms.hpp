#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "sdlab/assembly.hpp"
#include "sdlab/mesh.hpp"
#include "sdlab/spaces.hpp"

namespace sdlab {

/// Manufactured solution on Omega_S = (0,1)^2, Omega_D = (0,1)x(1,2):
/// u_S = curl cos(pi(x+y)), p_S = sin(2pi(x-y)), p_D = sin(2pi(x-2y)), u_D = -K grad p_D.
struct ExactSolution {
  PhysParams params;

  Point u_S(Point x) const;
  std::array<double, 4> grad_u_S(Point x) const;  // (du1/dx, du1/dy, du2/dx, du2/dy)
  double p_S(Point x) const;
  Point f_S(Point x) const;
  /// sigma(u_S, p_S) n.
  Point traction(Point x, Point n) const;
  double p_D(Point x) const;
  Point u_D(Point x) const;
  double div_u_D(Point x) const;

  // Interface defects for the Stokes-to-Darcy normal n; tau = (-n_y, n_x).
  double g_gamma(Point x, Point n) const;
  double t_n(Point x, Point n) const;
  double t_t(Point x, Point n) const;
};

/// Volume, interface and boundary data reproducing the exact solution.
LoadData mms_sources(const PhysParams& params);

/// Unit squares stacked along y.
DomainSpec mms_domain(int base_divisions = 4);

struct MmsRow {
  double h = 0.0;
  int nref = 0;
  int dofs = 0;
  std::array<double, 4> error{};  // |grad(u_S)|, |p_S|, |div u_D|, |p_D| in L2
};

MmsRow compute_errors(const Eigen::VectorXd& x, const Mesh& mesh, const BlockLayout& layout,
                      const PhysParams& params);

/// Exact solution interpolated into the discrete spaces: nodal P2/P1, mean
/// normal flux for RT0, cell and facet means for P0 fields.
Eigen::VectorXd interpolate_exact(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params);

/// log2(e(h) / e(h/2)) for consecutive rows; empty for a single row.
std::vector<std::array<double, 4>> convergence_rates(const std::vector<MmsRow>& rows);

}  // namespace sdlab
