#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>

#include "sdlab/mesh.hpp"
#include "sdlab/spaces.hpp"

namespace sdlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct PhysParams {
  double mu = 1.0;
  double K = 1.0;
  double alpha_bjs = 0.5;

  /// BJS weight for scalar isotropic K.
  double beta_tau() const;
  void validate() const;
};

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;
/// Interface data as a function of position and the Stokes-to-Darcy normal.
using InterfaceField = std::function<double(Point, Point)>;

/// Volume, interface and boundary data. Empty fields are zero.
/// On the interface the tangent is tau = (-n_y, n_x) for n = n_S.
struct LoadData {
  VectorField f_S;
  ScalarField g_D;
  InterfaceField g_gamma;  // added to u_S.n_S + u_D.n_D
  InterfaceField t_n;      // added to the normal stress balance
  InterfaceField t_t;      // added to the BJS law
  std::function<Point(Point, Point)> traction;  // sigma.n on Stokes natural facets (x, outward n)
  ScalarField darcy_pressure;                   // p_D on Darcy natural facets
  VectorField stokes_velocity;                  // u_S on Stokes essential facets
  VectorField darcy_velocity;                   // u_D whose normal flux is imposed on Darcy essential facets
  int degree = 8;
};

/// Coupled operator without essential elimination.
SparseMatrix assemble_operator_raw(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params);

/// Coupled symmetric operator with essential rows and columns replaced by identity.
SparseMatrix assemble_operator(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params,
                               const EssentialDofs& essential);

/// Block-diagonal Riesz map; `S` is the dense multiplier block.
/// Throws AssemblyError when a block fails a Cholesky factorization.
SparseMatrix assemble_riesz(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params,
                            const EssentialDofs& essential, const Eigen::MatrixXd& S);

/// Load vector before essential lifting.
Eigen::VectorXd assemble_load(const Mesh& mesh, const BlockLayout& layout, const LoadData& data);

/// Interpolated essential values: nodal u_S, facet-average normal flux of u_D. Zero off the set.
Eigen::VectorXd essential_values(const Mesh& mesh, const BlockLayout& layout, const LoadData& data,
                                 const EssentialDofs& essential);

/// Load vector with essential values lifted into the remaining rows.
Eigen::VectorXd assemble_rhs(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params,
                             const LoadData& data, const EssentialDofs& essential);

/// Diagonal block of a block-diagonal matrix.
SparseMatrix block(const SparseMatrix& M, const BlockLayout& layout, Field row, Field col);

}  // namespace sdlab
