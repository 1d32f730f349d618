#pragma once

#include <vector>

#include "sdlab/mesh.hpp"

namespace sdlab {

struct QuadPoint {
  double xi = 0.0;
  double eta = 0.0;
  double weight = 0.0;  // weights sum to 1/2 on the reference triangle
};

/// Gauss-Legendre nodes and weights on [0, 1].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

LineRule gauss_legendre(int npoints);

/// Rule exact for polynomials of the given total degree on the line [0, 1].
LineRule line_rule(int degree);

/// Collapsed Gauss rule on the reference triangle (0,0),(1,0),(0,1),
/// exact for polynomials of total degree `degree`.
std::vector<QuadPoint> triangle_rule(int degree);

/// Reference-to-physical affine map of a cell.
struct AffineMap {
  Point origin;
  double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;  // columns are edge vectors
  double det = 0.0;

  Point operator()(double xi, double eta) const {
    return {origin.x + j00 * xi + j01 * eta, origin.y + j10 * xi + j11 * eta};
  }
};

AffineMap cell_map(const Mesh& mesh, int cell);

}  // namespace sdlab
