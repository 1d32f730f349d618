#pragma once

#include <array>
#include <vector>

#include "sdlab/mesh.hpp"

namespace sdlab {

/// Block order of the coupled unknowns.
enum Field : int { VelocityS = 0, VelocityD = 1, PressureS = 2, PressureD = 3, Multiplier = 4 };

inline constexpr int kFieldCount = 5;

struct BlockLayout {
  std::array<int, kFieldCount> size{};
  std::array<int, kFieldCount> offset{};
  int total = 0;

  // P2 nodes on the Stokes submesh: vertices first, then edges.
  std::vector<int> node_of_vertex;  // global vertex -> P2 node, -1 off the Stokes submesh
  std::vector<int> node_of_facet;   // global facet -> P2 node, -1 off the Stokes submesh
  std::vector<Point> node_point;    // P2 node coordinates
  int p2_nodes = 0;

  std::vector<int> p1_of_vertex;  // global vertex -> local p_S index
  std::vector<int> p1_vertex;     // local p_S index -> global vertex

  std::vector<int> rt_of_facet;   // global facet -> local u_D index
  std::vector<int> rt_facet;      // local u_D index -> global facet
  std::vector<Point> rt_normal;   // oriented unit normal of each u_D dof

  std::vector<int> p0_of_cell;    // global cell -> local p_D index
  std::vector<int> p0_cell;
  std::vector<int> p0_component;  // Darcy component of each p_D dof

  std::vector<int> lambda_of_facet;  // global facet -> local λ index (interface position)
  std::vector<int> lambda_component;

  int begin(Field f) const { return offset[f]; }
  int end(Field f) const { return offset[f] + size[f]; }
  /// Global index of velocity component `comp` at P2 node `node`.
  int velocity_s(int node, int comp) const { return offset[VelocityS] + 2 * node + comp; }
};

BlockLayout build_layout(const Mesh& mesh);

struct EssentialDofs {
  std::vector<int> dofs;     // sorted global indices
  std::vector<char> mask;    // size layout.total
  bool contains(int dof) const { return mask[dof] != 0; }
};

/// Velocity dofs on essential facets: every P2 node in the closure of a
/// Stokes essential facet and every RT0 dof on a Darcy essential facet.
EssentialDofs essential_dofs(const BlockLayout& layout, const Mesh& mesh);

/// Cell-local data shared by assembly, error norms and interpolation.
struct P2Cell {
  std::array<int, 6> node{};           // 3 vertices, then the edges opposite them
  std::array<Point, 3> grad_bary{};    // constant barycentric gradients
  double area = 0.0;
};

P2Cell p2_cell(const Mesh& mesh, const BlockLayout& layout, int cell);

std::array<double, 3> barycentric(const Mesh& mesh, int cell, Point x);
std::array<double, 6> p2_values(const std::array<double, 3>& bary);
std::array<Point, 6> p2_gradients(const std::array<double, 3>& bary, const std::array<Point, 3>& grad_bary);

/// Lowest-order Raviart-Thomas functions phi_k = sign_k |e_k| / (2|T|) (x - a_k),
/// with unit normal flux through edge k along the global orientation.
struct RTCell {
  std::array<int, 3> dof{};  // local u_D index per edge
  std::array<double, 3> sign{};
  std::array<Point, 3> vertex{};
  std::array<double, 3> length{};
  double area = 0.0;

  Point value(int k, Point x) const {
    const double s = sign[k] * length[k] / (2.0 * area);
    return {s * (x.x - vertex[k].x), s * (x.y - vertex[k].y)};
  }
  double divergence(int k) const { return sign[k] * length[k] / area; }
};

RTCell rt_cell(const Mesh& mesh, const BlockLayout& layout, int cell);

}  // namespace sdlab
