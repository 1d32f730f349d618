#include "sdlab/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace sdlab {

namespace {

// Outward unit normal of `cell` across its local edge k.
Point outward_normal(const Mesh& mesh, int cell, int k) {
  const auto& v = mesh.cells[cell].v;
  const Point a = mesh.vertices[v[(k + 1) % 3]];
  const Point b = mesh.vertices[v[(k + 2) % 3]];
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  return {(b.y - a.y) / len, -(b.x - a.x) / len};
}

int local_edge(const Cell& cell, int facet) {
  for (int k = 0; k < 3; ++k) {
    if (cell.facets[k] == facet) return k;
  }
  return -1;
}

}  // namespace

BlockLayout build_layout(const Mesh& mesh) {
  BlockLayout L;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nf = static_cast<int>(mesh.facets.size());
  const int nc = static_cast<int>(mesh.cells.size());
  L.node_of_vertex.assign(nv, -1);
  L.node_of_facet.assign(nf, -1);
  L.p1_of_vertex.assign(nv, -1);
  L.rt_of_facet.assign(nf, -1);
  L.p0_of_cell.assign(nc, -1);
  L.lambda_of_facet.assign(nf, -1);

  std::vector<char> stokes_vertex(nv, 0), stokes_facet(nf, 0), darcy_facet(nf, 0);
  for (const auto& cell : mesh.cells) {
    auto& facet_flag = cell.subdomain == Subdomain::Stokes ? stokes_facet : darcy_facet;
    for (int k = 0; k < 3; ++k) {
      facet_flag[cell.facets[k]] = 1;
      if (cell.subdomain == Subdomain::Stokes) stokes_vertex[cell.v[k]] = 1;
    }
  }

  for (int v = 0; v < nv; ++v) {
    if (!stokes_vertex[v]) continue;
    L.node_of_vertex[v] = L.p2_nodes++;
    L.node_point.push_back(mesh.vertices[v]);
    L.p1_of_vertex[v] = static_cast<int>(L.p1_vertex.size());
    L.p1_vertex.push_back(v);
  }
  for (int f = 0; f < nf; ++f) {
    if (!stokes_facet[f]) continue;
    L.node_of_facet[f] = L.p2_nodes++;
    L.node_point.push_back(facet_midpoint(mesh, f));
  }

  for (int f = 0; f < nf; ++f) {
    if (!darcy_facet[f]) continue;
    const auto& facet = mesh.facets[f];
    // Interior Darcy facets point from the lower to the higher cell, all others out of Darcy.
    int from = facet.cells[0];
    if (facet.cells[1] >= 0 && mesh.cells[from].subdomain != Subdomain::Darcy) from = facet.cells[1];
    L.rt_of_facet[f] = static_cast<int>(L.rt_facet.size());
    L.rt_facet.push_back(f);
    L.rt_normal.push_back(outward_normal(mesh, from, local_edge(mesh.cells[from], f)));
  }

  for (int c = 0; c < nc; ++c) {
    if (mesh.cells[c].subdomain != Subdomain::Darcy) continue;
    L.p0_of_cell[c] = static_cast<int>(L.p0_cell.size());
    L.p0_cell.push_back(c);
    L.p0_component.push_back(mesh.cells[c].component);
  }

  for (int i = 0; i < static_cast<int>(mesh.interface.facets.size()); ++i) {
    L.lambda_of_facet[mesh.interface.facets[i].facet] = i;
    L.lambda_component.push_back(mesh.interface.facets[i].component);
  }

  L.size = {2 * L.p2_nodes, static_cast<int>(L.rt_facet.size()), static_cast<int>(L.p1_vertex.size()),
            static_cast<int>(L.p0_cell.size()), static_cast<int>(mesh.interface.facets.size())};
  int offset = 0;
  for (int b = 0; b < kFieldCount; ++b) {
    L.offset[b] = offset;
    offset += L.size[b];
  }
  L.total = offset;
  return L;
}

EssentialDofs essential_dofs(const BlockLayout& layout, const Mesh& mesh) {
  EssentialDofs out;
  out.mask.assign(layout.total, 0);
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const auto& facet = mesh.facets[f];
    if (facet.tag == FacetTag::StokesEssential) {
      for (int node : {layout.node_of_vertex[facet.v[0]], layout.node_of_vertex[facet.v[1]],
                       layout.node_of_facet[f]}) {
        out.mask[layout.velocity_s(node, 0)] = 1;
        out.mask[layout.velocity_s(node, 1)] = 1;
      }
    } else if (facet.tag == FacetTag::DarcyEssential) {
      out.mask[layout.offset[VelocityD] + layout.rt_of_facet[f]] = 1;
    }
  }
  for (int i = 0; i < layout.total; ++i) {
    if (out.mask[i]) out.dofs.push_back(i);
  }
  return out;
}

P2Cell p2_cell(const Mesh& mesh, const BlockLayout& layout, int cell) {
  const Cell& c = mesh.cells[cell];
  P2Cell out;
  out.area = cell_area(mesh, cell);
  for (int k = 0; k < 3; ++k) {
    out.node[k] = layout.node_of_vertex[c.v[k]];
    out.node[3 + k] = layout.node_of_facet[c.facets[k]];
    // Gradient of the barycentric coordinate of vertex k: rotated opposite edge over 2|T|.
    const Point a = mesh.vertices[c.v[(k + 1) % 3]];
    const Point b = mesh.vertices[c.v[(k + 2) % 3]];
    out.grad_bary[k] = {(a.y - b.y) / (2.0 * out.area), (b.x - a.x) / (2.0 * out.area)};
  }
  return out;
}

std::array<double, 3> barycentric(const Mesh& mesh, int cell, Point x) {
  const auto& v = mesh.cells[cell].v;
  const Point a = mesh.vertices[v[0]], b = mesh.vertices[v[1]], c = mesh.vertices[v[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((x.x - a.x) * (c.y - a.y) - (c.x - a.x) * (x.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (x.y - a.y) - (x.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[1] * l[2],         4.0 * l[2] * l[0],         4.0 * l[0] * l[1]};
}

std::array<Point, 6> p2_gradients(const std::array<double, 3>& l, const std::array<Point, 3>& g) {
  std::array<Point, 6> out{};
  for (int k = 0; k < 3; ++k) {
    const double s = 4.0 * l[k] - 1.0;
    out[k] = {s * g[k].x, s * g[k].y};
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    out[3 + k] = {4.0 * (l[j] * g[i].x + l[i] * g[j].x), 4.0 * (l[j] * g[i].y + l[i] * g[j].y)};
  }
  return out;
}

RTCell rt_cell(const Mesh& mesh, const BlockLayout& layout, int cell) {
  const Cell& c = mesh.cells[cell];
  RTCell out;
  out.area = cell_area(mesh, cell);
  for (int k = 0; k < 3; ++k) {
    const int f = c.facets[k];
    out.dof[k] = layout.rt_of_facet[f];
    out.vertex[k] = mesh.vertices[c.v[k]];
    out.length[k] = facet_length(mesh, f);
    const Point n = outward_normal(mesh, cell, k);
    const Point g = layout.rt_normal[out.dof[k]];
    out.sign[k] = (n.x * g.x + n.y * g.y) > 0.0 ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace sdlab
