#include "sdlab/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "sdlab/error.hpp"
#include "sdlab/quadrature.hpp"

namespace sdlab {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Adds (i, j) and (j, i) with the same value.
void add_pair(Triplets& t, int i, int j, double v) {
  t.emplace_back(i, j, v);
  t.emplace_back(j, i, v);
}

Point tangent(Point n) { return {-n.y, n.x}; }

// Stokes velocity form 2mu(eps, eps) + beta (T_t u, T_t v)_Gamma.
void stokes_velocity(const Mesh& mesh, const BlockLayout& L, const PhysParams& P, Triplets& t) {
  const auto rule = triangle_rule(2);  // gradients of P2 are linear
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    if (mesh.cells[c].subdomain != Subdomain::Stokes) continue;
    const P2Cell e = p2_cell(mesh, L, c);
    double local[12][12] = {};
    for (const auto& q : rule) {
      const std::array<double, 3> l{1.0 - q.xi - q.eta, q.xi, q.eta};
      const auto g = p2_gradients(l, e.grad_bary);
      const double w = q.weight * 2.0 * e.area;
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
          const double ga[2] = {g[a].x, g[a].y}, gb[2] = {g[b].x, g[b].y};
          const double dot = ga[0] * gb[0] + ga[1] * gb[1];
          for (int ci = 0; ci < 2; ++ci) {
            for (int di = 0; di < 2; ++di) {
              local[2 * a + ci][2 * b + di] += w * P.mu * ((ci == di ? dot : 0.0) + ga[di] * gb[ci]);
            }
          }
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) {
        t.emplace_back(L.velocity_s(e.node[i / 2], i % 2), L.velocity_s(e.node[j / 2], j % 2), local[i][j]);
      }
    }
  }

  const double beta = P.beta_tau();
  const LineRule line = line_rule(4);
  for (const auto& gf : mesh.interface.facets) {
    const P2Cell e = p2_cell(mesh, L, gf.stokes_cell);
    const Facet& f = mesh.facets[gf.facet];
    const Point a = mesh.vertices[f.v[0]], b = mesh.vertices[f.v[1]];
    const Point tau = tangent(gf.normal);
    const double tc[2] = {tau.x, tau.y};
    double local[12][12] = {};
    for (std::size_t k = 0; k < line.nodes.size(); ++k) {
      const double s = line.nodes[k];
      const Point x{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
      const auto phi = p2_values(barycentric(mesh, gf.stokes_cell, x));
      const double w = line.weights[k] * gf.length * beta;
      for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
          local[i][j] += w * phi[i / 2] * tc[i % 2] * phi[j / 2] * tc[j % 2];
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) {
        t.emplace_back(L.velocity_s(e.node[i / 2], i % 2), L.velocity_s(e.node[j / 2], j % 2), local[i][j]);
      }
    }
  }
}

// K^{-1} (u, v)_D, plus K^{-1} (div u, div v)_D when `with_div`.
void darcy_velocity(const Mesh& mesh, const BlockLayout& L, const PhysParams& P, bool with_div, Triplets& t) {
  const auto rule = triangle_rule(2);
  const int off = L.offset[VelocityD];
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    if (mesh.cells[c].subdomain != Subdomain::Darcy) continue;
    const RTCell e = rt_cell(mesh, L, c);
    const AffineMap map = cell_map(mesh, c);
    double local[3][3] = {};
    for (const auto& q : rule) {
      const Point x = map(q.xi, q.eta);
      const double w = q.weight * 2.0 * e.area / P.K;
      for (int i = 0; i < 3; ++i) {
        const Point vi = e.value(i, x);
        for (int j = 0; j < 3; ++j) {
          const Point vj = e.value(j, x);
          local[i][j] += w * (vi.x * vj.x + vi.y * vj.y);
        }
      }
    }
    if (with_div) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local[i][j] += e.area * e.divergence(i) * e.divergence(j) / P.K;
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.emplace_back(off + e.dof[i], off + e.dof[j], local[i][j]);
    }
  }
}

// Divergence constraints and interface coupling, added symmetrically.
void constraints(const Mesh& mesh, const BlockLayout& L, Triplets& t) {
  const auto rule = triangle_rule(2);
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    if (mesh.cells[c].subdomain == Subdomain::Stokes) {
      const P2Cell e = p2_cell(mesh, L, c);
      const auto& v = mesh.cells[c].v;
      double local[12][3] = {};
      for (const auto& q : rule) {
        const std::array<double, 3> l{1.0 - q.xi - q.eta, q.xi, q.eta};
        const auto g = p2_gradients(l, e.grad_bary);
        const double w = q.weight * 2.0 * e.area;
        for (int a = 0; a < 6; ++a) {
          for (int j = 0; j < 3; ++j) {
            local[2 * a][j] -= w * g[a].x * l[j];
            local[2 * a + 1][j] -= w * g[a].y * l[j];
          }
        }
      }
      for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 3; ++j) {
          add_pair(t, L.velocity_s(e.node[i / 2], i % 2), L.offset[PressureS] + L.p1_of_vertex[v[j]], local[i][j]);
        }
      }
    } else {
      const RTCell e = rt_cell(mesh, L, c);
      const int p = L.offset[PressureD] + L.p0_of_cell[c];
      for (int k = 0; k < 3; ++k) {
        add_pair(t, L.offset[VelocityD] + e.dof[k], p, -e.divergence(k) * e.area);
      }
    }
  }

  const LineRule line = line_rule(4);
  for (int i = 0; i < static_cast<int>(mesh.interface.facets.size()); ++i) {
    const auto& gf = mesh.interface.facets[i];
    const int lam = L.offset[Multiplier] + i;
    const P2Cell e = p2_cell(mesh, L, gf.stokes_cell);
    const Facet& f = mesh.facets[gf.facet];
    const Point a = mesh.vertices[f.v[0]], b = mesh.vertices[f.v[1]];
    double local[12] = {};
    for (std::size_t k = 0; k < line.nodes.size(); ++k) {
      const double s = line.nodes[k];
      const Point x{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
      const auto phi = p2_values(barycentric(mesh, gf.stokes_cell, x));
      const double w = line.weights[k] * gf.length;
      for (int n = 0; n < 6; ++n) {
        local[2 * n] += w * phi[n] * gf.normal.x;
        local[2 * n + 1] += w * phi[n] * gf.normal.y;
      }
    }
    for (int n = 0; n < 12; ++n) add_pair(t, L.velocity_s(e.node[n / 2], n % 2), lam, local[n]);
    // The RT0 dof is oriented out of Darcy, so T_n v_D = -1 on this facet.
    add_pair(t, L.offset[VelocityD] + L.rt_of_facet[gf.facet], lam, gf.length);
  }
}

SparseMatrix from_triplets(int n, const Triplets& t, const EssentialDofs* essential) {
  Triplets kept;
  const Triplets* use = &t;
  if (essential) {
    kept.reserve(t.size() + essential->dofs.size());
    for (const auto& e : t) {
      if (!essential->contains(e.row()) && !essential->contains(e.col())) kept.push_back(e);
    }
    for (int d : essential->dofs) kept.emplace_back(d, d, 1.0);
    use = &kept;
  }
  SparseMatrix M(n, n);
  M.setFromTriplets(use->begin(), use->end());
  SparseMatrix Mt = M.transpose();
  SparseMatrix out = 0.5 * (M + Mt);
  out.prune(0.0);
  out.makeCompressed();
  return out;
}

Triplets operator_triplets(const Mesh& mesh, const BlockLayout& L, const PhysParams& P) {
  P.validate();
  Triplets t;
  stokes_velocity(mesh, L, P, t);
  darcy_velocity(mesh, L, P, false, t);
  constraints(mesh, L, t);
  return t;
}

template <class F>
void for_line(const Mesh& mesh, int facet, int degree, F&& body) {
  const Facet& f = mesh.facets[facet];
  const Point a = mesh.vertices[f.v[0]], b = mesh.vertices[f.v[1]];
  const double len = facet_length(mesh, facet);
  const LineRule line = line_rule(degree);
  for (std::size_t k = 0; k < line.nodes.size(); ++k) {
    const double s = line.nodes[k];
    body(Point{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}, line.weights[k] * len);
  }
}

// Outward normal of the single cell adjacent to a boundary facet.
Point boundary_normal(const Mesh& mesh, int facet) {
  const int c = mesh.facets[facet].cells[0];
  const Cell& cell = mesh.cells[c];
  int k = 0;
  while (cell.facets[k] != facet) ++k;
  const Point a = mesh.vertices[cell.v[(k + 1) % 3]];
  const Point b = mesh.vertices[cell.v[(k + 2) % 3]];
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  return {(b.y - a.y) / len, -(b.x - a.x) / len};
}

}  // namespace

double PhysParams::beta_tau() const { return alpha_bjs * std::sqrt(mu / K); }

void PhysParams::validate() const {
  if (!(mu > 0.0) || !(K > 0.0) || !(alpha_bjs > 0.0) || !std::isfinite(mu) || !std::isfinite(K) ||
      !std::isfinite(alpha_bjs)) {
    throw ConfigurationError("mu, K and alpha_bjs must be positive and finite");
  }
}

SparseMatrix assemble_operator_raw(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params) {
  return from_triplets(layout.total, operator_triplets(mesh, layout, params), nullptr);
}

SparseMatrix assemble_operator(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params,
                               const EssentialDofs& essential) {
  return from_triplets(layout.total, operator_triplets(mesh, layout, params), &essential);
}

SparseMatrix assemble_riesz(const Mesh& mesh, const BlockLayout& L, const PhysParams& P,
                            const EssentialDofs& essential, const Eigen::MatrixXd& S) {
  P.validate();
  if (S.rows() != L.size[Multiplier] || S.cols() != L.size[Multiplier]) {
    throw AssemblyError("multiplier block has the wrong size");
  }
  Triplets t;
  stokes_velocity(mesh, L, P, t);
  darcy_velocity(mesh, L, P, true, t);

  // (2 mu)^{-1} P1 mass.
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    if (mesh.cells[c].subdomain != Subdomain::Stokes) continue;
    const auto& v = mesh.cells[c].v;
    const double area = cell_area(mesh, c);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double m = area / 12.0 * (i == j ? 2.0 : 1.0);
        t.emplace_back(L.offset[PressureS] + L.p1_of_vertex[v[i]], L.offset[PressureS] + L.p1_of_vertex[v[j]],
                       m / (2.0 * P.mu));
      }
    }
  }
  for (int k = 0; k < L.size[PressureD]; ++k) {
    const int d = L.offset[PressureD] + k;
    t.emplace_back(d, d, P.K * cell_area(mesh, L.p0_cell[k]));
  }
  const int off = L.offset[Multiplier];
  for (int i = 0; i < S.rows(); ++i) {
    for (int j = 0; j < S.cols(); ++j) t.emplace_back(off + i, off + j, S(i, j));
  }
  SparseMatrix N = from_triplets(L.total, t, &essential);

  const char* names[kFieldCount] = {"u_S", "u_D", "p_S", "p_D", "lambda"};
  for (int b = 0; b < kFieldCount; ++b) {
    if (L.size[b] == 0) continue;
    const Field f = static_cast<Field>(b);
    Eigen::SimplicialLLT<SparseMatrix> llt(block(N, L, f, f));
    if (llt.info() != Eigen::Success) {
      throw AssemblyError(std::string("Riesz block ") + names[b] + " is not positive definite");
    }
  }
  return N;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const BlockLayout& L, const LoadData& data) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(L.total);
  const auto rule = triangle_rule(data.degree);

  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const AffineMap map = cell_map(mesh, c);
    const double area = cell_area(mesh, c);
    if (mesh.cells[c].subdomain == Subdomain::Stokes) {
      if (!data.f_S) continue;
      const P2Cell e = p2_cell(mesh, L, c);
      for (const auto& q : rule) {
        const Point x = map(q.xi, q.eta);
        const Point f = data.f_S(x);
        const auto phi = p2_values({1.0 - q.xi - q.eta, q.xi, q.eta});
        const double w = q.weight * 2.0 * area;
        for (int a = 0; a < 6; ++a) {
          rhs[L.velocity_s(e.node[a], 0)] += w * f.x * phi[a];
          rhs[L.velocity_s(e.node[a], 1)] += w * f.y * phi[a];
        }
      }
    } else if (data.g_D) {
      double sum = 0.0;
      for (const auto& q : rule) sum += q.weight * 2.0 * area * data.g_D(map(q.xi, q.eta));
      rhs[L.offset[PressureD] + L.p0_of_cell[c]] -= sum;
    }
  }

  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& facet = mesh.facets[f];
    if (facet.tag == FacetTag::StokesNatural && data.traction) {
      const int c = facet.cells[0];
      const P2Cell e = p2_cell(mesh, L, c);
      const Point n = boundary_normal(mesh, f);
      for_line(mesh, f, data.degree, [&](Point x, double w) {
        const Point tr = data.traction(x, n);
        const auto phi = p2_values(barycentric(mesh, c, x));
        for (int a = 0; a < 6; ++a) {
          rhs[L.velocity_s(e.node[a], 0)] += w * tr.x * phi[a];
          rhs[L.velocity_s(e.node[a], 1)] += w * tr.y * phi[a];
        }
      });
    } else if (facet.tag == FacetTag::DarcyNatural && data.darcy_pressure) {
      double sum = 0.0;
      for_line(mesh, f, data.degree, [&](Point x, double w) { sum += w * data.darcy_pressure(x); });
      rhs[L.offset[VelocityD] + L.rt_of_facet[f]] -= sum;
    }
  }

  for (int i = 0; i < static_cast<int>(mesh.interface.facets.size()); ++i) {
    const auto& gf = mesh.interface.facets[i];
    const Point n = gf.normal, tau = tangent(n);
    if (data.g_gamma) {
      double sum = 0.0;
      for_line(mesh, gf.facet, data.degree, [&](Point x, double w) { sum += w * data.g_gamma(x, n); });
      rhs[L.offset[Multiplier] + i] += sum;
    }
    if (data.t_n || data.t_t) {
      const P2Cell e = p2_cell(mesh, L, gf.stokes_cell);
      for_line(mesh, gf.facet, data.degree, [&](Point x, double w) {
        const double tn = data.t_n ? data.t_n(x, n) : 0.0;
        const double tt = data.t_t ? data.t_t(x, n) : 0.0;
        const Point tr{tn * n.x + tt * tau.x, tn * n.y + tt * tau.y};
        const auto phi = p2_values(barycentric(mesh, gf.stokes_cell, x));
        for (int a = 0; a < 6; ++a) {
          rhs[L.velocity_s(e.node[a], 0)] += w * tr.x * phi[a];
          rhs[L.velocity_s(e.node[a], 1)] += w * tr.y * phi[a];
        }
      });
    }
  }
  return rhs;
}

Eigen::VectorXd essential_values(const Mesh& mesh, const BlockLayout& L, const LoadData& data,
                                 const EssentialDofs& essential) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(L.total);
  if (data.stokes_velocity) {
    for (int node = 0; node < L.p2_nodes; ++node) {
      if (!essential.contains(L.velocity_s(node, 0))) continue;
      const Point u = data.stokes_velocity(L.node_point[node]);
      g[L.velocity_s(node, 0)] = u.x;
      g[L.velocity_s(node, 1)] = u.y;
    }
  }
  if (data.darcy_velocity) {
    for (int k = 0; k < L.size[VelocityD]; ++k) {
      const int dof = L.offset[VelocityD] + k;
      if (!essential.contains(dof)) continue;
      const int f = L.rt_facet[k];
      const Point n = L.rt_normal[k];
      double flux = 0.0;
      for_line(mesh, f, data.degree, [&](Point x, double w) {
        const Point u = data.darcy_velocity(x);
        flux += w * (u.x * n.x + u.y * n.y);
      });
      g[dof] = flux / facet_length(mesh, f);
    }
  }
  return g;
}

Eigen::VectorXd assemble_rhs(const Mesh& mesh, const BlockLayout& layout, const PhysParams& params,
                             const LoadData& data, const EssentialDofs& essential) {
  Eigen::VectorXd rhs = assemble_load(mesh, layout, data);
  const Eigen::VectorXd g = essential_values(mesh, layout, data, essential);
  if (g.squaredNorm() > 0.0) rhs -= assemble_operator_raw(mesh, layout, params) * g;
  for (int d : essential.dofs) rhs[d] = g[d];
  return rhs;
}

SparseMatrix block(const SparseMatrix& M, const BlockLayout& layout, Field row, Field col) {
  return M.block(layout.offset[row], layout.offset[col], layout.size[row], layout.size[col]);
}

}  // namespace sdlab
