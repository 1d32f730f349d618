#include "sdlab/mms.hpp"

#include <cmath>
#include <numbers>

#include "sdlab/quadrature.hpp"

namespace sdlab {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

Point ExactSolution::u_S(Point x) const {
  const double s = std::sin(pi * (x.x + x.y));
  return {-pi * s, pi * s};
}

std::array<double, 4> ExactSolution::grad_u_S(Point x) const {
  const double c = pi * pi * std::cos(pi * (x.x + x.y));
  return {-c, -c, c, c};
}

double ExactSolution::p_S(Point x) const { return std::sin(2.0 * pi * (x.x - x.y)); }

Point ExactSolution::f_S(Point x) const {
  const double v = -2.0 * params.mu * pi * pi * pi * std::sin(pi * (x.x + x.y)) +
                   2.0 * pi * std::cos(2.0 * pi * (x.x - x.y));
  return {v, -v};
}

Point ExactSolution::traction(Point x, Point n) const {
  // eps = pi^2 cos(pi(x+y)) diag(-1, 1)
  const double e = pi * pi * std::cos(pi * (x.x + x.y));
  const double p = p_S(x);
  const double s11 = -2.0 * params.mu * e - p, s22 = 2.0 * params.mu * e - p;
  return {s11 * n.x, s22 * n.y};
}

double ExactSolution::p_D(Point x) const { return std::sin(2.0 * pi * (x.x - 2.0 * x.y)); }

Point ExactSolution::u_D(Point x) const {
  const double g = 2.0 * pi * std::cos(2.0 * pi * (x.x - 2.0 * x.y));
  return {-params.K * g, 2.0 * params.K * g};
}

double ExactSolution::div_u_D(Point x) const { return 20.0 * pi * pi * params.K * p_D(x); }

double ExactSolution::g_gamma(Point x, Point n) const {
  const Point us = u_S(x), ud = u_D(x);
  return (us.x - ud.x) * n.x + (us.y - ud.y) * n.y;
}

double ExactSolution::t_n(Point x, Point n) const {
  const Point t = traction(x, n);
  return t.x * n.x + t.y * n.y + p_D(x);
}

double ExactSolution::t_t(Point x, Point n) const {
  const Point tau{-n.y, n.x};
  const Point t = traction(x, n), u = u_S(x);
  return t.x * tau.x + t.y * tau.y + params.beta_tau() * (u.x * tau.x + u.y * tau.y);
}

LoadData mms_sources(const PhysParams& params) {
  const ExactSolution ex{params};
  LoadData d;
  d.f_S = [ex](Point x) { return ex.f_S(x); };
  d.g_D = [ex](Point x) { return ex.div_u_D(x); };
  d.g_gamma = [ex](Point x, Point n) { return ex.g_gamma(x, n); };
  d.t_n = [ex](Point x, Point n) { return ex.t_n(x, n); };
  d.t_t = [ex](Point x, Point n) { return ex.t_t(x, n); };
  d.traction = [ex](Point x, Point n) { return ex.traction(x, n); };
  d.darcy_pressure = [ex](Point x) { return ex.p_D(x); };
  d.stokes_velocity = [ex](Point x) { return ex.u_S(x); };
  d.darcy_velocity = [ex](Point x) { return ex.u_D(x); };
  d.degree = 8;
  return d;
}

DomainSpec mms_domain(int base_divisions) {
  DomainSpec spec;
  spec.stokes = {0.0, 0.0, 1.0, 1.0};
  spec.darcy = {{0.0, 1.0, 1.0, 2.0}};
  spec.base_divisions = base_divisions;
  return spec;
}

MmsRow compute_errors(const Eigen::VectorXd& x, const Mesh& mesh, const BlockLayout& L, const PhysParams& params) {
  const ExactSolution ex{params};
  const auto rule = triangle_rule(8);
  std::array<double, 4> sq{};
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const AffineMap map = cell_map(mesh, c);
    const double area = cell_area(mesh, c);
    if (mesh.cells[c].subdomain == Subdomain::Stokes) {
      const P2Cell e = p2_cell(mesh, L, c);
      const auto& v = mesh.cells[c].v;
      for (const auto& q : rule) {
        const Point p = map(q.xi, q.eta);
        const std::array<double, 3> l{1.0 - q.xi - q.eta, q.xi, q.eta};
        const auto g = p2_gradients(l, e.grad_bary);
        std::array<double, 4> gh{};
        for (int a = 0; a < 6; ++a) {
          const double u0 = x[L.velocity_s(e.node[a], 0)], u1 = x[L.velocity_s(e.node[a], 1)];
          gh[0] += u0 * g[a].x;
          gh[1] += u0 * g[a].y;
          gh[2] += u1 * g[a].x;
          gh[3] += u1 * g[a].y;
        }
        double ph = 0.0;
        for (int k = 0; k < 3; ++k) ph += l[k] * x[L.offset[PressureS] + L.p1_of_vertex[v[k]]];
        const auto ge = ex.grad_u_S(p);
        const double w = q.weight * 2.0 * area;
        for (int k = 0; k < 4; ++k) sq[0] += w * (ge[k] - gh[k]) * (ge[k] - gh[k]);
        sq[1] += w * (ex.p_S(p) - ph) * (ex.p_S(p) - ph);
      }
    } else {
      const RTCell e = rt_cell(mesh, L, c);
      double div_h = 0.0;
      for (int k = 0; k < 3; ++k) div_h += x[L.offset[VelocityD] + e.dof[k]] * e.divergence(k);
      const double ph = x[L.offset[PressureD] + L.p0_of_cell[c]];
      for (const auto& q : rule) {
        const Point p = map(q.xi, q.eta);
        const double w = q.weight * 2.0 * area;
        sq[2] += w * (ex.div_u_D(p) - div_h) * (ex.div_u_D(p) - div_h);
        sq[3] += w * (ex.p_D(p) - ph) * (ex.p_D(p) - ph);
      }
    }
  }
  MmsRow row;
  row.h = mesh.h;
  row.nref = mesh.nref;
  row.dofs = L.total;
  for (int k = 0; k < 4; ++k) row.error[k] = std::sqrt(sq[k]);
  return row;
}

Eigen::VectorXd interpolate_exact(const Mesh& mesh, const BlockLayout& L, const PhysParams& params) {
  const ExactSolution ex{params};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.total);
  for (int node = 0; node < L.p2_nodes; ++node) {
    const Point u = ex.u_S(L.node_point[node]);
    x[L.velocity_s(node, 0)] = u.x;
    x[L.velocity_s(node, 1)] = u.y;
  }
  for (int k = 0; k < L.size[PressureS]; ++k) x[L.offset[PressureS] + k] = ex.p_S(mesh.vertices[L.p1_vertex[k]]);

  const LineRule line = line_rule(8);
  auto facet_mean = [&](int f, auto&& fn) {
    const Point a = mesh.vertices[mesh.facets[f].v[0]], b = mesh.vertices[mesh.facets[f].v[1]];
    double sum = 0.0;
    for (std::size_t q = 0; q < line.nodes.size(); ++q) {
      const double s = line.nodes[q];
      sum += line.weights[q] * fn(Point{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
    }
    return sum;
  };
  for (int k = 0; k < L.size[VelocityD]; ++k) {
    const Point n = L.rt_normal[k];
    x[L.offset[VelocityD] + k] = facet_mean(L.rt_facet[k], [&](Point p) {
      const Point u = ex.u_D(p);
      return u.x * n.x + u.y * n.y;
    });
  }
  const auto rule = triangle_rule(8);
  for (int k = 0; k < L.size[PressureD]; ++k) {
    const AffineMap map = cell_map(mesh, L.p0_cell[k]);
    double sum = 0.0;
    for (const auto& q : rule) sum += 2.0 * q.weight * ex.p_D(map(q.xi, q.eta));
    x[L.offset[PressureD] + k] = sum;
  }
  for (int i = 0; i < L.size[Multiplier]; ++i) {
    x[L.offset[Multiplier] + i] =
        facet_mean(mesh.interface.facets[i].facet, [&](Point p) { return ex.p_D(p); });
  }
  return x;
}

std::vector<std::array<double, 4>> convergence_rates(const std::vector<MmsRow>& rows) {
  std::vector<std::array<double, 4>> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::array<double, 4> r{};
    for (int k = 0; k < 4; ++k) {
      r[k] = std::log2(rows[i - 1].error[k] / rows[i].error[k]) / std::log2(rows[i - 1].h / rows[i].h);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace sdlab
