#include <cmath>
#include <random>

#include "doctest.h"
#include "sdlab/mesh.hpp"
#include "sdlab/quadrature.hpp"
#include "sdlab/spaces.hpp"

using namespace sdlab;

namespace {

Mesh stacked_mesh(int n0, int nref, BcConfig config) {
  DomainSpec s;
  s.stokes = {0, 0, 1, 1};
  s.darcy = {{0, 1, 1, 2}};
  s.base_divisions = n0;
  return tag_boundaries(build_coupled_mesh(s, nref), config);
}

Mesh side_mesh(int n0, BcConfig config) {
  DomainSpec s;
  s.stokes = {0, 0, 1, 1};
  s.darcy = {{1, 0, 2, 1}};
  s.base_divisions = n0;
  return tag_boundaries(build_coupled_mesh(s, 0), config);
}

}  // namespace

TEST_CASE("line and triangle rules integrate monomials exactly") {
  for (int degree = 0; degree <= 12; ++degree) {
    const LineRule line = line_rule(degree);
    double s = 0.0;
    for (std::size_t i = 0; i < line.nodes.size(); ++i) s += line.weights[i] * std::pow(line.nodes[i], degree);
    CHECK(s == doctest::Approx(1.0 / (degree + 1)).epsilon(1e-14));

    const auto rule = triangle_rule(degree);
    for (int a = 0; a <= degree; ++a) {
      const int b = degree - a;
      double t = 0.0;
      for (const auto& q : rule) t += q.weight * std::pow(q.xi, a) * std::pow(q.eta, b);
      // int x^a y^b over the reference triangle = a! b! / (a + b + 2)!
      const double exact = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
      CHECK(t == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("layout dimensions on the minimal stacked grid") {
  const Mesh m = stacked_mesh(1, 0, BcConfig::NE);
  const BlockLayout L = build_layout(m);
  CHECK(L.size[VelocityS] == 18);
  CHECK(L.size[PressureS] == 4);
  CHECK(L.size[VelocityD] == 5);
  CHECK(L.size[PressureD] == 2);
  CHECK(L.size[Multiplier] == 1);
  int sum = 0;
  for (int f = 0; f < kFieldCount; ++f) {
    CHECK(L.offset[f] == sum);
    sum += L.size[f];
  }
  CHECK(L.total == sum);
}

TEST_CASE("layout counts match mesh entities") {
  const Mesh m = stacked_mesh(4, 1, BcConfig::NN);
  const BlockLayout L = build_layout(m);
  int darcy_facets = 0, darcy_cells = 0;
  for (int f = 0; f < static_cast<int>(m.facets.size()); ++f) darcy_facets += L.rt_of_facet[f] >= 0;
  for (const auto& c : m.cells) darcy_cells += c.subdomain == Subdomain::Darcy;
  CHECK(L.size[VelocityD] == darcy_facets);
  CHECK(L.size[PressureD] == darcy_cells);
  CHECK(L.size[Multiplier] == static_cast<int>(m.interface.facets.size()));
  // Stable numbering.
  const BlockLayout again = build_layout(m);
  CHECK(again.node_of_facet == L.node_of_facet);
  CHECK(again.rt_facet == L.rt_facet);
}

TEST_CASE("essential dof counts") {
  SUBCASE("NN: Stokes left edge") {
    const Mesh m = side_mesh(4, BcConfig::NN);
    const BlockLayout L = build_layout(m);
    const EssentialDofs e = essential_dofs(L, m);
    int us = 0, ud = 0;
    for (int d : e.dofs) {
      us += d < L.end(VelocityS);
      ud += d >= L.begin(VelocityD) && d < L.end(VelocityD);
    }
    CHECK(us == 18);
    CHECK(ud == 4);
  }
  SUBCASE("EN: Darcy far edge") {
    const Mesh m = stacked_mesh(4, 0, BcConfig::EN);
    const BlockLayout L = build_layout(m);
    const EssentialDofs e = essential_dofs(L, m);
    int ud = 0;
    for (int d : e.dofs) ud += d >= L.begin(VelocityD) && d < L.end(VelocityD);
    CHECK(ud == 4);
  }
  SUBCASE("interface dofs are never constrained") {
    for (BcConfig c : {BcConfig::NN, BcConfig::EE, BcConfig::NE, BcConfig::EN, BcConfig::NEstar, BcConfig::ENstar}) {
      const Mesh m = stacked_mesh(4, 0, c);
      const BlockLayout L = build_layout(m);
      const EssentialDofs e = essential_dofs(L, m);
      for (const auto& gf : m.interface.facets) {
        CHECK_FALSE(e.contains(L.offset[VelocityD] + L.rt_of_facet[gf.facet]));
        CHECK_FALSE(e.contains(L.velocity_s(L.node_of_facet[gf.facet], 0)));
      }
      for (int d = L.begin(PressureS); d < L.total; ++d) CHECK_FALSE(e.contains(d));
    }
  }
}

TEST_CASE("P2 basis is nodal and reproduces quadratics") {
  const Mesh m = stacked_mesh(2, 0, BcConfig::NE);
  const BlockLayout L = build_layout(m);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto quad = [](Point p) { return 1.0 + 2.0 * p.x - p.y + 0.5 * p.x * p.x - 3.0 * p.x * p.y + p.y * p.y; };
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    if (m.cells[c].subdomain != Subdomain::Stokes) continue;
    const P2Cell e = p2_cell(m, L, c);
    for (int a = 0; a < 6; ++a) {
      const auto phi = p2_values(barycentric(m, c, L.node_point[e.node[a]]));
      for (int b = 0; b < 6; ++b) CHECK(phi[b] == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
    }
    double l1 = u(rng), l2 = u(rng);
    if (l1 + l2 > 1.0) {
      l1 = 1.0 - l1;
      l2 = 1.0 - l2;
    }
    const auto& v = m.cells[c].v;
    const Point a = m.vertices[v[0]], b = m.vertices[v[1]], cc = m.vertices[v[2]];
    const Point x{a.x + l1 * (b.x - a.x) + l2 * (cc.x - a.x), a.y + l1 * (b.y - a.y) + l2 * (cc.y - a.y)};
    const auto phi = p2_values(barycentric(m, c, x));
    double interp = 0.0;
    for (int k = 0; k < 6; ++k) interp += phi[k] * quad(L.node_point[e.node[k]]);
    CHECK(interp == doctest::Approx(quad(x)).epsilon(1e-13));
  }
}

TEST_CASE("RT0 functions have unit normal flux on their own edge and none elsewhere") {
  const Mesh m = stacked_mesh(2, 1, BcConfig::NE);
  const BlockLayout L = build_layout(m);
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    if (m.cells[c].subdomain != Subdomain::Darcy) continue;
    const RTCell e = rt_cell(m, L, c);
    for (int k = 0; k < 3; ++k) {
      const int f = L.rt_facet[e.dof[k]];
      const Point mid = facet_midpoint(m, f);
      const Point n = L.rt_normal[e.dof[k]];
      for (int j = 0; j < 3; ++j) {
        const Point v = e.value(j, mid);
        CHECK(v.x * n.x + v.y * n.y == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-13));
      }
    }
    // Divergence theorem: the cell integral of div equals the outward flux.
    for (int k = 0; k < 3; ++k) CHECK(e.divergence(k) * e.area == doctest::Approx(e.sign[k] * e.length[k]));
  }
}

TEST_CASE("RT0 interpolation of a constant field is exact") {
  const Mesh m = stacked_mesh(2, 1, BcConfig::NE);
  const BlockLayout L = build_layout(m);
  const Point w{0.3, -1.7};
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    if (m.cells[c].subdomain != Subdomain::Darcy) continue;
    const RTCell e = rt_cell(m, L, c);
    const AffineMap map = cell_map(m, c);
    const Point x = map(0.2, 0.3);
    Point s{0, 0};
    for (int k = 0; k < 3; ++k) {
      const Point n = L.rt_normal[e.dof[k]];
      const double dof = w.x * n.x + w.y * n.y;
      const Point v = e.value(k, x);
      s.x += dof * v.x;
      s.y += dof * v.y;
    }
    CHECK(s.x == doctest::Approx(w.x).epsilon(1e-13));
    CHECK(s.y == doctest::Approx(w.y).epsilon(1e-13));
  }
}

TEST_CASE("RT0 orientation: interface dofs point out of Darcy") {
  const Mesh m = stacked_mesh(4, 0, BcConfig::NE);
  const BlockLayout L = build_layout(m);
  for (const auto& gf : m.interface.facets) {
    const Point n = L.rt_normal[L.rt_of_facet[gf.facet]];
    CHECK(n.x * gf.normal.x + n.y * gf.normal.y == doctest::Approx(-1.0));
  }
}
