#include "sdlab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sdlab/error.hpp"

namespace sdlab {

LineRule gauss_legendre(int npoints) {
  if (npoints < 1) throw ConfigurationError("Gauss-Legendre rule needs at least one point");
  LineRule rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  const int n = npoints;
  // Legendre value and derivative at x.
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

LineRule line_rule(int degree) { return gauss_legendre(std::max(1, (degree + 2) / 2)); }

std::vector<QuadPoint> triangle_rule(int degree) {
  // The Duffy factor (1 - s) raises the degree in s by one.
  const LineRule g = gauss_legendre(std::max(1, (degree + 3) / 2));
  std::vector<QuadPoint> out;
  out.reserve(g.nodes.size() * g.nodes.size());
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const double s = g.nodes[a];
    for (std::size_t b = 0; b < g.nodes.size(); ++b) {
      const double t = g.nodes[b];
      out.push_back({s, (1.0 - s) * t, g.weights[a] * g.weights[b] * (1.0 - s)});
    }
  }
  return out;
}

AffineMap cell_map(const Mesh& mesh, int cell) {
  const auto& v = mesh.cells[cell].v;
  const Point a = mesh.vertices[v[0]], b = mesh.vertices[v[1]], c = mesh.vertices[v[2]];
  AffineMap m;
  m.origin = a;
  m.j00 = b.x - a.x;
  m.j01 = c.x - a.x;
  m.j10 = b.y - a.y;
  m.j11 = c.y - a.y;
  m.det = m.j00 * m.j11 - m.j01 * m.j10;
  return m;
}

}  // namespace sdlab
