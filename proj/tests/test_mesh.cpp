#include <cmath>
#include <map>

#include "doctest.h"
#include "json.hpp"
#include "sdlab/error.hpp"
#include "sdlab/experiments.hpp"
#include "sdlab/mesh.hpp"

using namespace sdlab;

namespace {

DomainSpec stacked(int n0) {
  DomainSpec s;
  s.stokes = {0, 0, 1, 1};
  s.darcy = {{0, 1, 1, 2}};
  s.base_divisions = n0;
  return s;
}

DomainSpec side_by_side(int n0) {
  DomainSpec s;
  s.stokes = {0, 0, 1, 1};
  s.darcy = {{1, 0, 2, 1}};
  s.base_divisions = n0;
  return s;
}

std::map<FacetTag, int> count_outer(const Mesh& m, Subdomain sub) {
  std::map<FacetTag, int> out;
  for (const auto& f : m.facets) {
    if (f.cells[1] >= 0 || f.tag == FacetTag::Interface) continue;
    if (m.cells[f.cells[0]].subdomain == sub) ++out[f.tag];
  }
  return out;
}

}  // namespace

TEST_CASE("mesh size h matches the coarse error table rows") {
  const Mesh m0 = build_coupled_mesh(mms_domain(), 0);
  CHECK(m0.h == doctest::Approx(std::sqrt(2.0) / 4.0));
  CHECK(m0.h == doctest::Approx(3.54e-1).epsilon(1e-3));
  const Mesh m1 = build_coupled_mesh(mms_domain(), 1);
  CHECK(m1.h == doctest::Approx(1.77e-1).epsilon(1e-3));
  CHECK(m1.cells.size() == 4 * m0.cells.size());
}

TEST_CASE("minimal grid with one square per subdomain") {
  const Mesh m = build_coupled_mesh(mms_domain(1), 0);
  CHECK(m.cells.size() == 4);
  CHECK(m.vertices.size() == 6);
  CHECK(m.facets.size() == 9);
  CHECK(m.interface.facets.size() == 1);
}

TEST_CASE("off-lattice rectangles are rejected") {
  DomainSpec s = stacked(4);
  s.darcy[0].y1 = 1.9;
  CHECK_THROWS_AS(build_coupled_mesh(s, 0), ConfigurationError);
  DomainSpec overlap = stacked(4);
  overlap.darcy[0].y0 = 0.5;
  CHECK_THROWS_AS(build_coupled_mesh(overlap, 0), ConfigurationError);
}

TEST_CASE("cell areas sum to the domain area") {
  for (int nref = 0; nref < 3; ++nref) {
    const Mesh m = build_coupled_mesh(stacked(4), nref);
    double sum = 0.0;
    for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
      CHECK(cell_area(m, c) > 0.0);
      sum += cell_area(m, c);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("NN tags on side-by-side squares") {
  const Mesh m = tag_boundaries(build_coupled_mesh(side_by_side(4), 0), BcConfig::NN);
  for (const auto& f : m.facets) {
    if (f.cells[1] >= 0 || f.tag == FacetTag::Interface) continue;
    const bool stokes = m.cells[f.cells[0]].subdomain == Subdomain::Stokes;
    if (stokes) {
      CHECK(f.tag == (f.side == Side::Left ? FacetTag::StokesEssential : FacetTag::StokesNatural));
    } else {
      CHECK(f.tag == (f.side == Side::Right ? FacetTag::DarcyEssential : FacetTag::DarcyNatural));
    }
  }
}

TEST_CASE("every outer facet gets exactly one tag") {
  for (BcConfig c : {BcConfig::NN, BcConfig::EE, BcConfig::NEstar, BcConfig::ENstar, BcConfig::NE, BcConfig::EN}) {
    const Mesh m = tag_boundaries(build_coupled_mesh(stacked(4), 1), c);
    int outer = 0, tagged = 0;
    for (const auto& f : m.facets) {
      if (f.cells[1] >= 0) continue;
      ++outer;
      tagged += f.tag != FacetTag::Untagged && f.tag != FacetTag::Interior && f.tag != FacetTag::Interface;
    }
    CHECK(outer == 48);
    CHECK(tagged == outer);
  }
}

TEST_CASE("EN facet counts on the stacked squares") {
  // Darcy: left and right edges touch the interface (natural), top is far (essential).
  const Mesh m = tag_boundaries(build_coupled_mesh(stacked(4), 0), BcConfig::EN);
  auto d = count_outer(m, Subdomain::Darcy);
  CHECK(d[FacetTag::DarcyNatural] == 8);
  CHECK(d[FacetTag::DarcyEssential] == 4);
  auto s = count_outer(m, Subdomain::Stokes);
  CHECK(s[FacetTag::StokesEssential] == 12);
}

TEST_CASE("interface facets are ordered with lengths summing to the interface") {
  for (int nref : {0, 2}) {
    const Mesh m = build_coupled_mesh(stacked(4), nref);
    const auto& iface = m.interface;
    CHECK(iface.facets.size() == (nref == 0 ? 4u : 16u));
    double len = 0.0;
    for (std::size_t i = 0; i < iface.facets.size(); ++i) {
      len += iface.facets[i].length;
      CHECK(iface.facets[i].normal.x == doctest::Approx(0.0));
      CHECK(iface.facets[i].normal.y == doctest::Approx(1.0));
      if (i > 0) CHECK(iface.facets[i].arclength > iface.facets[i - 1].arclength);
    }
    CHECK(len == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(iface.pieces == 1);
    CHECK(iface.endpoint_count.front() == 1);
    CHECK(iface.endpoint_count.back() == 1);
  }
  CHECK(build_coupled_mesh(stacked(4), 0).interface.facets[0].length == doctest::Approx(0.25));
}

TEST_CASE("an interior inclusion gives a closed loop with outward-from-Stokes normals") {
  DomainSpec s;
  s.stokes = {0, 0, 3, 3};
  s.darcy = {{1, 1, 2, 2}};
  s.base_divisions = 4;
  const Mesh m = build_coupled_mesh(s, 0);
  CHECK(m.inclusions);
  CHECK(m.interface.facets.size() == 16);
  for (std::size_t i = 0; i < m.interface.facets.size(); ++i) {
    const auto& f = m.interface.facets[i];
    CHECK(m.interface.endpoint_count[i] == 0);
    // Stokes-to-Darcy normal points toward the inclusion centre.
    const double dx = 1.5 - f.midpoint.x, dy = 1.5 - f.midpoint.y;
    CHECK(f.normal.x * dx + f.normal.y * dy > 0.0);
  }
}

TEST_CASE("two inclusions form two interface pieces") {
  const Mesh m = tag_boundaries(build_coupled_mesh(floating_domain(2), 1), BcConfig::MultiInclusion);
  CHECK(m.darcy_components == 2);
  CHECK(m.interface.pieces == 2);
  CHECK_THROWS_AS(tag_boundaries(build_coupled_mesh(floating_domain(2), 0), BcConfig::NE), ConfigurationError);
}

TEST_CASE("refinement keeps tags on the parent edges") {
  const Mesh c = tag_boundaries(build_coupled_mesh(stacked(4), 0), BcConfig::NE);
  const Mesh f = tag_boundaries(build_coupled_mesh(stacked(4), 2), BcConfig::NE);
  auto tag_at = [](const Mesh& m, Point p) {
    for (int i = 0; i < static_cast<int>(m.facets.size()); ++i) {
      const Point a = m.vertices[m.facets[i].v[0]], b = m.vertices[m.facets[i].v[1]];
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) /
                       ((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y));
      if (std::abs(cross) < 1e-12 && t >= 0.0 && t <= 1.0) return m.facets[i].tag;
    }
    return FacetTag::Untagged;
  };
  for (int i = 0; i < static_cast<int>(f.facets.size()); ++i) {
    if (f.facets[i].cells[1] >= 0 && f.facets[i].tag != FacetTag::Interface) continue;
    const Point p = facet_midpoint(f, i);
    CHECK(tag_at(c, p) == f.facets[i].tag);
  }
}

TEST_CASE("configuration names round-trip") {
  for (BcConfig c : {BcConfig::NN, BcConfig::EE, BcConfig::NEstar, BcConfig::ENstar, BcConfig::NE, BcConfig::EN,
                     BcConfig::MultiInclusion}) {
    CHECK(parse_bc_config(to_string(c)) == c);
  }
  CHECK(parse_bc_config("NESTAR") == BcConfig::NEstar);
  CHECK_THROWS_AS(parse_bc_config("XY"), ConfigurationError);
  CHECK(near_kernel_dimension(BcConfig::NE) == 1);
  CHECK(near_kernel_dimension(BcConfig::NEstar) == 0);
}

TEST_CASE("mesh JSON lists every entity") {
  const Mesh m = tag_boundaries(build_coupled_mesh(stacked(1), 0), BcConfig::NE);
  const auto j = nlohmann::json::parse(mesh_to_json(m));
  CHECK(j["vertices"].size() == m.vertices.size());
  CHECK(j["cells"].size() == m.cells.size());
  CHECK(j["facets"].size() == m.facets.size());
  CHECK(j["interface"].size() == 1);
}
