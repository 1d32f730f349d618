#include "sdlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "json.hpp"
#include "sdlab/error.hpp"

namespace sdlab {

namespace {

constexpr double kLatticeTol = 1e-9;

struct LatticeRect {
  long i0, j0, i1, j1;

  bool contains_square(long i, long j) const { return i >= i0 && i < i1 && j >= j0 && j < j1; }
};

long to_lattice(double coord, int n0, int scale) {
  const double t = coord * n0;
  const double r = std::round(t);
  if (std::abs(t - r) > kLatticeTol) {
    throw ConfigurationError("rectangle corner " + std::to_string(coord) +
                             " is not on the lattice of spacing 1/" + std::to_string(n0));
  }
  return static_cast<long>(r) * scale;
}

LatticeRect to_lattice(const Rect& r, int n0, int scale) {
  LatticeRect out{to_lattice(r.x0, n0, scale), to_lattice(r.y0, n0, scale),
                  to_lattice(r.x1, n0, scale), to_lattice(r.y1, n0, scale)};
  if (out.i1 <= out.i0 || out.j1 <= out.j0) {
    throw ConfigurationError("degenerate rectangle");
  }
  return out;
}

bool strictly_inside(const LatticeRect& inner, const LatticeRect& outer) {
  return inner.i0 > outer.i0 && inner.i1 < outer.i1 && inner.j0 > outer.j0 && inner.j1 < outer.j1;
}

bool closures_disjoint(const LatticeRect& a, const LatticeRect& b) {
  return a.i1 < b.i0 || b.i1 < a.i0 || a.j1 < b.j0 || b.j1 < a.j0;
}

bool interiors_disjoint(const LatticeRect& a, const LatticeRect& b) {
  return a.i1 <= b.i0 || b.i1 <= a.i0 || a.j1 <= b.j0 || b.j1 <= a.j0;
}

// Side of `a` on which a full common edge with `b` lies.
std::optional<Side> shared_full_edge(const LatticeRect& a, const LatticeRect& b) {
  const bool same_x = a.i0 == b.i0 && a.i1 == b.i1;
  const bool same_y = a.j0 == b.j0 && a.j1 == b.j1;
  if (same_x && a.j1 == b.j0) return Side::Top;
  if (same_x && a.j0 == b.j1) return Side::Bottom;
  if (same_y && a.i1 == b.i0) return Side::Right;
  if (same_y && a.i0 == b.i1) return Side::Left;
  return std::nullopt;
}

Side opposite(Side s) {
  switch (s) {
    case Side::Left: return Side::Right;
    case Side::Right: return Side::Left;
    case Side::Bottom: return Side::Top;
    case Side::Top: return Side::Bottom;
  }
  return s;
}

std::optional<Side> side_of(const Rect& r, Point m, double tol) {
  if (std::abs(m.x - r.x0) < tol) return Side::Left;
  if (std::abs(m.x - r.x1) < tol) return Side::Right;
  if (std::abs(m.y - r.y0) < tol) return Side::Bottom;
  if (std::abs(m.y - r.y1) < tol) return Side::Top;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(BcConfig config) {
  switch (config) {
    case BcConfig::NN: return "NN";
    case BcConfig::EE: return "EE";
    case BcConfig::NEstar: return "NE*";
    case BcConfig::ENstar: return "EN*";
    case BcConfig::NE: return "NE";
    case BcConfig::EN: return "EN";
    case BcConfig::MultiInclusion: return "multi-inclusion";
  }
  return "?";
}

BcConfig parse_bc_config(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "NN") return BcConfig::NN;
  if (s == "EE") return BcConfig::EE;
  if (s == "NE*" || s == "NESTAR") return BcConfig::NEstar;
  if (s == "EN*" || s == "ENSTAR") return BcConfig::ENstar;
  if (s == "NE") return BcConfig::NE;
  if (s == "EN") return BcConfig::EN;
  if (s == "MULTI-INCLUSION" || s == "MULTIINCLUSION" || s == "FLOATING") return BcConfig::MultiInclusion;
  throw ConfigurationError("unknown boundary configuration '" + std::string(name) + "'");
}

int near_kernel_dimension(BcConfig config) {
  return (config == BcConfig::NE || config == BcConfig::EN) ? 1 : 0;
}

std::string_view to_string(FacetTag tag) {
  switch (tag) {
    case FacetTag::Interior: return "interior";
    case FacetTag::Interface: return "interface";
    case FacetTag::StokesEssential: return "stokes_essential";
    case FacetTag::StokesNatural: return "stokes_natural";
    case FacetTag::DarcyEssential: return "darcy_essential";
    case FacetTag::DarcyNatural: return "darcy_natural";
    case FacetTag::Untagged: return "untagged";
  }
  return "?";
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

double cell_area(const Mesh& mesh, int cell) {
  const auto& v = mesh.cells[cell].v;
  const Point a = mesh.vertices[v[0]], b = mesh.vertices[v[1]], c = mesh.vertices[v[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double facet_length(const Mesh& mesh, int facet) {
  const Point a = mesh.vertices[mesh.facets[facet].v[0]];
  const Point b = mesh.vertices[mesh.facets[facet].v[1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

Point facet_midpoint(const Mesh& mesh, int facet) {
  const Point a = mesh.vertices[mesh.facets[facet].v[0]];
  const Point b = mesh.vertices[mesh.facets[facet].v[1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

Mesh build_coupled_mesh(const DomainSpec& spec, int nref) {
  if (nref < 0) throw ConfigurationError("nref must be non-negative");
  if (spec.base_divisions < 1) throw ConfigurationError("base_divisions must be positive");
  if (spec.darcy.empty()) throw ConfigurationError("at least one Darcy rectangle is required");

  const int n0 = spec.base_divisions;
  const int scale = 1 << nref;
  const long n = static_cast<long>(n0) * scale;

  const LatticeRect stokes = to_lattice(spec.stokes, n0, scale);
  std::vector<LatticeRect> darcy;
  for (const auto& r : spec.darcy) darcy.push_back(to_lattice(r, n0, scale));

  const bool inclusions = strictly_inside(darcy.front(), stokes);
  for (std::size_t k = 0; k < darcy.size(); ++k) {
    if (inclusions) {
      if (!strictly_inside(darcy[k], stokes)) {
        throw ConfigurationError("mixing inclusions and edge-sharing Darcy rectangles is not supported");
      }
    } else {
      if (!interiors_disjoint(darcy[k], stokes) || !shared_full_edge(stokes, darcy[k])) {
        throw ConfigurationError("Darcy rectangle must share one full edge with the Stokes rectangle");
      }
    }
    for (std::size_t l = 0; l < k; ++l) {
      const bool ok = inclusions ? closures_disjoint(darcy[k], darcy[l])
                                 : interiors_disjoint(darcy[k], darcy[l]);
      if (!ok) throw ConfigurationError("Darcy rectangles overlap or touch");
    }
  }

  long i_min = stokes.i0, i_max = stokes.i1, j_min = stokes.j0, j_max = stokes.j1;
  for (const auto& d : darcy) {
    i_min = std::min(i_min, d.i0);
    i_max = std::max(i_max, d.i1);
    j_min = std::min(j_min, d.j0);
    j_max = std::max(j_max, d.j1);
  }
  const long nx = i_max - i_min, ny = j_max - j_min;

  // Region of every lattice square: -2 outside, -1 Stokes, k >= 0 Darcy component.
  std::vector<int> region(static_cast<std::size_t>(nx * ny), -2);
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const long gi = i + i_min, gj = j + j_min;
      int r = -2;
      for (std::size_t k = 0; k < darcy.size(); ++k) {
        if (darcy[k].contains_square(gi, gj)) r = static_cast<int>(k);
      }
      if (r == -2 && stokes.contains_square(gi, gj)) r = -1;
      region[j * nx + i] = r;
    }
  }

  Mesh mesh;
  mesh.spec = spec;
  mesh.nref = nref;
  mesh.spacing = 1.0 / static_cast<double>(n);
  mesh.h = std::sqrt(2.0) * mesh.spacing;
  mesh.darcy_components = static_cast<int>(darcy.size());
  mesh.inclusions = inclusions;

  // Vertices in lexicographic (row-major) lattice order.
  const long px = nx + 1;
  std::vector<int> vertex_id(static_cast<std::size_t>(px * (ny + 1)), -1);
  auto touch = [&](long i, long j) { vertex_id[j * px + i] = 0; };
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      if (region[j * nx + i] == -2) continue;
      touch(i, j);
      touch(i + 1, j);
      touch(i, j + 1);
      touch(i + 1, j + 1);
    }
  }
  for (long j = 0; j <= ny; ++j) {
    for (long i = 0; i <= nx; ++i) {
      int& id = vertex_id[j * px + i];
      if (id < 0) continue;
      id = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back({static_cast<double>(i + i_min) / n, static_cast<double>(j + j_min) / n});
    }
  }

  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const int r = region[j * nx + i];
      if (r == -2) continue;
      const int v00 = vertex_id[j * px + i], v10 = vertex_id[j * px + i + 1];
      const int v01 = vertex_id[(j + 1) * px + i], v11 = vertex_id[(j + 1) * px + i + 1];
      const Subdomain sub = r < 0 ? Subdomain::Stokes : Subdomain::Darcy;
      mesh.cells.push_back({{v00, v10, v11}, sub, r, {}});
      mesh.cells.push_back({{v00, v11, v01}, sub, r, {}});
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  for (const auto& cell : mesh.cells) {
    for (int k = 0; k < 3; ++k) {
      const int a = cell.v[(k + 1) % 3], b = cell.v[(k + 2) % 3];
      edge_index.emplace(std::minmax(a, b), 0);
    }
  }
  mesh.facets.reserve(edge_index.size());
  for (auto& [key, id] : edge_index) {
    id = static_cast<int>(mesh.facets.size());
    Facet f;
    f.v = {key.first, key.second};
    mesh.facets.push_back(f);
  }
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    auto& cell = mesh.cells[c];
    for (int k = 0; k < 3; ++k) {
      const int a = cell.v[(k + 1) % 3], b = cell.v[(k + 2) % 3];
      const int f = edge_index.at(std::minmax(a, b));
      cell.facets[k] = f;
      auto& cells = mesh.facets[f].cells;
      (cells[0] < 0 ? cells[0] : cells[1]) = c;
    }
  }

  const double tol = 1e-3 * mesh.spacing;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    auto& facet = mesh.facets[f];
    if (facet.cells[1] >= 0) {
      const auto& c0 = mesh.cells[facet.cells[0]];
      const auto& c1 = mesh.cells[facet.cells[1]];
      facet.tag = (c0.subdomain != c1.subdomain) ? FacetTag::Interface : FacetTag::Interior;
      continue;
    }
    facet.tag = FacetTag::Untagged;
    const auto& owner = mesh.cells[facet.cells[0]];
    const Rect& rect = owner.subdomain == Subdomain::Stokes ? spec.stokes : spec.darcy[owner.component];
    const auto side = side_of(rect, facet_midpoint(mesh, f), tol);
    if (!side) throw ConfigurationError("boundary facet not on its rectangle outline");
    facet.side = *side;
  }

  mesh.interface = interface_facets(mesh);
  return mesh;
}

Mesh tag_boundaries(Mesh mesh, BcConfig config) {
  if (config == BcConfig::MultiInclusion) {
    if (!mesh.inclusions) throw ConfigurationError("multi-inclusion tagging needs Darcy inclusions");
    for (auto& f : mesh.facets) {
      if (f.cells[1] >= 0) continue;
      const bool wall = f.side == Side::Bottom || f.side == Side::Top;
      f.tag = wall ? FacetTag::StokesEssential : FacetTag::StokesNatural;
    }
    mesh.config = config;
    return mesh;
  }

  if (mesh.inclusions || mesh.darcy_components != 1) {
    throw ConfigurationError(std::string(to_string(config)) +
                             " requires exactly one Darcy rectangle sharing an edge");
  }
  const int n0 = mesh.spec.base_divisions;
  const auto stokes_interface_side =
      shared_full_edge(to_lattice(mesh.spec.stokes, n0, 1), to_lattice(mesh.spec.darcy[0], n0, 1));
  const Side stokes_far = opposite(*stokes_interface_side);
  const Side darcy_far = *stokes_interface_side;

  using T = FacetTag;
  // {Stokes touching, Stokes far, Darcy touching, Darcy far}
  std::array<T, 4> table{};
  switch (config) {
    case BcConfig::NN: table = {T::StokesNatural, T::StokesEssential, T::DarcyNatural, T::DarcyEssential}; break;
    case BcConfig::EE: table = {T::StokesEssential, T::StokesEssential, T::DarcyEssential, T::DarcyEssential}; break;
    case BcConfig::NEstar: table = {T::StokesNatural, T::StokesEssential, T::DarcyEssential, T::DarcyNatural}; break;
    case BcConfig::ENstar: table = {T::StokesEssential, T::StokesNatural, T::DarcyNatural, T::DarcyEssential}; break;
    case BcConfig::NE: table = {T::StokesNatural, T::StokesEssential, T::DarcyEssential, T::DarcyEssential}; break;
    case BcConfig::EN: table = {T::StokesEssential, T::StokesEssential, T::DarcyNatural, T::DarcyEssential}; break;
    case BcConfig::MultiInclusion: break;
  }
  for (auto& f : mesh.facets) {
    if (f.cells[1] >= 0) continue;
    const bool stokes = mesh.cells[f.cells[0]].subdomain == Subdomain::Stokes;
    if (stokes) {
      f.tag = f.side == stokes_far ? table[1] : table[0];
    } else {
      f.tag = f.side == darcy_far ? table[3] : table[2];
    }
  }
  mesh.config = config;
  return mesh;
}

InterfaceFacets interface_facets(const Mesh& mesh) {
  std::vector<int> ids;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    if (mesh.facets[f].tag == FacetTag::Interface) ids.push_back(f);
  }
  if (ids.empty()) throw ConfigurationError("mesh has no interface facets");

  // Vertex -> interface facets touching it.
  std::map<int, std::vector<int>> at_vertex;
  for (int f : ids) {
    for (int v : mesh.facets[f].v) at_vertex[v].push_back(f);
  }
  auto neighbours = [&](int f) {
    std::vector<int> out;
    for (int v : mesh.facets[f].v) {
      for (int g : at_vertex[v]) {
        if (g != f) out.push_back(g);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto is_endpoint = [&](int v) { return at_vertex[v].size() == 1; };

  InterfaceFacets out;
  std::map<int, int> position;
  std::vector<bool> visited(mesh.facets.size(), false);

  while (true) {
    // Start of the next piece: a facet on a chain end (lowest vertex first), else lowest facet.
    int start = -1;
    for (const auto& [v, fs] : at_vertex) {
      if (fs.size() == 1 && !visited[fs[0]]) {
        start = fs[0];
        break;
      }
    }
    if (start < 0) {
      for (int f : ids) {
        if (!visited[f]) {
          start = f;
          break;
        }
      }
    }
    if (start < 0) break;

    const int piece = out.pieces++;
    int current = start;
    int prev = -1;
    // Vertex the walk enters `current` through.
    int entry = -1;
    if (is_endpoint(mesh.facets[start].v[0])) {
      entry = mesh.facets[start].v[0];
    } else if (is_endpoint(mesh.facets[start].v[1])) {
      entry = mesh.facets[start].v[1];
    } else {
      entry = std::min(mesh.facets[start].v[0], mesh.facets[start].v[1]);
    }
    double arclength = 0.0;
    while (current >= 0 && !visited[current]) {
      visited[current] = true;
      const Facet& facet = mesh.facets[current];
      const int c0 = facet.cells[0], c1 = facet.cells[1];
      const bool first_is_stokes = mesh.cells[c0].subdomain == Subdomain::Stokes;
      const int sc = first_is_stokes ? c0 : c1;
      const int dc = first_is_stokes ? c1 : c0;

      // Outward normal of the Stokes cell on this edge (cells are counter-clockwise).
      const auto& scell = mesh.cells[sc];
      int k = 0;
      while (scell.facets[k] != current) ++k;
      const Point a = mesh.vertices[scell.v[(k + 1) % 3]];
      const Point b = mesh.vertices[scell.v[(k + 2) % 3]];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (len <= 0.0) throw ConfigurationError("zero-length interface facet");

      InterfaceFacet item;
      item.facet = current;
      item.stokes_cell = sc;
      item.darcy_cell = dc;
      item.component = mesh.cells[dc].component;
      item.normal = {(b.y - a.y) / len, -(b.x - a.x) / len};
      item.midpoint = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
      item.length = len;
      item.arclength = arclength;
      arclength += len;

      position[current] = static_cast<int>(out.facets.size());
      out.facets.push_back(item);
      int ends = 0;
      for (int v : facet.v) ends += is_endpoint(v) ? 1 : 0;
      out.endpoint_count.push_back(ends);
      out.piece.push_back(piece);

      const int exit = facet.v[0] == entry ? facet.v[1] : facet.v[0];
      int next = -1;
      for (int g : at_vertex[exit]) {
        if (g != current && g != prev && !visited[g]) next = g;
      }
      prev = current;
      current = next;
      entry = exit;
    }
  }

  for (int f : ids) {
    for (int g : neighbours(f)) {
      if (f < g) out.adjacency.push_back({position.at(f), position.at(g)});
    }
  }
  std::sort(out.adjacency.begin(), out.adjacency.end());
  return out;
}

std::string mesh_to_json(const Mesh& mesh) {
  using nlohmann::json;
  json doc;
  doc["format"] = "sdlab-mesh";
  doc["version"] = 1;
  doc["h"] = mesh.h;
  doc["spacing"] = mesh.spacing;
  doc["nref"] = mesh.nref;
  doc["config"] = mesh.config ? std::string(to_string(*mesh.config)) : std::string("untagged");

  json vertices = json::array();
  for (const auto& p : mesh.vertices) vertices.push_back({p.x, p.y});
  doc["vertices"] = std::move(vertices);

  json cells = json::array();
  for (const auto& c : mesh.cells) {
    cells.push_back({{"v", c.v},
                     {"subdomain", c.subdomain == Subdomain::Stokes ? "stokes" : "darcy"},
                     {"component", c.component}});
  }
  doc["cells"] = std::move(cells);

  json facets = json::array();
  for (const auto& f : mesh.facets) {
    json item = {{"v", f.v}, {"cells", f.cells}, {"tag", std::string(to_string(f.tag))}};
    if (f.cells[1] < 0) item["side"] = std::string(to_string(f.side));
    facets.push_back(std::move(item));
  }
  doc["facets"] = std::move(facets);

  json gamma = json::array();
  for (const auto& g : mesh.interface.facets) {
    gamma.push_back({{"facet", g.facet},
                     {"normal", {g.normal.x, g.normal.y}},
                     {"length", g.length},
                     {"component", g.component}});
  }
  doc["interface"] = std::move(gamma);
  return doc.dump(1);
}

}  // namespace sdlab
