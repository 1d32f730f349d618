#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdlab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

enum class Subdomain : std::uint8_t { Stokes, Darcy };

/// Outer boundary configurations. The first letter is the Stokes condition
/// on the edges meeting the interface, the second the Darcy one; starred
/// variants flip the far edges so that no near-kernel appears.
enum class BcConfig : std::uint8_t { NN, EE, NEstar, ENstar, NE, EN, MultiInclusion };

std::string_view to_string(BcConfig config);
BcConfig parse_bc_config(std::string_view name);

/// Number of near-kernel modes for single-Darcy configurations (0 or 1);
/// MultiInclusion reports one per Darcy component via the mesh instead.
int near_kernel_dimension(BcConfig config);

enum class FacetTag : std::uint8_t {
  Interior,
  Interface,
  StokesEssential,
  StokesNatural,
  DarcyEssential,
  DarcyNatural,
  Untagged,
};

std::string_view to_string(FacetTag tag);

enum class Side : std::uint8_t { Left, Right, Bottom, Top };

std::string_view to_string(Side side);

struct DomainSpec {
  Rect stokes;
  std::vector<Rect> darcy;
  int base_divisions = 4;
};

struct Cell {
  std::array<int, 3> v{};  // counter-clockwise
  Subdomain subdomain = Subdomain::Stokes;
  int component = -1;          // Darcy rectangle index, -1 on Stokes cells
  std::array<int, 3> facets{};  // facet opposite local vertex k
};

struct Facet {
  std::array<int, 2> v{};
  std::array<int, 2> cells{-1, -1};  // ascending; second is -1 on the boundary
  FacetTag tag = FacetTag::Interior;
  Side side = Side::Left;  // only meaningful on outer boundary facets
};

struct InterfaceFacet {
  int facet = -1;
  int stokes_cell = -1;
  int darcy_cell = -1;
  int component = -1;  // Darcy component on the far side
  Point normal;        // unit normal pointing from Stokes into Darcy
  Point midpoint;
  double length = 0.0;
  double arclength = 0.0;  // position of the facet start along its piece of the interface
};

/// Interface facets ordered along each connected piece of the interface.
struct InterfaceFacets {
  std::vector<InterfaceFacet> facets;
  std::vector<std::array<int, 2>> adjacency;  // positions sharing a vertex
  std::vector<int> endpoint_count;            // interface endpoints touched, per position
  std::vector<int> piece;                     // connected piece index, per position
  int pieces = 0;
};

struct Mesh {
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  std::vector<Facet> facets;
  InterfaceFacets interface;
  DomainSpec spec;
  double spacing = 0.0;  // lattice spacing 1 / (n0 * 2^nref)
  double h = 0.0;        // longest cell edge
  int nref = 0;
  int darcy_components = 0;
  bool inclusions = false;  // Darcy rectangles strictly inside the Stokes one
  std::optional<BcConfig> config;
};

/// Structured triangulation of the Stokes and Darcy rectangles on a common
/// lattice. Throws ConfigurationError for off-lattice or badly placed rectangles.
Mesh build_coupled_mesh(const DomainSpec& spec, int nref);

/// Assigns essential/natural tags to every outer facet for the given configuration.
Mesh tag_boundaries(Mesh mesh, BcConfig config);

InterfaceFacets interface_facets(const Mesh& mesh);

double cell_area(const Mesh& mesh, int cell);
double facet_length(const Mesh& mesh, int facet);
Point facet_midpoint(const Mesh& mesh, int facet);

/// JSON document with vertices, cells, facets (with tags) and the interface.
std::string mesh_to_json(const Mesh& mesh);

}  // namespace sdlab
