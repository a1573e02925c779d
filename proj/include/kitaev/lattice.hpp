#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kitaev {

enum class LinkKind : std::uint8_t { X = 0, Y = 1, Z = 2 };
enum class Boundary : std::uint8_t { Open = 0, HalfPeriodic = 1, Periodic = 2 };

auto to_string(LinkKind k) -> const char*;
auto to_string(Boundary b) -> const char*;
auto boundary_from_string(const std::string& s) -> Boundary;

/// Oriented nearest-neighbour bond. `from` is always the even-sublattice
/// endpoint (site with chain + column even); this fixes the orientation
/// convention used for link variables and plaquette products.
struct Link {
    int      from;
    int      to;
    LinkKind kind;
};

/// Hexagon boundary walk. `links[i]` joins `sites[i]` and `sites[(i+1)%6]`.
struct Plaquette {
    std::array<int, 6> sites;
    std::array<int, 6> links;
};

/// Length-2 path (left - middle - right) inside a plaquette boundary.
/// `link_left` joins left/middle, `link_right` joins middle/right; the outer
/// sites are next-nearest neighbours and generate one three-body term each.
struct ThreeBodyTriple {
    int left;
    int middle;
    int right;
    int link_left;
    int link_right;
};

/// Brick-wall honeycomb lattice of rows x cols hexagons.
///
/// Sites live on zigzag chains indexed top to bottom; site numbering is
/// row-major over (chain, column) and recorded in `site_coords`. Chains are
/// joined by vertical z-links; within a chain, x- and y-links alternate.
/// Half-periodic lattices wrap the chains horizontally; periodic lattices
/// additionally identify chain `rows` with chain 0 (rows must be even).
struct HoneycombLattice {
    int      rows = 0;
    int      cols = 0;
    Boundary boundary = Boundary::Open;
    int      n_sites = 0;

    std::vector<Link>                 links;
    std::vector<Plaquette>            plaquettes;
    std::vector<ThreeBodyTriple>      triples;
    std::vector<std::pair<int, int>>  site_coords;  ///< (chain, column) per site

    /// Index of the link joining a and b in either orientation, or -1.
    auto find_link(int a, int b) const -> int;
    /// z-link whose midpoint is closest to the site centroid (ties break to
    /// the lowest link index). Default vortex-creation flip.
    auto central_z_link() const -> int;
};

/// Construct the lattice. Throws std::invalid_argument for non-positive
/// dimensions and for closed geometries small enough that two sites would be
/// joined by more than one link (half-periodic/periodic need cols >= 2;
/// periodic needs even rows >= 2).
auto build_lattice(int rows, int cols, Boundary boundary = Boundary::Open) -> HoneycombLattice;

/// All triples in which both endpoints of `link_index` appear (equivalently,
/// the triples mediated by that link: 4 for an interior link).
auto control_triples(const HoneycombLattice& lat, int link_index) -> std::vector<ThreeBodyTriple>;

struct EulerCounts {
    int n_sites;
    int n_links;
    int n_plaquettes;
};

auto euler_counts(const HoneycombLattice& lat) -> EulerCounts;

/// Full structural description (sites, links, plaquettes, triples) as JSON.
auto lattice_json(const HoneycombLattice& lat) -> std::string;

}  // namespace kitaev
