#include "kitaev/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace kitaev {

auto to_string(LinkKind k) -> const char* {
    switch (k) {
        case LinkKind::X: return "x";
        case LinkKind::Y: return "y";
        default: return "z";
    }
}

auto to_string(Boundary b) -> const char* {
    switch (b) {
        case Boundary::Open: return "open";
        case Boundary::HalfPeriodic: return "half_periodic";
        default: return "periodic";
    }
}

auto boundary_from_string(const std::string& s) -> Boundary {
    if (s == "open") { return Boundary::Open; }
    if (s == "half_periodic" || s == "half-periodic" || s == "half") { return Boundary::HalfPeriodic; }
    if (s == "periodic") { return Boundary::Periodic; }
    throw std::invalid_argument("unknown boundary kind: " + s);
}

auto HoneycombLattice::find_link(int a, int b) const -> int {
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        if ((l.from == a && l.to == b) || (l.from == b && l.to == a)) { return static_cast<int>(i); }
    }
    return -1;
}

auto HoneycombLattice::central_z_link() const -> int {
    double ck = 0.0;
    double cx = 0.0;
    for (const auto& [k, x] : site_coords) {
        ck += k;
        cx += x;
    }
    ck /= static_cast<double>(n_sites);
    cx /= static_cast<double>(n_sites);
    int    best = -1;
    double best_d2 = 0.0;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].kind != LinkKind::Z) { continue; }
        const auto [ka, xa] = site_coords[static_cast<std::size_t>(links[i].from)];
        const auto [kb, xb] = site_coords[static_cast<std::size_t>(links[i].to)];
        const double mk = 0.5 * (ka + kb);
        const double mx = 0.5 * (xa + xb);
        const double d2 = (mk - ck) * (mk - ck) + (mx - cx) * (mx - cx);
        if (best < 0 || d2 < best_d2 - 1e-12) {
            best = static_cast<int>(i);
            best_d2 = d2;
        }
    }
    return best;
}

namespace {

struct Builder {
    int rows;
    int cols;
    Boundary boundary;
    std::map<std::pair<int, int>, int> site_of;
    HoneycombLattice lat;

    // Horizontal extent of chain k in the open lattice: the union of the
    // extents of the hexagon rows above and below it. Odd hexagon rows are
    // shifted one column to the right (brick-wall offset).
    auto chain_range(int k) const -> std::pair<int, int> {
        int lo = 1 << 30;
        int hi = -(1 << 30);
        for (int r : {k - 1, k}) {
            if (r < 0 || r >= rows) { continue; }
            lo = std::min(lo, r % 2);
            hi = std::max(hi, r % 2 + 2 * cols);
        }
        return {lo, hi};
    }

    auto add_site(int k, int x) -> void {
        site_of[{k, x}] = lat.n_sites++;
        lat.site_coords.emplace_back(k, x);
    }

    auto site(int k, int x) const -> int { return site_of.at({k, x}); }

    // Chain link between columns x and x+1 (wrapped when closed). The stored
    // orientation runs from the even sublattice, i.e. even chain + column.
    auto add_chain_link(int k, int x, int x2) -> void {
        if ((k + x) % 2 == 0) {
            lat.links.push_back({site(k, x), site(k, x2), LinkKind::X});
        } else {
            lat.links.push_back({site(k, x2), site(k, x), LinkKind::Y});
        }
    }

    auto add_plaquette(const std::array<std::pair<int, int>, 6>& walk) -> void {
        Plaquette p{};
        for (int i = 0; i < 6; ++i) { p.sites[static_cast<std::size_t>(i)] = site(walk[static_cast<std::size_t>(i)].first, walk[static_cast<std::size_t>(i)].second); }
        for (int i = 0; i < 6; ++i) {
            const int li = lat.find_link(p.sites[static_cast<std::size_t>(i)], p.sites[static_cast<std::size_t>((i + 1) % 6)]);
            if (li < 0) { throw std::logic_error("plaquette boundary link missing"); }
            p.links[static_cast<std::size_t>(i)] = li;
        }
        lat.plaquettes.push_back(p);
    }

    auto build_open() -> void {
        for (int k = 0; k <= rows; ++k) {
            const auto [a, b] = chain_range(k);
            for (int x = a; x <= b; ++x) { add_site(k, x); }
        }
        for (int k = 0; k <= rows; ++k) {
            const auto [a, b] = chain_range(k);
            for (int x = a; x < b; ++x) { add_chain_link(k, x, x + 1); }
        }
        for (int r = 0; r < rows; ++r) {
            for (int x = r % 2; x <= r % 2 + 2 * cols; x += 2) {
                lat.links.push_back({site(r, x), site(r + 1, x), LinkKind::Z});
            }
        }
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const int X = 2 * c + r % 2;
                add_plaquette({{{r, X + 1}, {r, X + 2}, {r + 1, X + 2}, {r + 1, X + 1}, {r + 1, X}, {r, X}}});
            }
        }
    }

    // Closed variants: every chain is a cycle of width W = 2*cols columns.
    // Half-periodic keeps rows+1 open chains; periodic identifies chain
    // `rows` with chain 0, which requires even rows for offset consistency.
    auto build_closed() -> void {
        const int W = 2 * cols;
        const int n_chains = boundary == Boundary::Periodic ? rows : rows + 1;
        const auto wrap_chain = [&](int k) { return boundary == Boundary::Periodic ? k % n_chains : k; };
        for (int k = 0; k < n_chains; ++k) {
            for (int x = 0; x < W; ++x) { add_site(k, x); }
        }
        for (int k = 0; k < n_chains; ++k) {
            for (int x = 0; x < W; ++x) { add_chain_link(k, x, (x + 1) % W); }
        }
        for (int r = 0; r < rows; ++r) {
            for (int x = r % 2; x < W; x += 2) {
                lat.links.push_back({site(r, x), site(wrap_chain(r + 1), x), LinkKind::Z});
            }
        }
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const int X = 2 * c + r % 2;
                const int r2 = wrap_chain(r + 1);
                add_plaquette({{{r, (X + 1) % W}, {r, (X + 2) % W}, {r2, (X + 2) % W}, {r2, (X + 1) % W}, {r2, X % W}, {r, X % W}}});
            }
        }
    }
};

auto check_no_duplicate_links(const HoneycombLattice& lat) -> void {
    std::map<std::pair<int, int>, int> seen;
    for (const auto& l : lat.links) {
        const auto key = std::minmax(l.from, l.to);
        if (!seen.emplace(std::pair<int, int>{key.first, key.second}, 1).second) {
            throw std::invalid_argument("lattice too small: two sites joined by more than one link");
        }
    }
}

}  // namespace

auto build_lattice(int rows, int cols, Boundary boundary) -> HoneycombLattice {
    if (rows < 1 || cols < 1) { throw std::invalid_argument("build_lattice: rows and cols must be >= 1"); }
    if (boundary != Boundary::Open && cols < 2) {
        throw std::invalid_argument("build_lattice: closed geometries need cols >= 2");
    }
    if (boundary == Boundary::Periodic && (rows < 2 || rows % 2 != 0)) {
        throw std::invalid_argument("build_lattice: periodic geometries need even rows >= 2");
    }

    Builder b{rows, cols, boundary, {}, {}};
    b.lat.rows = rows;
    b.lat.cols = cols;
    b.lat.boundary = boundary;
    if (boundary == Boundary::Open) {
        b.build_open();
    } else {
        b.build_closed();
    }
    check_no_duplicate_links(b.lat);

    // One triple per consecutive corner pair of every plaquette walk.
    for (const auto& p : b.lat.plaquettes) {
        for (int i = 0; i < 6; ++i) {
            b.lat.triples.push_back({p.sites[static_cast<std::size_t>(i)],
                                     p.sites[static_cast<std::size_t>((i + 1) % 6)],
                                     p.sites[static_cast<std::size_t>((i + 2) % 6)],
                                     p.links[static_cast<std::size_t>(i)],
                                     p.links[static_cast<std::size_t>((i + 1) % 6)]});
        }
    }
    return b.lat;
}

auto control_triples(const HoneycombLattice& lat, int link_index) -> std::vector<ThreeBodyTriple> {
    if (link_index < 0 || link_index >= static_cast<int>(lat.links.size())) {
        throw std::invalid_argument("control_triples: link not in lattice");
    }
    const auto& l = lat.links[static_cast<std::size_t>(link_index)];
    std::vector<ThreeBodyTriple> out;
    for (const auto& t : lat.triples) {
        const auto has = [&](int s) { return t.left == s || t.middle == s || t.right == s; };
        if (has(l.from) && has(l.to)) { out.push_back(t); }
    }
    return out;
}

auto euler_counts(const HoneycombLattice& lat) -> EulerCounts {
    return {lat.n_sites, static_cast<int>(lat.links.size()), static_cast<int>(lat.plaquettes.size())};
}

auto lattice_json(const HoneycombLattice& lat) -> std::string {
    nlohmann::json j;
    j["rows"] = lat.rows;
    j["cols"] = lat.cols;
    j["boundary"] = to_string(lat.boundary);
    j["n_sites"] = lat.n_sites;
    j["sites"] = nlohmann::json::array();
    for (int s = 0; s < lat.n_sites; ++s) {
        j["sites"].push_back({{"id", s},
                              {"chain", lat.site_coords[static_cast<std::size_t>(s)].first},
                              {"column", lat.site_coords[static_cast<std::size_t>(s)].second}});
    }
    j["links"] = nlohmann::json::array();
    for (std::size_t i = 0; i < lat.links.size(); ++i) {
        j["links"].push_back({{"id", i},
                              {"from", lat.links[i].from},
                              {"to", lat.links[i].to},
                              {"kind", to_string(lat.links[i].kind)}});
    }
    j["plaquettes"] = nlohmann::json::array();
    for (const auto& p : lat.plaquettes) {
        j["plaquettes"].push_back({{"sites", p.sites}, {"links", p.links}});
    }
    j["triples"] = nlohmann::json::array();
    for (const auto& t : lat.triples) {
        j["triples"].push_back({{"left", t.left},
                                {"middle", t.middle},
                                {"right", t.right},
                                {"links", {t.link_left, t.link_right}}});
    }
    j["central_z_link"] = lat.central_z_link();
    return j.dump(2);
}

}  // namespace kitaev
