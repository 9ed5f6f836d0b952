// lattice.cpp
#include "pxpscar/lattice.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace pxpscar {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_size: return "invalid-size";
    case ErrorCode::not_bipartite: return "not-bipartite";
    case ErrorCode::invalid_lattice: return "invalid-lattice";
    case ErrorCode::no_default_cover: return "no-default-cover";
    case ErrorCode::uncoverable: return "uncoverable";
    case ErrorCode::invalid_cover: return "invalid-cover";
    case ErrorCode::too_many_sites: return "too-many-sites";
    case ErrorCode::basis_mismatch: return "basis-mismatch";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::unsupported_lattice: return "unsupported-lattice";
    case ErrorCode::degenerate_ansatz: return "degenerate-ansatz";
    case ErrorCode::not_hermitian: return "not-hermitian";
    case ErrorCode::subset_too_large: return "subset-too-large";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::config_error: return "config-error";
    }
    return "unknown";
}

bool Lattice::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_sites || j >= n_sites) return false;
    return (neighbour_masks[i] >> j) & 1u;
}

Lattice make_lattice(int n_sites, std::vector<Edge> edges, std::vector<Sublattice> sublattice,
                     std::string name) {
    if (n_sites < 2 || n_sites > 32)
        throw Error(ErrorCode::too_many_sites, "lattice must have between 2 and 32 sites");
    if (static_cast<int>(sublattice.size()) != n_sites)
        throw Error(ErrorCode::invalid_lattice, "sublattice labels do not match n_sites");

    int n_a = static_cast<int>(std::count(sublattice.begin(), sublattice.end(), Sublattice::A));
    if (2 * n_a != n_sites)
        throw Error(ErrorCode::invalid_lattice, "sublattices A and B must have equal size");

    std::set<Edge> seen;
    for (auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n_sites || j >= n_sites)
            throw Error(ErrorCode::invalid_lattice, "edge endpoint out of range");
        if (i == j) throw Error(ErrorCode::invalid_lattice, "self-loop");
        if (i > j) std::swap(i, j);
        if (!seen.insert({i, j}).second) throw Error(ErrorCode::invalid_lattice, "duplicate edge");
        if (sublattice[i] == sublattice[j])
            throw Error(ErrorCode::not_bipartite,
                        "edge (" + std::to_string(i) + "," + std::to_string(j) + ") joins equal sublattices");
    }
    std::sort(edges.begin(), edges.end());

    Lattice lat;
    lat.n_sites = n_sites;
    lat.edges = std::move(edges);
    lat.sublattice = std::move(sublattice);
    lat.name = std::move(name);
    lat.adjacency.assign(n_sites, {});
    lat.neighbour_masks.assign(n_sites, 0u);
    for (auto [i, j] : lat.edges) {
        lat.adjacency[i].push_back(j);
        lat.adjacency[j].push_back(i);
        lat.neighbour_masks[i] |= Mask{1} << j;
        lat.neighbour_masks[j] |= Mask{1} << i;
    }
    for (auto& a : lat.adjacency) std::sort(a.begin(), a.end());
    return lat;
}

Lattice build_chain(int n_blocks, Boundary boundary) {
    if (n_blocks < 2) throw Error(ErrorCode::invalid_size, "chain needs at least 2 blocks");
    if (n_blocks > 16) throw Error(ErrorCode::too_many_sites, "chain limited to 16 blocks");
    const int n = 2 * n_blocks;
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    if (boundary == Boundary::periodic) edges.emplace_back(0, n - 1);
    std::vector<Sublattice> sub(n);
    for (int i = 0; i < n; ++i) sub[i] = (i % 2 == 0) ? Sublattice::A : Sublattice::B;
    Lattice lat = make_lattice(n, std::move(edges), std::move(sub), "chain");
    lat.boundary = boundary;
    return lat;
}

int honeycomb_site(const Lattice& lat, int a1, int a2, Sublattice s) {
    const int c1 = ((a1 % lat.n1) + lat.n1) % lat.n1;
    const int c2 = ((a2 % lat.n2) + lat.n2) % lat.n2;
    return 2 * (c1 + lat.n1 * c2) + (s == Sublattice::B ? 1 : 0);
}

Lattice build_honeycomb(int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw Error(ErrorCode::invalid_size, "honeycomb needs n1, n2 >= 2");
    if (2 * n1 * n2 > 32) throw Error(ErrorCode::too_many_sites, "honeycomb limited to 32 sites");
    Lattice shape;
    shape.n1 = n1;
    shape.n2 = n2;
    std::vector<Edge> edges;
    for (int a2 = 0; a2 < n2; ++a2) {
        for (int a1 = 0; a1 < n1; ++a1) {
            const int a = honeycomb_site(shape, a1, a2, Sublattice::A);
            edges.emplace_back(a, honeycomb_site(shape, a1, a2, Sublattice::B));
            edges.emplace_back(a, honeycomb_site(shape, a1 - 1, a2, Sublattice::B));
            edges.emplace_back(a, honeycomb_site(shape, a1, a2 - 1, Sublattice::B));
        }
    }
    const int n = 2 * n1 * n2;
    std::vector<Sublattice> sub(n);
    for (int i = 0; i < n; ++i) sub[i] = (i % 2 == 0) ? Sublattice::A : Sublattice::B;
    Lattice lat = make_lattice(n, std::move(edges), std::move(sub), "honeycomb");
    lat.n1 = n1;
    lat.n2 = n2;
    return lat;
}

void validate_cover(const Lattice& lat, const DimerCover& cover) {
    if (cover.n_blocks() != lat.n_blocks())
        throw Error(ErrorCode::invalid_cover, "cover must contain n_sites/2 dimers");
    std::vector<int> hits(lat.n_sites, 0);
    for (auto [a, b] : cover.dimers) {
        if (!lat.has_edge(a, b)) throw Error(ErrorCode::invalid_cover, "dimer is not an edge");
        if (lat.sublattice[a] != Sublattice::A)
            throw Error(ErrorCode::invalid_cover, "first dimer site must lie on sublattice A");
        ++hits[a];
        ++hits[b];
    }
    for (int h : hits)
        if (h != 1) throw Error(ErrorCode::invalid_cover, "every site must be covered exactly once");
}

DimerCover default_cover(const Lattice& lat) {
    if (lat.declared_cover) return *lat.declared_cover;
    DimerCover cover;
    if (lat.is_chain() || lat.is_honeycomb()) {
        // chain: (2b-1, 2b) in 1-indexed sites; honeycomb: vertical bonds (r, r+e_y)
        for (int b = 0; b < lat.n_blocks(); ++b) cover.dimers.emplace_back(2 * b, 2 * b + 1);
    } else {
        throw Error(ErrorCode::no_default_cover, "lattice '" + lat.name + "' has no default cover");
    }
    validate_cover(lat, cover);
    return cover;
}

DimerCover alternate_cover(const Lattice& lat) {
    DimerCover cover;
    if (lat.is_honeycomb()) {
        // bonds (A r, B (r - e1))
        for (int a2 = 0; a2 < lat.n2; ++a2)
            for (int a1 = 0; a1 < lat.n1; ++a1)
                cover.dimers.emplace_back(honeycomb_site(lat, a1, a2, Sublattice::A),
                                          honeycomb_site(lat, a1 - 1, a2, Sublattice::B));
        validate_cover(lat, cover);
        return cover;
    }
    if (!lat.is_chain()) throw Error(ErrorCode::unsupported_lattice, "alternate cover is defined for chains and honeycombs");
    if (lat.boundary != Boundary::periodic)
        throw Error(ErrorCode::uncoverable, "shifted pairing leaves the end sites of an open chain uncovered");
    // (2b, 2b+1) in 1-indexed sites, with wraparound
    const int n = lat.n_sites;
    for (int b = 0; b < lat.n_blocks(); ++b) cover.dimers.emplace_back((2 * b + 2) % n, 2 * b + 1);
    validate_cover(lat, cover);
    return cover;
}

SymmetryOp compose(const SymmetryOp& outer, const SymmetryOp& inner) {
    SymmetryOp out;
    out.perm.resize(inner.perm.size());
    for (std::size_t i = 0; i < inner.perm.size(); ++i) out.perm[i] = outer.perm[inner.perm[i]];
    out.label = outer.label + "*" + inner.label;
    return out;
}

SymmetryOp inverse(const SymmetryOp& op) {
    SymmetryOp out;
    out.perm.resize(op.perm.size());
    for (std::size_t i = 0; i < op.perm.size(); ++i) out.perm[op.perm[i]] = static_cast<int>(i);
    out.label = op.label + "^-1";
    return out;
}

bool is_identity(const SymmetryOp& op) {
    for (std::size_t i = 0; i < op.perm.size(); ++i)
        if (op.perm[i] != static_cast<int>(i)) return false;
    return true;
}

bool preserves_edges(const Lattice& lat, const SymmetryOp& op) {
    if (static_cast<int>(op.perm.size()) != lat.n_sites) return false;
    std::vector<int> sorted = op.perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < lat.n_sites; ++i)
        if (sorted[i] != i) return false;
    for (auto [i, j] : lat.edges)
        if (!lat.has_edge(op.perm[i], op.perm[j])) return false;
    return true;
}

int sublattice_action(const Lattice& lat, const SymmetryOp& op) {
    bool same = true, swapped = true;
    for (int i = 0; i < lat.n_sites; ++i) {
        if (lat.sublattice[op.perm[i]] == lat.sublattice[i]) swapped = false;
        else same = false;
    }
    return same ? 1 : (swapped ? -1 : 0);
}

Mask permute_mask(Mask m, const SymmetryOp& op) {
    Mask out = 0;
    while (m) {
        const int i = std::countr_zero(m);
        out |= Mask{1} << op.perm[i];
        m &= m - 1;
    }
    return out;
}

SymmetryOp chain_translation(const Lattice& lat, int shift) {
    if (!lat.is_chain()) throw Error(ErrorCode::unsupported_lattice, "translation T is defined for chains");
    const int n = lat.n_sites;
    SymmetryOp op;
    op.perm.resize(n);
    for (int i = 0; i < n; ++i) op.perm[i] = (((i + shift) % n) + n) % n;
    op.label = "T^" + std::to_string(((shift % n) + n) % n);
    return op;
}

// Rotation by 2pi/3 about the A site of cell (0,0): lattice vectors e1 -> e2 - e1, e2 -> -e1,
// so cell (a1, a2) -> (-a1 - a2, a1); B sites pick up an extra -e1.
SymmetryOp honeycomb_rotation(const Lattice& lat) {
    if (!lat.is_honeycomb()) throw Error(ErrorCode::unsupported_lattice, "rotation is defined for honeycomb");
    SymmetryOp op;
    op.perm.resize(lat.n_sites);
    for (int a2 = 0; a2 < lat.n2; ++a2) {
        for (int a1 = 0; a1 < lat.n1; ++a1) {
            const int r1 = -a1 - a2, r2 = a1;
            op.perm[honeycomb_site(lat, a1, a2, Sublattice::A)] = honeycomb_site(lat, r1, r2, Sublattice::A);
            op.perm[honeycomb_site(lat, a1, a2, Sublattice::B)] = honeycomb_site(lat, r1 - 1, r2, Sublattice::B);
        }
    }
    op.label = "g";
    return op;
}

SymmetryGroup symmetry_group(const Lattice& lat, SymmetryKind kind) {
    SymmetryGroup group;
    group.status = "ok";
    if (lat.is_chain()) {
        if (kind != SymmetryKind::translations || lat.boundary != Boundary::periodic) {
            group.status = "warning: only translations of the periodic chain are implemented";
            return group;
        }
        for (int k = 0; k < lat.n_sites; ++k) group.ops.push_back(chain_translation(lat, k));
    } else if (lat.is_honeycomb()) {
        if (kind == SymmetryKind::translations) {
            for (int t2 = 0; t2 < lat.n2; ++t2) {
                for (int t1 = 0; t1 < lat.n1; ++t1) {
                    SymmetryOp op;
                    op.perm.resize(lat.n_sites);
                    for (int a2 = 0; a2 < lat.n2; ++a2)
                        for (int a1 = 0; a1 < lat.n1; ++a1)
                            for (auto s : {Sublattice::A, Sublattice::B})
                                op.perm[honeycomb_site(lat, a1, a2, s)] = honeycomb_site(lat, a1 + t1, a2 + t2, s);
                    op.label = "t(" + std::to_string(t1) + "," + std::to_string(t2) + ")";
                    group.ops.push_back(std::move(op));
                }
            }
        } else {
            if (lat.n1 != lat.n2) {
                group.status = "warning: 3-fold rotation requires n1 == n2";
                return group;
            }
            SymmetryOp id;
            id.perm.resize(lat.n_sites);
            for (int i = 0; i < lat.n_sites; ++i) id.perm[i] = i;
            id.label = "id";
            const SymmetryOp g = honeycomb_rotation(lat);
            SymmetryOp g2 = compose(g, g);
            g2.label = "g^2";
            group.ops = {id, g, g2};
        }
    } else {
        if (lat.declared_symmetries.empty()) {
            group.status = "warning: lattice declares no symmetries";
            return group;
        }
        group.ops = lat.declared_symmetries;
    }
    return group;
}

} // namespace pxpscar
