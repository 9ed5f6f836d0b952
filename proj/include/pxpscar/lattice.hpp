// lattice.hpp
#pragma once

#include "pxpscar/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pxpscar {

enum class Sublattice : std::uint8_t { A, B };
enum class Boundary { periodic, open };
enum class SymmetryKind { translations, rotations };

using Edge = std::pair<int, int>;

struct SymmetryOp {
    std::vector<int> perm; // site i is mapped to perm[i]
    std::string label;
};

// Ordered (alpha_site, beta_site) pairs; the first element lies on sublattice A.
struct DimerCover {
    std::vector<Edge> dimers;
    int n_blocks() const { return static_cast<int>(dimers.size()); }
};

// Bipartite graph. Built through make_lattice / build_chain / build_honeycomb, which
// validate the invariants; treat as immutable afterwards.
struct Lattice {
    int n_sites = 0;
    std::vector<Edge> edges; // i < j, sorted
    std::vector<Sublattice> sublattice;
    std::string name;
    Boundary boundary = Boundary::periodic;
    int n1 = 0;
    int n2 = 0;
    std::vector<SymmetryOp> declared_symmetries;
    std::optional<DimerCover> declared_cover;

    std::vector<std::vector<int>> adjacency;
    std::vector<Mask> neighbour_masks;

    int n_blocks() const { return n_sites / 2; }
    int coordination(int site) const { return static_cast<int>(adjacency[site].size()); }
    Mask neighbour_mask(int site) const { return neighbour_masks[site]; }
    bool has_edge(int i, int j) const;
    bool is_chain() const { return name == "chain"; }
    bool is_honeycomb() const { return name == "honeycomb"; }
};

Lattice make_lattice(int n_sites, std::vector<Edge> edges, std::vector<Sublattice> sublattice,
                     std::string name);

Lattice build_chain(int n_blocks, Boundary boundary);

// Site index of (a1, a2, s) is 2 * (a1 + n1 * a2) + (s == B).
Lattice build_honeycomb(int n1, int n2);
int honeycomb_site(const Lattice& lat, int a1, int a2, Sublattice s);

DimerCover default_cover(const Lattice& lat);
DimerCover alternate_cover(const Lattice& lat);
void validate_cover(const Lattice& lat, const DimerCover& cover);

struct SymmetryGroup {
    std::vector<SymmetryOp> ops;
    std::string status; // "ok" or a warning
    bool ok() const { return status == "ok"; }
};

SymmetryGroup symmetry_group(const Lattice& lat, SymmetryKind kind);
SymmetryOp chain_translation(const Lattice& lat, int shift);
SymmetryOp honeycomb_rotation(const Lattice& lat);
SymmetryOp compose(const SymmetryOp& outer, const SymmetryOp& inner);
SymmetryOp inverse(const SymmetryOp& op);
bool is_identity(const SymmetryOp& op);
bool preserves_edges(const Lattice& lat, const SymmetryOp& op);
// +1 if sublattices are preserved, -1 if swapped, 0 if mixed.
int sublattice_action(const Lattice& lat, const SymmetryOp& op);
Mask permute_mask(Mask m, const SymmetryOp& op);

} // namespace pxpscar
