// hilbert.hpp
#pragma once

#include "pxpscar/lattice.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace pxpscar {

inline constexpr int kMaxRydbergSites = 28;
inline constexpr int kMaxFullSites = 24;

bool blockade_ok(const Lattice& lat, Mask m);

// Blockade-satisfying configurations, ascending by bitmask.
struct RydbergBasis {
    const Lattice* lattice = nullptr;
    std::vector<Mask> states;
    std::unordered_map<Mask, Index> index;

    Index dim() const { return static_cast<Index>(states.size()); }
    // -1 when the configuration is not in the basis.
    Index find(Mask m) const {
        auto it = index.find(m);
        return it == index.end() ? Index{-1} : it->second;
    }
};

RydbergBasis enumerate_rydberg(const Lattice& lat);
Index count_rydberg_brute_force(const Lattice& lat);

// Digit per block: + -> 0, 0 -> 1, - -> 2. Block 0 is the least significant digit.
enum BlockDigit : int { kPlus = 0, kZero = 1, kMinus = 2 };

struct BlockBasis {
    const Lattice* lattice = nullptr;
    DimerCover cover;
    int n_blocks = 0;
    Index dimension = 0;
    std::vector<Index> pow3;

    Index dim() const { return dimension; }
    int digit(Index state, int block) const { return static_cast<int>((state / pow3[block]) % 3); }
    Index with_digit(Index state, int block, int d) const {
        return state + (d - digit(state, block)) * pow3[block];
    }
    std::vector<int> digits(Index state) const;
    Index from_digits(const std::vector<int>& d) const;
    Mask to_halfspin(Index state) const;
    std::optional<Index> from_halfspin(Mask m) const;
};

BlockBasis make_block_basis(const Lattice& lat, const DimerCover& cover);
Mask block_to_halfspin(Index state, const BlockBasis& basis);

// Full 2^n_sites space, indexed by bitmask.
struct FullBasis {
    const Lattice* lattice = nullptr;
    int n_sites = 0;
    Index dim() const { return Index{1} << n_sites; }
};

FullBasis make_full_basis(const Lattice& lat);

// Position in the Rydberg basis of every block state, -1 for blockaded ones.
std::vector<Index> block_to_rydberg_map(const BlockBasis& block, const RydbergBasis& ryd);

template <class S>
Vector<S> project_ryd(const BlockBasis& block, const RydbergBasis& ryd, const Vector<S>& v) {
    if (block.lattice != ryd.lattice) throw Error(ErrorCode::basis_mismatch, "block and Rydberg bases differ");
    if (v.size() != block.dim()) throw Error(ErrorCode::basis_mismatch, "vector length is not 3^N_b");
    Vector<S> out = Vector<S>::Zero(ryd.dim());
    for (Index k = 0; k < block.dim(); ++k) {
        const Index j = ryd.find(block.to_halfspin(k));
        if (j >= 0) out[j] = v[k];
    }
    return out;
}

// Inverse embedding V_Ryd -> block space.
template <class S>
Vector<S> lift_ryd(const BlockBasis& block, const RydbergBasis& ryd, const Vector<S>& v) {
    if (block.lattice != ryd.lattice) throw Error(ErrorCode::basis_mismatch, "block and Rydberg bases differ");
    if (v.size() != ryd.dim()) throw Error(ErrorCode::basis_mismatch, "vector length is not the Rydberg dimension");
    Vector<S> out = Vector<S>::Zero(block.dim());
    for (Index j = 0; j < ryd.dim(); ++j) {
        const auto k = block.from_halfspin(ryd.states[j]);
        if (!k) throw Error(ErrorCode::basis_mismatch, "Rydberg state is not covered by the dimer cover");
        out[*k] = v[j];
    }
    return out;
}

template <class S>
Vector<S> project_ryd_full(const FullBasis& full, const RydbergBasis& ryd, const Vector<S>& v) {
    if (full.lattice != ryd.lattice) throw Error(ErrorCode::basis_mismatch, "full and Rydberg bases differ");
    if (v.size() != full.dim()) throw Error(ErrorCode::basis_mismatch, "vector length is not 2^n_sites");
    Vector<S> out(ryd.dim());
    for (Index j = 0; j < ryd.dim(); ++j) out[j] = v[static_cast<Index>(ryd.states[j])];
    return out;
}

// Diagonal 0/1 weights of P_Ryd on the block basis.
VectorXr blockade_diagonal(const BlockBasis& block);

std::int64_t lucas(int n);
std::int64_t fibonacci(int n);

struct DimensionRow {
    int n_sites;
    Index enumerated;
    Index brute_force;
    std::int64_t lucas;
};

std::vector<DimensionRow> basis_dimension_table(const std::vector<int>& n_sites_values);

} // namespace pxpscar
