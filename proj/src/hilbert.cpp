#include "pxpscar/hilbert.hpp"

#include <algorithm>

namespace pxpscar {

bool blockade_ok(const Lattice& lat, Mask m) {
    for (auto [i, j] : lat.edges)
        if (((m >> i) & 1u) && ((m >> j) & 1u)) return false;
    return true;
}

RydbergBasis enumerate_rydberg(const Lattice& lat) {
    if (lat.n_sites > kMaxRydbergSites)
        throw Error(ErrorCode::too_many_sites, "Rydberg enumeration limited to 28 sites");
    RydbergBasis basis;
    basis.lattice = &lat;

    // Depth-first over sites in increasing order; a site may be set only if no
    // lower-indexed neighbour is set. Higher neighbours are checked when reached.
    const int n = lat.n_sites;
    std::vector<Mask> lower(n, 0u);
    for (int i = 0; i < n; ++i) lower[i] = lat.neighbour_masks[i] & ((Mask{1} << i) - 1u);
    std::vector<std::pair<int, Mask>> stack{{0, 0u}};
    while (!stack.empty()) {
        auto [site, m] = stack.back();
        stack.pop_back();
        if (site == n) {
            basis.states.push_back(m);
            continue;
        }
        stack.emplace_back(site + 1, m);
        if ((m & lower[site]) == 0) stack.emplace_back(site + 1, m | (Mask{1} << site));
    }
    std::sort(basis.states.begin(), basis.states.end());
    basis.index.reserve(basis.states.size());
    for (std::size_t k = 0; k < basis.states.size(); ++k) basis.index.emplace(basis.states[k], static_cast<Index>(k));
    return basis;
}

Index count_rydberg_brute_force(const Lattice& lat) {
    if (lat.n_sites > kMaxRydbergSites)
        throw Error(ErrorCode::too_many_sites, "brute-force count limited to 28 sites");
    Index count = 0;
    const Mask end = lat.n_sites == 32 ? ~Mask{0} : (Mask{1} << lat.n_sites);
    for (Mask m = 0; m < end; ++m)
        if (blockade_ok(lat, m)) ++count;
    return count;
}

std::vector<int> BlockBasis::digits(Index state) const {
    std::vector<int> d(n_blocks);
    for (int b = 0; b < n_blocks; ++b) {
        d[b] = static_cast<int>(state % 3);
        state /= 3;
    }
    return d;
}

Index BlockBasis::from_digits(const std::vector<int>& d) const {
    Index s = 0;
    for (int b = n_blocks - 1; b >= 0; --b) s = 3 * s + d[b];
    return s;
}

Mask BlockBasis::to_halfspin(Index state) const {
    Mask m = 0;
    for (int b = 0; b < n_blocks; ++b) {
        const int d = static_cast<int>(state % 3);
        state /= 3;
        if (d == kPlus) m |= Mask{1} << cover.dimers[b].second;
        else if (d == kMinus) m |= Mask{1} << cover.dimers[b].first;
    }
    return m;
}

std::optional<Index> BlockBasis::from_halfspin(Mask m) const {
    Index s = 0;
    for (int b = n_blocks - 1; b >= 0; --b) {
        const bool a = (m >> cover.dimers[b].first) & 1u;
        const bool be = (m >> cover.dimers[b].second) & 1u;
        if (a && be) return std::nullopt;
        s = 3 * s + (be ? kPlus : (a ? kMinus : kZero));
    }
    return s;
}

BlockBasis make_block_basis(const Lattice& lat, const DimerCover& cover) {
    validate_cover(lat, cover);
    if (cover.n_blocks() > 19) throw Error(ErrorCode::too_many_sites, "block basis limited to 19 blocks");
    BlockBasis basis;
    basis.lattice = &lat;
    basis.cover = cover;
    basis.n_blocks = cover.n_blocks();
    basis.pow3.resize(basis.n_blocks + 1);
    basis.pow3[0] = 1;
    for (int b = 0; b < basis.n_blocks; ++b) basis.pow3[b + 1] = 3 * basis.pow3[b];
    basis.dimension = basis.pow3[basis.n_blocks];
    return basis;
}

Mask block_to_halfspin(Index state, const BlockBasis& basis) {
    if (state < 0 || state >= basis.dim()) throw Error(ErrorCode::out_of_range, "block state index out of range");
    return basis.to_halfspin(state);
}

FullBasis make_full_basis(const Lattice& lat) {
    if (lat.n_sites > kMaxFullSites) throw Error(ErrorCode::too_many_sites, "full basis limited to 24 sites");
    return FullBasis{&lat, lat.n_sites};
}

std::vector<Index> block_to_rydberg_map(const BlockBasis& block, const RydbergBasis& ryd) {
    if (block.lattice != ryd.lattice) throw Error(ErrorCode::basis_mismatch, "block and Rydberg bases differ");
    std::vector<Index> map(block.dim());
    for (Index k = 0; k < block.dim(); ++k) map[k] = ryd.find(block.to_halfspin(k));
    return map;
}

VectorXr blockade_diagonal(const BlockBasis& block) {
    VectorXr p(block.dim());
    for (Index k = 0; k < block.dim(); ++k) p[k] = blockade_ok(*block.lattice, block.to_halfspin(k)) ? 1.0 : 0.0;
    return p;
}

std::int64_t lucas(int n) {
    if (n < 1) throw Error(ErrorCode::out_of_range, "Lucas index starts at 1");
    std::int64_t a = 1, b = 3; // L_1, L_2
    if (n == 1) return a;
    for (int k = 2; k < n; ++k) {
        const std::int64_t c = a + b;
        a = b;
        b = c;
    }
    return b;
}

std::int64_t fibonacci(int n) {
    if (n < 0) throw Error(ErrorCode::out_of_range, "Fibonacci index must be non-negative");
    std::int64_t a = 0, b = 1;
    for (int k = 0; k < n; ++k) {
        const std::int64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

std::vector<DimensionRow> basis_dimension_table(const std::vector<int>& n_sites_values) {
    std::vector<DimensionRow> rows;
    for (int n : n_sites_values) {
        if (n % 2 != 0) throw Error(ErrorCode::invalid_size, "chain needs an even number of sites");
        const Lattice lat = build_chain(n / 2, Boundary::periodic);
        rows.push_back({n, enumerate_rydberg(lat).dim(), count_rydberg_brute_force(lat), lucas(n)});
    }
    return rows;
}

} // namespace pxpscar
