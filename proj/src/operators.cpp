#include "pxpscar/operators.hpp"

#include <cmath>
#include <numbers>

namespace pxpscar {
namespace {

using Triplet = Eigen::Triplet<double, Index>;

SparseOp from_triplets(Index dim, const std::vector<Triplet>& t) {
    SparseOp m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

inline bool up(Mask m, int site) { return (m >> site) & 1u; }

int wrap(int i, int n) { return ((i % n) + n) % n; }

void require_periodic_chain(const Lattice& lat, int min_sites) {
    if (!lat.is_chain() || lat.boundary != Boundary::periodic)
        throw Error(ErrorCode::unsupported_lattice, "operator is defined on the periodic chain");
    if (lat.n_sites < min_sites)
        throw Error(ErrorCode::invalid_size, "chain needs at least " + std::to_string(min_sites) + " sites");
}

// Weight of P_{i-1} X_i P_{i+1} (P_{i-2} + P_{i+2}) on configuration m (0 if not allowed).
double dh_weight(Mask m, int i, int n) {
    if (up(m, wrap(i - 1, n)) || up(m, wrap(i + 1, n))) return 0.0;
    return (up(m, wrap(i - 2, n)) ? 0.0 : 1.0) + (up(m, wrap(i + 2, n)) ? 0.0 : 1.0);
}

} // namespace

double hermiticity_residual(const SparseOp& m) {
    SparseOp t = m.transpose();
    SparseOp d = m - t;
    double r = 0.0;
    for (Index k = 0; k < d.outerSize(); ++k)
        for (SparseOp::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

void require_hermitian(const SparseOp& m, double tol) {
    if (hermiticity_residual(m) > tol) throw Error(ErrorCode::not_hermitian, "operator is not Hermitian");
}

SparseOp build_pxp(const Lattice& lat, const RydbergBasis& ryd) {
    if (ryd.lattice != &lat) throw Error(ErrorCode::basis_mismatch, "basis built on another lattice");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(ryd.dim()) * 4);
    for (Index k = 0; k < ryd.dim(); ++k) {
        const Mask m = ryd.states[k];
        for (int i = 0; i < lat.n_sites; ++i) {
            if (m & lat.neighbour_masks[i]) continue;
            t.emplace_back(ryd.find(m ^ (Mask{1} << i)), k, 1.0);
        }
    }
    return from_triplets(ryd.dim(), t);
}

SparseOp build_dh_lambda(const Lattice& lat, const RydbergBasis& ryd, double lambda) {
    if (ryd.lattice != &lat) throw Error(ErrorCode::basis_mismatch, "basis built on another lattice");
    require_periodic_chain(lat, 6);
    const int n = lat.n_sites;
    std::vector<Triplet> t;
    for (Index k = 0; k < ryd.dim(); ++k) {
        const Mask m = ryd.states[k];
        for (int i = 0; i < n; ++i) {
            const double w = dh_weight(m, i, n);
            if (w != 0.0) t.emplace_back(ryd.find(m ^ (Mask{1} << i)), k, lambda * w / 8.0);
        }
    }
    return from_triplets(ryd.dim(), t);
}

SparseOp build_dh_lambda_block(const Lattice& lat, const BlockBasis& block, double lambda) {
    if (block.lattice != &lat) throw Error(ErrorCode::basis_mismatch, "basis built on another lattice");
    require_periodic_chain(lat, 6);
    const int n = lat.n_sites;
    std::vector<Triplet> t;
    for (Index k = 0; k < block.dim(); ++k) {
        const Mask m = block.to_halfspin(k);
        for (int i = 0; i < n; ++i) {
            const double w = dh_weight(m, i, n);
            if (w != 0.0) t.emplace_back(*block.from_halfspin(m ^ (Mask{1} << i)), k, lambda * w / 8.0);
        }
    }
    return from_triplets(block.dim(), t);
}

SparseOp build_dh_su2(const Lattice& lat, const RydbergBasis& ryd, const std::map<int, double>& coefficients) {
    if (ryd.lattice != &lat) throw Error(ErrorCode::basis_mismatch, "basis built on another lattice");
    require_periodic_chain(lat, 4);
    const int n = lat.n_sites;
    for (const auto& [d, _] : coefficients)
        if (d < 2 || d > lat.n_blocks()) throw Error(ErrorCode::out_of_range, "distance d must lie in [2, N_b]");
    std::vector<Triplet> t;
    for (Index k = 0; k < ryd.dim(); ++k) {
        const Mask m = ryd.states[k];
        for (int i = 0; i < n; ++i) {
            if (up(m, wrap(i - 1, n)) || up(m, wrap(i + 1, n))) continue;
            double w = 0.0;
            for (const auto& [d, lam] : coefficients) {
                const double z = (up(m, wrap(i - d, n)) ? 1.0 : -1.0) + (up(m, wrap(i + d, n)) ? 1.0 : -1.0);
                w += lam * z;
            }
            if (w != 0.0) t.emplace_back(ryd.find(m ^ (Mask{1} << i)), k, w);
        }
    }
    return from_triplets(ryd.dim(), t);
}

std::map<int, double> default_su2_coefficients(int n_blocks, double h0) {
    const double phi = std::numbers::phi;
    std::map<int, double> c;
    for (int d = 2; d <= n_blocks; ++d) {
        const double x = std::pow(phi, d - 1) - std::pow(phi, 1 - d);
        c[d] = h0 / (x * x);
    }
    return c;
}

SparseOp build_dh_nh_chain(const Lattice& lat, const RydbergBasis& ryd) {
    if (ryd.lattice != &lat) throw Error(ErrorCode::basis_mismatch, "basis built on another lattice");
    require_periodic_chain(lat, 4);
    const int n = lat.n_sites;
    std::vector<Triplet> t;
    for (Index k = 0; k < ryd.dim(); ++k) {
        const Mask m = ryd.states[k];
        for (int b = 0; b < lat.n_blocks(); ++b) {
            // sites 2b..2b+3 (0-indexed) must all be down; flip 2b+1 or 2b+2
            bool empty = true;
            for (int s = 0; s < 4; ++s) empty = empty && !up(m, wrap(2 * b + s, n));
            if (!empty) continue;
            t.emplace_back(ryd.find(m ^ (Mask{1} << wrap(2 * b + 1, n))), k, 0.5);
            t.emplace_back(ryd.find(m ^ (Mask{1} << wrap(2 * b + 2, n))), k, 0.5);
        }
    }
    return from_triplets(ryd.dim(), t);
}

SparseOp restrict_to_rydberg(const SparseOp& block_op, const BlockBasis& block, const RydbergBasis& ryd) {
    if (block_op.rows() != block.dim()) throw Error(ErrorCode::basis_mismatch, "operator is not on this block basis");
    const auto map = block_to_rydberg_map(block, ryd);
    std::vector<Triplet> t;
    for (Index r = 0; r < block_op.outerSize(); ++r) {
        if (map[r] < 0) continue;
        for (SparseOp::InnerIterator it(block_op, r); it; ++it) {
            const Index c = map[it.col()];
            if (c >= 0) t.emplace_back(map[r], c, it.value());
        }
    }
    return from_triplets(ryd.dim(), t);
}

std::vector<Index> basis_permutation(const RydbergBasis& ryd, const SymmetryOp& op) {
    const Lattice& lat = *ryd.lattice;
    if (static_cast<int>(op.perm.size()) != lat.n_sites || !preserves_edges(lat, op))
        throw Error(ErrorCode::basis_mismatch, "permutation '" + op.label + "' is not a lattice symmetry");
    std::vector<Index> perm(ryd.dim());
    for (Index i = 0; i < ryd.dim(); ++i) perm[i] = ryd.find(permute_mask(ryd.states[i], op));
    return perm;
}

SparseOp permutation_operator(const RydbergBasis& ryd, const SymmetryOp& op) {
    const auto perm = basis_permutation(ryd, op);
    std::vector<Triplet> t;
    for (Index i = 0; i < ryd.dim(); ++i) t.emplace_back(perm[i], i, 1.0);
    return from_triplets(ryd.dim(), t);
}

SparseOp symmetrize(const SparseOp& op, const RydbergBasis& ryd, const std::vector<SymmetryOp>& group) {
    if (group.empty()) throw Error(ErrorCode::basis_mismatch, "symmetry group is empty");
    if (op.rows() != ryd.dim()) throw Error(ErrorCode::basis_mismatch, "operator is not on this Rydberg basis");
    const double w = 1.0 / static_cast<double>(group.size());
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(op.nonZeros()) * group.size());
    for (const auto& g : group) {
        const auto perm = basis_permutation(ryd, g);
        for (Index r = 0; r < op.outerSize(); ++r)
            for (SparseOp::InnerIterator it(op, r); it; ++it) t.emplace_back(perm[r], perm[it.col()], w * it.value());
    }
    return from_triplets(ryd.dim(), t);
}

} // namespace pxpscar
