#include "pxpscar/blockspin.hpp"

#include <cmath>

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

int block_of_site(const BlockBasis& block, int site) {
    for (int c = 0; c < block.n_blocks; ++c)
        if (block.cover.dimers[c].first == site || block.cover.dimers[c].second == site) return c;
    return -1;
}

std::vector<std::vector<int>> nonempty_subsets(const std::vector<int>& items) {
    std::vector<std::vector<int>> out;
    const int n = static_cast<int>(items.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> s;
        for (int j = 0; j < n; ++j)
            if (mask & (1 << j)) s.push_back(items[j]);
        out.push_back(std::move(s));
    }
    return out;
}

// One side of H_1: the flipped block b leaves `from` for |0>, spectators in `spectator` on `others`.
struct Side {
    int from;
    int spectator;
    std::vector<int> others;
};

std::vector<std::pair<int, Side>> sides(const BlockBasis& block) {
    std::vector<std::pair<int, Side>> out;
    for (int b = 0; b < block.n_blocks; ++b) {
        out.push_back({b, Side{kPlus, kMinus, beta_neighbour_blocks(block, b)}});
        out.push_back({b, Side{kMinus, kPlus, alpha_neighbour_blocks(block, b)}});
    }
    return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Sum_j op_j on (C^3)^m with block j at digit weight 3^j.
Eigen::MatrixXcd local_sum(int m, const Eigen::Matrix3cd& op) {
    Index dim = 1;
    for (int j = 0; j < m; ++j) dim *= 3;
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < m; ++j) {
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(1, 1);
        // kron builds most-significant first: blocks m-1 .. 0
        for (int q = m - 1; q >= 0; --q) {
            Eigen::MatrixXcd f = (q == j) ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd::Identity(3, 3);
            term = kron(term, f);
        }
        total += term;
    }
    return total;
}

} // namespace

namespace spin1 {
Eigen::Matrix3d sx() {
    Eigen::Matrix3d m;
    m << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    return m / kSqrt2;
}
Eigen::Matrix3cd sy() {
    const cplx i{0.0, 1.0};
    Eigen::Matrix3cd m;
    m << 0.0, -i, 0.0, i, 0.0, -i, 0.0, i, 0.0;
    return m / kSqrt2;
}
Eigen::Matrix3d sz() { return Eigen::Vector3d(1, 0, -1).asDiagonal(); }
Eigen::Matrix3d lower() {
    // S^z + i S^y
    Eigen::Matrix3d m;
    m << 1, 1 / kSqrt2, 0, -1 / kSqrt2, 0, 1 / kSqrt2, 0, -1 / kSqrt2, -1;
    return m;
}
Eigen::Matrix3d raise() { return lower().transpose(); }
Eigen::Vector3d x_plus() { return {0.5, 1 / kSqrt2, 0.5}; }
Eigen::Vector3d x_zero() { return {1 / kSqrt2, 0, -1 / kSqrt2}; }
Eigen::Vector3d x_minus() { return {0.5, -1 / kSqrt2, 0.5}; }
} // namespace spin1

SparseOp sum_local(const BlockBasis& block, const Eigen::Matrix3d& local) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(block.dim()) * block.n_blocks * 2);
    for (Index k = 0; k < block.dim(); ++k) {
        for (int b = 0; b < block.n_blocks; ++b) {
            const int d = block.digit(k, b);
            for (int e = 0; e < 3; ++e)
                if (local(e, d) != 0.0) t.emplace_back(block.with_digit(k, b, e), k, local(e, d));
        }
    }
    return from_triplets(block.dim(), t);
}

SparseOp build_ladder(const BlockBasis& block, Ladder which) {
    return sum_local(block, which == Ladder::lower ? spin1::lower() : spin1::raise());
}

std::vector<int> beta_neighbour_blocks(const BlockBasis& block, int b) {
    std::vector<int> out;
    for (int s : block.lattice->adjacency[block.cover.dimers[b].second]) {
        const int c = block_of_site(block, s);
        if (c != b) out.push_back(c);
    }
    return out;
}

std::vector<int> alpha_neighbour_blocks(const BlockBasis& block, int b) {
    std::vector<int> out;
    for (int s : block.lattice->adjacency[block.cover.dimers[b].first]) {
        const int c = block_of_site(block, s);
        if (c != b) out.push_back(c);
    }
    return out;
}

BlockspinParts build_blockspin_parts(const BlockBasis& block) {
    BlockspinParts parts;
    parts.hz = kSqrt2 * sum_local(block, spin1::sx());

    const auto all_sides = sides(block);
    std::vector<Triplet> t;
    for (Index k = 0; k < block.dim(); ++k) {
        for (const auto& [b, side] : all_sides) {
            if (block.digit(k, b) != side.from) continue;
            bool free = true;
            for (int c : side.others) free = free && block.digit(k, c) != side.spectator;
            // |0><from|_b (prod_c (1 - |spec><spec|_c) - 1)
            if (!free) t.emplace_back(block.with_digit(k, b, kZero), k, -1.0);
        }
    }
    parts.h1 = from_triplets(block.dim(), t);
    parts.h2 = parts.h1.transpose();
    return parts;
}

SparseOp build_h1_expanded(const BlockBasis& block) {
    const auto all_sides = sides(block);
    std::vector<Triplet> t;
    for (const auto& [b, side] : all_sides) {
        for (const auto& subset : nonempty_subsets(side.others)) {
            const double sign = (subset.size() % 2 == 0) ? 1.0 : -1.0;
            for (Index k = 0; k < block.dim(); ++k) {
                if (block.digit(k, b) != side.from) continue;
                bool match = true;
                for (int c : subset) match = match && block.digit(k, c) == side.spectator;
                if (match) t.emplace_back(block.with_digit(k, b, kZero), k, sign);
            }
        }
    }
    return from_triplets(block.dim(), t);
}

SparseOp build_dh_nh_generic(const BlockBasis& block, bool inject_sign_error) {
    const Lattice& lat = *block.lattice;
    const auto all_sides = sides(block);
    std::vector<Triplet> t;
    for (const auto& [b, side] : all_sides) {
        if (side.others.size() > 3)
            throw Error(ErrorCode::subset_too_large, "counterterm supports coordination up to 4");
        for (const auto& subset : nonempty_subsets(side.others)) {
            const int k = static_cast<int>(subset.size());
            double coeff = ((k % 2 == 0) ? -1.0 : 1.0) / (2.0 * k);
            if (inject_sign_error && k == 1) coeff = -coeff;
            for (int j : subset) {
                // site excited by the transition and the outside digit that would block it
                const int site = side.spectator == kMinus ? block.cover.dimers[j].first : block.cover.dimers[j].second;
                const int blocking = side.spectator == kMinus ? kPlus : kMinus;
                std::vector<int> outside;
                for (int s : lat.adjacency[site]) {
                    const int e = block_of_site(block, s);
                    if (e != j) outside.push_back(e);
                }
                for (Index src = 0; src < block.dim(); ++src) {
                    if (block.digit(src, b) != kZero || block.digit(src, j) != kZero) continue;
                    bool match = true;
                    for (int c : subset)
                        if (c != j) match = match && block.digit(src, c) == side.spectator;
                    for (int e : outside) match = match && block.digit(src, e) != blocking;
                    if (match) t.emplace_back(block.with_digit(src, j, side.spectator), src, coeff);
                }
            }
        }
    }
    return from_triplets(block.dim(), t);
}

SparseOp build_dh_nh_inv(const BlockBasis& block, const RydbergBasis& ryd, bool inject_sign_error) {
    const Lattice& lat = *block.lattice;
    const SparseOp local = restrict_to_rydberg(build_dh_nh_generic(block, inject_sign_error), block, ryd);
    const SymmetryKind kind = lat.is_honeycomb() ? SymmetryKind::rotations : SymmetryKind::translations;
    const SymmetryGroup group = symmetry_group(lat, kind);
    if (!group.ok()) return local;
    return symmetrize(local, ryd, group.ops);
}

MatrixXr local_maximal_spin_projector(int m) {
    if (m < 2 || m > 4) throw Error(ErrorCode::subset_too_large, "maximal-spin projector needs 2 to 4 blocks");
    const Eigen::MatrixXcd x = local_sum(m, spin1::sx().cast<cplx>());
    const Eigen::MatrixXcd y = local_sum(m, spin1::sy());
    const Eigen::MatrixXcd z = local_sum(m, spin1::sz().cast<cplx>());
    const MatrixXr s2 = (x * x + y * y + z * z).real();
    Eigen::SelfAdjointEigenSolver<MatrixXr> es(s2);
    const double target = m * (m + 1.0);
    MatrixXr p = MatrixXr::Zero(s2.rows(), s2.cols());
    for (Index c = 0; c < s2.cols(); ++c)
        if (std::abs(es.eigenvalues()[c] - target) < 1e-8) p += es.eigenvectors().col(c) * es.eigenvectors().col(c).transpose();
    return p;
}

SparseOp maximal_spin_projector(const BlockBasis& block, const std::vector<int>& blocks) {
    const int m = static_cast<int>(blocks.size());
    const MatrixXr p = local_maximal_spin_projector(m);
    std::vector<Triplet> t;
    for (Index k = 0; k < block.dim(); ++k) {
        Index l = 0, rest = k, w = 1;
        for (int j = 0; j < m; ++j) {
            const int d = block.digit(k, blocks[j]);
            l += d * w;
            w *= 3;
            rest -= d * block.pow3[blocks[j]];
        }
        for (Index lp = 0; lp < p.rows(); ++lp) {
            const double v = p(lp, l);
            if (std::abs(v) < 1e-14) continue;
            Index target = rest, q = lp;
            for (int j = 0; j < m; ++j) {
                target += (q % 3) * block.pow3[blocks[j]];
                q /= 3;
            }
            t.emplace_back(target, k, v);
        }
    }
    return from_triplets(block.dim(), t);
}

double counterterm_residual(int k, bool mirrored) {
    const int m = k + 1;
    const MatrixXr p = local_maximal_spin_projector(m);
    const int parent = mirrored ? kMinus : kPlus;
    const int spectator = mirrored ? kPlus : kMinus;
    auto index = [](const std::vector<int>& d) {
        Index l = 0, w = 1;
        for (int x : d) {
            l += x * w;
            w *= 3;
        }
        return l;
    };
    VectorXr diff = VectorXr::Zero(p.rows());
    std::vector<int> d(m, spectator);
    d[0] = parent;
    diff[index(d)] -= 1.0;
    for (int j = 1; j < m; ++j) {
        std::vector<int> c(m, spectator);
        c[0] = kZero;
        c[j] = kZero;
        diff[index(c)] += 1.0 / (2.0 * k);
    }
    return (p * diff).norm();
}

} // namespace pxpscar
