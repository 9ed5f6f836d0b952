#include "pxpscar/mps.hpp"

#include "pxpscar/blockspin.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace pxpscar {
namespace {

void require_chain_cover(const BlockBasis& block) {
    if (!block.lattice->is_chain()) throw Error(ErrorCode::unsupported_lattice, "MPS states are defined on the chain");
    for (int b = 0; b < block.n_blocks; ++b)
        if (block.cover.dimers[b] != Edge{2 * b, 2 * b + 1})
            throw Error(ErrorCode::invalid_cover, "MPS states use the default chain cover");
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Augmented tensors: a state Tr[W^s1 ... W^sN C] on an enlarged bond space.
struct Augmented {
    std::array<MatrixXr, 3> w;
    MatrixXr closure;
};

// stage 0 before the insertion, stage 1 after; closure wraps stage 1 back to 0
Augmented augmented_mps1() {
    const auto& t = mps_tensors();
    const Eigen::Matrix2d k = mps_insertion_k();
    Augmented g;
    for (int s = 0; s < 3; ++s) {
        g.w[s] = MatrixXr::Zero(4, 4);
        g.w[s].block(0, 0, 2, 2) = t.a[s];
        g.w[s].block(2, 2, 2, 2) = t.a[s];
        g.w[s].block(0, 2, 2, 2) = k * t.a[s];
    }
    g.closure = MatrixXr::Zero(4, 4);
    g.closure.block(2, 0, 2, 2) = Eigen::Matrix2d::Identity();
    return g;
}

// stages (count, sub) with sub in {open, after + awaiting 0, after 0 awaiting -}
Augmented augmented_delta() {
    const auto& t = mps_tensors();
    const Eigen::Matrix2d l = mps_insertion_l();
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    Augmented g;
    for (int s = 0; s < 3; ++s) g.w[s] = MatrixXr::Zero(12, 12);
    auto put = [&](int s, int from, int to, const Eigen::Matrix2d& m) { g.w[s].block(2 * from, 2 * to, 2, 2) += m; };
    for (int c : {0, 3}) {
        for (int s = 0; s < 3; ++s) put(s, c, c, t.a[s]);
        put(kZero, c + 1, c, id);
        put(kMinus, c + 2, c, id);
    }
    put(kPlus, 0, 4, l);
    put(kZero, 0, 5, l);
    g.closure = MatrixXr::Zero(12, 12);
    for (int x = 0; x < 3; ++x) g.closure.block(2 * (3 + x), 2 * x, 2, 2) = id;
    return g;
}

// Sum over constrained rings of Tr[(X^s1 (x) Y^s1) ... (C_X (x) C_Y)].
double constrained_inner(const Augmented& x, const Augmented& y, int n) {
    std::array<MatrixXr, 3> g;
    for (int s = 0; s < 3; ++s) g[s] = Eigen::kroneckerProduct(x.w[s], y.w[s]);
    const MatrixXr c = Eigen::kroneckerProduct(x.closure, y.closure);
    const Index dim = g[0].rows();
    double total = 0.0;
    for (int first = 0; first < 3; ++first) {
        std::array<MatrixXr, 3> m;
        std::array<bool, 3> live{false, false, false};
        m[first] = g[first];
        live[first] = true;
        for (int i = 1; i < n; ++i) {
            std::array<MatrixXr, 3> next;
            std::array<bool, 3> next_live{false, false, false};
            for (int q = 0; q < 3; ++q) {
                MatrixXr acc = MatrixXr::Zero(dim, dim);
                bool any = false;
                for (int p = 0; p < 3; ++p) {
                    if (!live[p] || (p == kPlus && q == kMinus)) continue;
                    acc += m[p];
                    any = true;
                }
                if (any) {
                    next[q] = acc * g[q];
                    next_live[q] = true;
                }
            }
            m = std::move(next);
            live = next_live;
        }
        for (int p = 0; p < 3; ++p)
            if (live[p] && !(p == kPlus && first == kMinus)) total += (m[p] * c).trace();
    }
    return total;
}

} // namespace

std::array<Eigen::Vector2d, 3> MpsTensors::v_down() const {
    std::array<Eigen::Vector2d, 3> out;
    for (int s = 0; s < 3; ++s) out[s] = (v_right[s] - v_left[s]) / kSqrt2;
    return out;
}

std::array<Eigen::Vector2d, 3> MpsTensors::w_up() const {
    std::array<Eigen::Vector2d, 3> out;
    for (int s = 0; s < 3; ++s) out[s] = (w_right[s] + w_left[s]) / kSqrt2;
    return out;
}

const MpsTensors& mps_tensors() {
    static const MpsTensors t = [] {
        MpsTensors m;
        const double r = 1.0 / (2.0 * kSqrt2);
        m.a[kPlus] << kSqrt2 * r, 0, 0, 0;
        m.a[kZero] << 0, -r, r, 0;
        m.a[kMinus] << 0, 0, 0, -kSqrt2 * r;
        m.v_right[kPlus] = Eigen::Vector2d(kSqrt2, 0) / 2;
        m.v_right[kZero] = Eigen::Vector2d(1, -1) / 2;
        m.v_right[kMinus] = Eigen::Vector2d(0, -kSqrt2) / 2;
        m.v_left[kPlus] = Eigen::Vector2d(kSqrt2, 0) / 2;
        m.v_left[kZero] = Eigen::Vector2d(-1, -1) / 2;
        m.v_left[kMinus] = Eigen::Vector2d(0, kSqrt2) / 2;
        m.w_right[kPlus] = Eigen::Vector2d(kSqrt2, 0) * r;
        m.w_right[kZero] = Eigen::Vector2d(1, 1) * r;
        m.w_right[kMinus] = Eigen::Vector2d(0, kSqrt2) * r;
        m.w_left[kPlus] = Eigen::Vector2d(kSqrt2, 0) * r;
        m.w_left[kZero] = Eigen::Vector2d(-1, 1) * r;
        m.w_left[kMinus] = Eigen::Vector2d(0, -kSqrt2) * r;
        return m;
    }();
    return t;
}

Eigen::Matrix2d mps_insertion_k() {
    Eigen::Matrix2d k;
    k << 1, 1, -1, -1;
    return kSqrt2 * k;
}

Eigen::Matrix2d mps_insertion_l() {
    Eigen::Matrix2d l;
    l << 0, 2 * kSqrt2, 0, 0;
    return l;
}

VectorXr gamma_block(const BlockBasis& block, std::optional<std::pair<Tau, Tau>> taus) {
    require_chain_cover(block);
    const Lattice& lat = *block.lattice;
    const bool periodic = lat.boundary == Boundary::periodic;
    if (periodic == taus.has_value())
        throw Error(ErrorCode::config_error, "boundary vectors are required for open chains and only for them");
    const auto& t = mps_tensors();
    const int n = block.n_blocks;
    VectorXr out(block.dim());
    for (Index k = 0; k < block.dim(); ++k) {
        const auto d = block.digits(k);
        if (periodic) {
            Eigen::Matrix2d m = t.a[d[0]];
            for (int b = 1; b < n; ++b) m = m * t.a[d[b]];
            out[k] = m.trace();
        } else {
            Eigen::RowVector2d row = t.v(taus->first)[d[0]].transpose();
            for (int b = 1; b + 1 < n; ++b) row = row * t.a[d[b]];
            out[k] = row.dot(t.w(taus->second)[d[n - 1]]);
        }
    }
    return out;
}

double gamma_blockade_leak(const BlockBasis& block, const VectorXr& amplitudes) {
    double leak = 0.0;
    for (Index k = 0; k < block.dim(); ++k)
        if (!blockade_ok(*block.lattice, block.to_halfspin(k))) leak = std::max(leak, std::abs(amplitudes[k]));
    return leak;
}

VectorXr gamma_state(const BlockBasis& block, const RydbergBasis& ryd, std::optional<std::pair<Tau, Tau>> taus) {
    VectorXr v = project_ryd(block, ryd, gamma_block(block, taus));
    const double norm = v.norm();
    if (norm < 1e-300) throw Error(ErrorCode::degenerate_ansatz, "MPS state vanishes");
    return v / norm;
}

VectorXr mps_trial(const BlockBasis& block, const RydbergBasis& ryd, int n, bool momentum_project) {
    const int nb = block.n_blocks;
    if (n < -nb || n > nb) throw Error(ErrorCode::out_of_range, "n must lie in [-N_b, N_b]");
    if (block.lattice->boundary != Boundary::periodic)
        throw Error(ErrorCode::unsupported_lattice, "MPS tower uses the periodic chain");
    VectorXr v = gamma_block(block, std::nullopt);
    const SparseOp ladder = build_ladder(block, n >= 0 ? Ladder::raise : Ladder::lower);
    for (int step = 0; step < std::abs(n); ++step) {
        v = ladder * v;
        const double norm = v.norm();
        if (norm < 1e-300) throw Error(ErrorCode::degenerate_ansatz, "ladder annihilated the MPS state");
        v /= norm;
    }
    VectorXr p = project_ryd(block, ryd, v);
    if (momentum_project) {
        const double sign = ((nb - n) % 2 == 0) ? 1.0 : -1.0;
        p = 0.5 * (p + sign * apply_symmetry(ryd, chain_translation(*block.lattice, 1), p));
    }
    const double norm = p.norm();
    if (norm < 1e-12) throw Error(ErrorCode::degenerate_ansatz, "projected MPS state vanishes");
    return p / norm;
}

VectorXr mps1_block(const BlockBasis& block) {
    require_chain_cover(block);
    const auto& t = mps_tensors();
    const int n = block.n_blocks;
    VectorXr out = VectorXr::Zero(block.dim());
    for (Index k = 0; k < block.dim(); ++k) {
        const auto d = block.digits(k);
        double amp = 0.0;
        for (int b = 0; b < n; ++b) {
            Eigen::RowVector2d row = t.v_right[d[b]].transpose();
            for (int j = 1; j <= n - 2; ++j) row = row * t.a[d[wrap(b + j, n)]];
            amp += row.dot(t.w_right[d[wrap(b + n - 1, n)]]);
        }
        out[k] = amp;
    }
    return out;
}

VectorXr delta_mps1_block(const BlockBasis& block) {
    require_chain_cover(block);
    const int n = block.n_blocks;
    if (n < 4) throw Error(ErrorCode::invalid_size, "remainder state needs at least 4 blocks");
    const auto& t = mps_tensors();
    const auto vd = t.v_down();
    const auto wu = t.w_up();
    VectorXr out = VectorXr::Zero(block.dim());
    for (Index k = 0; k < block.dim(); ++k) {
        const auto d = block.digits(k);
        double amp = 0.0;
        for (int b = 0; b < n; ++b) {
            const int s0 = d[b], s1 = d[wrap(b + 1, n)];
            const bool pair = (s0 == kPlus && s1 == kZero) || (s0 == kZero && s1 == kMinus);
            if (!pair) continue;
            Eigen::RowVector2d row = vd[d[wrap(b + 2, n)]].transpose();
            for (int j = 3; j <= n - 2; ++j) row = row * t.a[d[wrap(b + j, n)]];
            amp += row.dot(wu[d[wrap(b - 1, n)]]);
        }
        out[k] = amp;
    }
    return out;
}

RemainderFit remainder_coefficient(const BlockBasis& block, const RydbergBasis& ryd) {
    const SparseOp h = build_pxp(*block.lattice, ryd);
    const VectorXr m = project_ryd(block, ryd, mps1_block(block));
    const VectorXr d = project_ryd(block, ryd, delta_mps1_block(block));
    const VectorXr r = h * m - kSqrt2 * m;
    const double c = d.dot(r) / d.squaredNorm();
    return {c, (r - c * d).norm() / r.norm()};
}

TransferNorms transfer_norms(int n_blocks) {
    if (n_blocks < 4 || n_blocks > 200) throw Error(ErrorCode::out_of_range, "transfer contractions need 4 <= N <= 200");
    const Augmented m = augmented_mps1();
    const Augmented d = augmented_delta();
    TransferNorms r{};
    r.n_blocks = n_blocks;
    r.norm_mps1 = constrained_inner(m, m, n_blocks);
    r.inner_mps1_delta = constrained_inner(m, d, n_blocks);
    r.norm_delta = constrained_inner(d, d, n_blocks);
    const double ratio = r.inner_mps1_delta / r.norm_mps1;
    const double spread = std::sqrt(std::max(0.0, r.norm_delta / r.norm_mps1 - ratio * ratio));
    r.energy_literal = kSqrt2 + 0.25 * ratio;
    r.perp_ratio_literal = spread / 4.0;
    r.energy_exact = kSqrt2 + 0.125 * ratio;
    r.perp_ratio_exact = spread / 8.0;
    const double decay = std::pow(0.75, n_blocks);
    r.norm_reference = 14.0 * n_blocks / 9.0 * decay;
    r.inner_reference = -4.0 * kSqrt2 * n_blocks / 9.0 * decay;
    return r;
}

} // namespace pxpscar
