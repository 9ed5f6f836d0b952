#include "pxpscar/trial.hpp"

#include "pxpscar/mps.hpp"

#include <bit>
#include <cmath>

namespace pxpscar {
namespace {

VectorXr product_state(const BlockBasis& block, const Eigen::Vector3d& local) {
    VectorXr v(block.dim());
    for (Index k = 0; k < block.dim(); ++k) {
        double a = 1.0;
        Index s = k;
        for (int b = 0; b < block.n_blocks; ++b) {
            a *= local[s % 3];
            s /= 3;
        }
        v[k] = a;
    }
    return v;
}

VectorXr normalized(VectorXr v, const char* what) {
    const double norm = v.norm();
    if (norm < 1e-12) throw Error(ErrorCode::degenerate_ansatz, what);
    return v / norm;
}

} // namespace

VectorXr parent_state(const BlockBasis& block, int n) {
    const int nb = block.n_blocks;
    if (n < -nb || n > nb) throw Error(ErrorCode::out_of_range, "n must lie in [-N_b, N_b]");
    const SparseOp lower = build_ladder(block, Ladder::lower);
    VectorXr v = product_state(block, spin1::x_plus());
    for (int step = 0; step < nb - n; ++step) {
        v = lower * v;
        v /= v.norm();
    }
    return v;
}

MatrixXr parent_tower(const BlockBasis& block) {
    const int nb = block.n_blocks;
    const SparseOp lower = build_ladder(block, Ladder::lower);
    MatrixXr out(block.dim(), 2 * nb + 1);
    VectorXr v = product_state(block, spin1::x_plus());
    for (int k = 0; k <= 2 * nb; ++k) {
        out.col(k) = v;
        if (k < 2 * nb) {
            v = lower * v;
            v /= v.norm();
        }
    }
    return out;
}

VectorXr trial_scar(const BlockBasis& block, const RydbergBasis& ryd, int n) {
    return normalized(project_ryd(block, ryd, parent_state(block, n)), "projected parent state vanishes");
}

VectorXr trial_scar_invariant(const RydbergBasis& ryd, int n) {
    const Lattice& lat = *ryd.lattice;
    const FullBasis full = make_full_basis(lat);
    const int nb = lat.n_blocks();
    if (n < -nb || n > nb) throw Error(ErrorCode::out_of_range, "n must lie in [-N_b, N_b]");
    const Index dim = full.dim();

    VectorXr v = VectorXr::Zero(dim);
    v[dim - 1] = 1.0; // all up
    for (int step = 0; step < nb - n; ++step) {
        VectorXr next = VectorXr::Zero(dim);
        for (Index m = 0; m < dim; ++m) {
            if (v[m] == 0.0) continue;
            for (int i = 0; i < lat.n_sites; ++i) {
                if (!((m >> i) & 1)) continue;
                const double sign = lat.sublattice[i] == Sublattice::A ? -1.0 : 1.0;
                next[m ^ (Index{1} << i)] += sign * v[m];
            }
        }
        v = next / next.norm();
    }

    // U|up> = cos|up> + sin|down>, U|down> = cos|up> - sin|down>
    const double c = std::cos(kPhi), s = std::sin(kPhi);
    for (int i = 0; i < lat.n_sites; ++i) {
        const Index bit = Index{1} << i;
        for (Index m = 0; m < dim; ++m) {
            if (m & bit) continue;
            const double down = v[m], upv = v[m | bit];
            v[m | bit] = c * upv + c * down;
            v[m] = s * upv - s * down;
        }
    }
    return normalized(project_ryd_full(full, ryd, v), "projected invariant state vanishes");
}

VectorXr neel_state(const RydbergBasis& ryd, const DimerCover& cover) {
    Mask m = 0;
    for (auto [a, b] : cover.dimers) m |= Mask{1} << b;
    VectorXr v = VectorXr::Zero(ryd.dim());
    const Index j = ryd.find(m);
    if (j < 0) throw Error(ErrorCode::basis_mismatch, "Neel configuration is not in the basis");
    v[j] = 1.0;
    return v;
}

VectorXr anti_neel_state(const RydbergBasis& ryd, const DimerCover& cover) {
    Mask m = 0;
    for (auto [a, b] : cover.dimers) m |= Mask{1} << a;
    VectorXr v = VectorXr::Zero(ryd.dim());
    const Index j = ryd.find(m);
    if (j < 0) throw Error(ErrorCode::basis_mismatch, "alpha-excited configuration is not in the basis");
    v[j] = 1.0;
    return v;
}

NeelDecomposition verify_neel_decomposition(const BlockBasis& block, const RydbergBasis& ryd) {
    const int nb = block.n_blocks;
    auto series = [&](const SparseOp& ladder, const Eigen::Vector3d& start) {
        VectorXr term = product_state(block, start);
        VectorXr sum = term;
        for (int k = 1; k <= 2 * nb; ++k) {
            term = ladder * term / static_cast<double>(k);
            sum += term;
        }
        return VectorXr(project_ryd(block, ryd, sum) * std::pow(2.0, -nb));
    };
    const SparseOp lower = build_ladder(block, Ladder::lower);
    const SparseOp minus_raise = -build_ladder(block, Ladder::raise);

    NeelDecomposition r{};
    r.residual = (neel_state(ryd, block.cover) - series(lower, spin1::x_plus())).norm();
    r.residual_swapped = (anti_neel_state(ryd, block.cover) - series(minus_raise, spin1::x_minus())).norm();

    const Eigen::Matrix3d jm = spin1::lower();
    const Eigen::Matrix3d e = Eigen::Matrix3d::Identity() + jm + jm * jm / 2.0; // (J^-)^3 = 0
    r.local_residual = (0.5 * e * spin1::x_plus() - Eigen::Vector3d(1, 0, 0)).norm();
    return r;
}

VectorXr lesanovsky_state(const RydbergBasis& ryd, double z) {
    VectorXr v(ryd.dim());
    for (Index j = 0; j < ryd.dim(); ++j) v[j] = std::pow(z, std::popcount(ryd.states[j]));
    return v / v.norm();
}

std::vector<LesanovskyMatch> lesanovsky_scan(const BlockBasis& block, const RydbergBasis& ryd) {
    const int nb = block.n_blocks;
    const VectorXr top = trial_scar(block, ryd, nb);
    const VectorXr bottom = trial_scar(block, ryd, -nb);
    std::vector<LesanovskyMatch> out;
    for (double z : {kSqrt2, -kSqrt2, 1 / kSqrt2, -1 / kSqrt2}) {
        const VectorXr psi = lesanovsky_state(ryd, z);
        out.push_back({z, std::abs(psi.dot(top)), std::abs(psi.dot(bottom))});
    }
    return out;
}

double symmetry_expectation(const RydbergBasis& ryd, const SymmetryOp& op, const VectorXr& v) {
    return v.dot(apply_symmetry(ryd, op, v));
}

std::string to_string(TrialRoute route) {
    switch (route) {
    case TrialRoute::block_ladder: return "block-ladder";
    case TrialRoute::invariant: return "invariant";
    case TrialRoute::mps: return "mps";
    }
    return "unknown";
}

TrialTower tower(const BlockBasis& block, const RydbergBasis& ryd, TrialRoute route, bool mps_momentum) {
    const int nb = block.n_blocks;
    TrialTower t;
    t.route = route;
    t.n_blocks = nb;
    t.states.resize(ryd.dim(), 2 * nb + 1);
    if (route == TrialRoute::block_ladder) {
        const MatrixXr parents = parent_tower(block);
        for (int k = 0; k <= 2 * nb; ++k)
            t.states.col(k) = normalized(project_ryd(block, ryd, VectorXr(parents.col(k))), "projected parent vanishes");
    }
    for (int k = 0; k <= 2 * nb; ++k) {
        const int n = nb - k;
        t.n_values.push_back(n);
        if (route == TrialRoute::invariant) t.states.col(k) = trial_scar_invariant(ryd, n);
        else if (route == TrialRoute::mps) t.states.col(k) = mps_trial(block, ryd, n, mps_momentum);
    }
    return t;
}

} // namespace pxpscar
