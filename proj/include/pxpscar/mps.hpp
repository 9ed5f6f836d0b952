// mps.hpp
#pragma once

#include "pxpscar/hilbert.hpp"

#include <array>
#include <optional>

namespace pxpscar {

enum class Tau { right, left };

// Bond-dimension-2 tensors of the zero-energy state, indexed by block digit (+, 0, -).
struct MpsTensors {
    std::array<Eigen::Matrix2d, 3> a;
    std::array<Eigen::Vector2d, 3> v_right, v_left, w_right, w_left;

    const std::array<Eigen::Vector2d, 3>& v(Tau t) const { return t == Tau::right ? v_right : v_left; }
    const std::array<Eigen::Vector2d, 3>& w(Tau t) const { return t == Tau::right ? w_right : w_left; }
    // v_down = (v_right - v_left)/sqrt2, w_up = (w_right + w_left)/sqrt2
    std::array<Eigen::Vector2d, 3> v_down() const;
    std::array<Eigen::Vector2d, 3> w_up() const;
};

const MpsTensors& mps_tensors();

// Insertions that turn the periodic trace into the boundary-vector forms:
// w_right^s v_right^t^T = A^s K A^t, and w_up^s v_down^t^T = A^s L A^t.
Eigen::Matrix2d mps_insertion_k();
Eigen::Matrix2d mps_insertion_l();

// Unnormalized amplitudes over the block basis (default chain cover).
// PBC: Tr[A^s1 ... A^sN]; OBC: v_tau^s1 A^s2 ... A^s(N-1) w_tau'^sN.
VectorXr gamma_block(const BlockBasis& block, std::optional<std::pair<Tau, Tau>> taus = std::nullopt);

// Largest amplitude of gamma_block on blockaded configurations.
double gamma_blockade_leak(const BlockBasis& block, const VectorXr& amplitudes);

// Normalized |Gamma> or |Gamma^{tau tau'}> on the Rydberg basis.
VectorXr gamma_state(const BlockBasis& block, const RydbergBasis& ryd,
                     std::optional<std::pair<Tau, Tau>> taus = std::nullopt);

// Normalized P_Ryd (J^+)^n |Gamma> (n >= 0) or P_Ryd (J^-)^{|n|} |Gamma> (n < 0).
// momentum_project keeps the component with translation eigenvalue (-1)^{N_b-n}.
VectorXr mps_trial(const BlockBasis& block, const RydbergBasis& ryd, int n, bool momentum_project = false);

// Unprojected Sum_b M^{->->}_{b,b+1} and the remainder Sum_b (|+,0>+|0,->)_{b,b+1} M^{up,down}_{b-1,b+2},
// built literally from the boundary vectors (dense oracle for the transfer matrices).
VectorXr mps1_block(const BlockBasis& block);
VectorXr delta_mps1_block(const BlockBasis& block);

struct TransferNorms {
    int n_blocks;
    double norm_mps1;          // <MPS_1|MPS_1>
    double inner_mps1_delta;   // <MPS_1|dMPS_1>
    double norm_delta;         // <dMPS_1|dMPS_1>
    double energy_literal;     // sqrt2 + (1/4) inner/norm
    double perp_ratio_literal; // sqrt(<d|d>/<M|M> - (inner/norm)^2) / 4
    double energy_exact;       // sqrt2 + (1/8) inner/norm
    double perp_ratio_exact;   // sqrt(<d|d>/<M|M> - (inner/norm)^2) / 8
    double norm_reference;     // (14N/9)(3/4)^N
    double inner_reference;    // -(4 sqrt2 N/9)(3/4)^N
};

// Least-squares c in H|MPS_1> = sqrt2 |MPS_1> + c |dMPS_1>, with the residual norm ratio.
struct RemainderFit {
    double coefficient;
    double relative_residual;
};
RemainderFit remainder_coefficient(const BlockBasis& block, const RydbergBasis& ryd);

// Exact contractions with the blockade enforced on every bond of the ring.
TransferNorms transfer_norms(int n_blocks);

} // namespace pxpscar
