// blockspin.hpp
#pragma once

#include "pxpscar/operators.hpp"

#include <array>

namespace pxpscar {

// Single spin-1 matrices in the (+, 0, -) basis.
namespace spin1 {
Eigen::Matrix3d sx();
Eigen::Matrix3cd sy();
Eigen::Matrix3d sz();
// J^- and J^+ per block; real in this basis.
Eigen::Matrix3d lower();
Eigen::Matrix3d raise();
// S^x eigenvectors |+^>, |0^>, |-^> in z components.
Eigen::Vector3d x_plus();
Eigen::Vector3d x_zero();
Eigen::Vector3d x_minus();
} // namespace spin1

// Sum over blocks of a single-block operator.
SparseOp sum_local(const BlockBasis& block, const Eigen::Matrix3d& local);

enum class Ladder { raise, lower };
SparseOp build_ladder(const BlockBasis& block, Ladder which);

struct BlockspinParts {
    SparseOp hz;
    SparseOp h1;
    SparseOp h2;
};

BlockspinParts build_blockspin_parts(const BlockBasis& block);
SparseOp build_h1_expanded(const BlockBasis& block);

// Blocks whose alpha site neighbours the beta site of b, and blocks whose beta site
// neighbours the alpha site of b (b itself excluded).
std::vector<int> beta_neighbour_blocks(const BlockBasis& block, int b);
std::vector<int> alpha_neighbour_blocks(const BlockBasis& block, int b);

// Non-Hermitian counterterm on the block basis. Each term carries projectors that keep
// the newly excited site free of excited outside neighbours, so it commutes with P_Ryd.
// inject_sign_error flips the single-neighbour terms (negative control).
SparseOp build_dh_nh_generic(const BlockBasis& block, bool inject_sign_error = false);

// Symmetry-averaged counterterm on the Rydberg basis: translations for the chain,
// rotations for the honeycomb, declared symmetries otherwise.
SparseOp build_dh_nh_inv(const BlockBasis& block, const RydbergBasis& ryd, bool inject_sign_error = false);

// Projector onto total spin |blocks| of the chosen blocks, identity elsewhere.
SparseOp maximal_spin_projector(const BlockBasis& block, const std::vector<int>& blocks);
// Dense version on (C^3)^{m}, m = 2..4.
MatrixXr local_maximal_spin_projector(int m);

// || P^{S=k+1} (|chi> - |+,-,...,->) || on k+1 blocks; mirrored picks the (-,+,...,+) variant.
double counterterm_residual(int k, bool mirrored);

} // namespace pxpscar
