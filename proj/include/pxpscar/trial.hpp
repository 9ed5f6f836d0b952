// trial.hpp
#pragma once

#include "pxpscar/blockspin.hpp"

#include <cmath>
#include <string>

namespace pxpscar {

// (J^-)^{N_b-n} applied to the x-polarized product state, normalized after each step.
VectorXr parent_state(const BlockBasis& block, int n);

// All parents n = N_b, N_b-1, ..., -N_b as columns (column k holds n = N_b - k).
MatrixXr parent_tower(const BlockBasis& block);

VectorXr trial_scar(const BlockBasis& block, const RydbergBasis& ryd, int n);

// Cover-free construction through U_phi and the staggered lowering operator.
inline const double kPhi = std::atan(kSqrt2);
VectorXr trial_scar_invariant(const RydbergBasis& ryd, int n);

VectorXr neel_state(const RydbergBasis& ryd, const DimerCover& cover);
// All alpha sites excited.
VectorXr anti_neel_state(const RydbergBasis& ryd, const DimerCover& cover);

struct NeelDecomposition {
    double residual;         // |Z2> vs 2^-N Sum_k P (J^-)^k |+^...> / k!
    double residual_swapped; // all-alpha state vs 2^-N Sum_k P (-J^+)^k |-^...> / k!
    double local_residual;   // |+> vs (1/2) exp(J^-) |+^> on one block
};
NeelDecomposition verify_neel_decomposition(const BlockBasis& block, const RydbergBasis& ryd);

// P_Ryd applied to prod_i (|down> + z |up>), normalized.
VectorXr lesanovsky_state(const RydbergBasis& ryd, double z);

struct LesanovskyMatch {
    double z;
    double overlap_top;    // |<psi_z|S_{N_b}>|
    double overlap_bottom; // |<psi_z|S_{-N_b}>|
};
std::vector<LesanovskyMatch> lesanovsky_scan(const BlockBasis& block, const RydbergBasis& ryd);

// <v|O_g|v> for a unit vector v.
double symmetry_expectation(const RydbergBasis& ryd, const SymmetryOp& op, const VectorXr& v);

enum class TrialRoute { block_ladder, invariant, mps };
std::string to_string(TrialRoute route);

struct TrialTower {
    TrialRoute route = TrialRoute::block_ladder;
    int n_blocks = 0;
    std::vector<int> n_values; // N_b, N_b-1, ..., -N_b
    MatrixXr states;           // one unit column per entry of n_values
    VectorXr column(int n) const { return states.col(n_blocks - n); }
};

// mps_momentum projects each MPS state onto translation eigenvalue (-1)^{N_b-n}.
TrialTower tower(const BlockBasis& block, const RydbergBasis& ryd, TrialRoute route, bool mps_momentum = false);

} // namespace pxpscar
