// operators.hpp
#pragma once

#include "pxpscar/hilbert.hpp"

#include <map>

namespace pxpscar {

using SparseOp = SparseMatrix<double>;

// Largest |M_ij - M_ji|.
double hermiticity_residual(const SparseOp& m);
void require_hermitian(const SparseOp& m, double tol = 1e-12);

// Sum_i P X_i P over all neighbours of i.
SparseOp build_pxp(const Lattice& lat, const RydbergBasis& ryd);

// (lambda/8) Sum_i P_{i-1} X_i P_{i+1} (P_{i-2} + P_{i+2}), periodic chain.
SparseOp build_dh_lambda(const Lattice& lat, const RydbergBasis& ryd, double lambda);
// Same operator acting on the block basis (it never creates intra-dimer pairs).
SparseOp build_dh_lambda_block(const Lattice& lat, const BlockBasis& block, double lambda);

// Sum_d lambda_d Sum_i P_{i-1} X_i P_{i+1} (Z_{i-d} + Z_{i+d}).
SparseOp build_dh_su2(const Lattice& lat, const RydbergBasis& ryd, const std::map<int, double>& coefficients);
std::map<int, double> default_su2_coefficients(int n_blocks, double h0 = 0.05);

// (1/2) Sum_b P_{2b-1} (sigma+_{2b} P_{2b+1} + P_{2b} sigma+_{2b+1}) P_{2b+2}, 1-indexed sites.
SparseOp build_dh_nh_chain(const Lattice& lat, const RydbergBasis& ryd);

// P_Ryd A P_Ryd for a block-basis operator A, expressed on the Rydberg basis.
SparseOp restrict_to_rydberg(const SparseOp& block_op, const BlockBasis& block, const RydbergBasis& ryd);

// Basis permutation induced by a site permutation: position of O_g|state_i>.
std::vector<Index> basis_permutation(const RydbergBasis& ryd, const SymmetryOp& op);
SparseOp permutation_operator(const RydbergBasis& ryd, const SymmetryOp& op);

template <class S>
Vector<S> apply_symmetry(const RydbergBasis& ryd, const SymmetryOp& op, const Vector<S>& v) {
    const auto perm = basis_permutation(ryd, op);
    Vector<S> out(v.size());
    for (Index i = 0; i < ryd.dim(); ++i) out[perm[i]] = v[i];
    return out;
}

// (1/|G|) Sum_g O_g A O_g^-1 on the Rydberg basis.
SparseOp symmetrize(const SparseOp& op, const RydbergBasis& ryd, const std::vector<SymmetryOp>& group);

} // namespace pxpscar
