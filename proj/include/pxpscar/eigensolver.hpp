// eigensolver.hpp
#pragma once

#include "pxpscar/types.hpp"

namespace pxpscar {

inline constexpr Index kMaxDenseDimension = 20000;

struct SpectralDecomposition {
    VectorXr eigenvalues; // ascending
    MatrixXr eigenvectors; // orthonormal columns; empty when only values were requested
};

// Full spectrum of a real symmetric matrix via LAPACK dsyevr. The input is consumed.
SpectralDecomposition eigh_dense(MatrixXr a, bool vectors = true);

} // namespace pxpscar
