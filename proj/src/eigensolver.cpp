#include "pxpscar/eigensolver.hpp"

#include <lapacke.h>

#include <vector>

namespace pxpscar {

SpectralDecomposition eigh_dense(MatrixXr a, bool vectors) {
    const Index n = a.rows();
    if (a.cols() != n) throw Error(ErrorCode::basis_mismatch, "matrix is not square");
    if (n > kMaxDenseDimension) throw Error(ErrorCode::too_many_sites, "dense eigensolver limited to dimension 20000");
    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    if (n == 0) return out;
    if (vectors) out.eigenvectors.resize(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    std::vector<double> dummy(1);
    lapack_int found = 0;
    const lapack_int ln = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'A', 'L', ln, a.data(), ln, 0.0, 0.0,
                                           0, 0, 0.0, &found, out.eigenvalues.data(),
                                           vectors ? out.eigenvectors.data() : dummy.data(), vectors ? ln : 1, support.data());
    if (info != 0 || found != ln)
        throw Error(ErrorCode::not_hermitian, "dsyevr failed with info " + std::to_string(info));
    return out;
}

} // namespace pxpscar
