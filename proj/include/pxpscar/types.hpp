// types.hpp
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pxpscar {

using cplx = std::complex<double>;
using Mask = std::uint32_t;
using Index = std::int64_t;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, Index>;

using VectorXr = Vector<double>;
using VectorXc = Vector<cplx>;
using MatrixXr = Matrix<double>;

inline constexpr double kSqrt2 = std::numbers::sqrt2;

enum class ErrorCode {
    invalid_size,
    not_bipartite,
    invalid_lattice,
    no_default_cover,
    uncoverable,
    invalid_cover,
    too_many_sites,
    basis_mismatch,
    out_of_range,
    unsupported_lattice,
    degenerate_ansatz,
    not_hermitian,
    subset_too_large,
    parse_error,
    quadrature_failure,
    config_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace pxpscar
