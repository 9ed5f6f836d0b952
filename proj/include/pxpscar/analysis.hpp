// analysis.hpp
#pragma once

#include "pxpscar/eigensolver.hpp"
#include "pxpscar/trial.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace pxpscar {

inline constexpr double kDegeneracyTol = 1e-8;

// Full spectrum of a symmetric operator. Refuses non-Hermitian input.
SpectralDecomposition diagonalize(const SparseOp& h, bool vectors = true);

// |<v_k|psi>|^2 for every eigenvector.
VectorXr overlaps2(const SpectralDecomposition& spec, const VectorXr& psi);

// [first, last) index ranges of eigenvalues closer than tol to their neighbour.
std::vector<std::pair<Index, Index>> degenerate_clusters(const VectorXr& eigenvalues, double tol = kDegeneracyTol);

struct ScarRow {
    int n = 0;
    double energy = 0.0;
    Index index = -1;      // selected eigenvector (first of its cluster when degenerate)
    Index degeneracy = 1;  // size of the eigenvalue cluster; > 1 means subspace overlaps
    double spacing_to_previous = 0.0; // E_n - E_{n-1}; 0 for the lowest n
    double overlap2_trial = 0.0;
    double overlap2_mps = -1.0; // -1 when no MPS tower was given
    double overlap2_neel = 0.0;
};

struct ScarTable {
    std::vector<ScarRow> rows; // ascending n
    const ScarRow& row(int n) const;
    double min_overlap2_trial() const;
};

// Selects, for each n, the eigenstate with the largest trial overlap; degenerate clusters
// are reported through the squared norm of the projection onto the whole cluster.
ScarTable identify_scars(const SpectralDecomposition& spec, const TrialTower& trial, const VectorXr& neel,
                         const TrialTower* mps = nullptr, double degeneracy_tol = kDegeneracyTol);

// Indices of the `count` eigenstates with largest Neel overlap, sorted by energy.
std::vector<Index> neel_selected_tower(const SpectralDecomposition& spec, const VectorXr& neel, int count);

// -(sqrt2/8) N_b (|c_2|^2 - |c_-2|^2) / norm for the parent with k = N_b - n lowering steps.
double energy_correction_analytic(int n_blocks, int n);
// <S~_n|H_1|S~_n> / <S~_n|S~_n> on the block basis.
double block_h1_expectation(const BlockBasis& block, int n);

struct HoneycombTail {
    int n_blocks = 0;
    double h1_top = 0.0;          // block-space <H_1> for n = N_b
    double h1_top_closed = 0.0;   // -(7/32) sqrt2 N_b
    double h1_next = 0.0;         // n = N_b - 1
    double h1_next_closed = 0.0;  // (25/32) sqrt2 N_b - (15/32) sqrt2 - sqrt2 (N_b - 1)
    double energy_top = 0.0;      // diagonalization
    double energy_top_estimate = 0.0;  // (25/32) sqrt2 N_b
    double energy_next = 0.0;
    double energy_next_estimate = 0.0; // (25/32) sqrt2 N_b - (15/32) sqrt2
    double spacing_estimate = 0.0;     // (15/32) sqrt2
};
HoneycombTail honeycomb_tail_check(const Lattice& lat);

// Objective a + 2 b lambda + c lambda^2 = Sum_n || [P_Ryd] (H_1 + dH(lambda)) |S~_n> ||^2
// over the normalized parents, n = -N_b..N_b.
struct LambdaObjective {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double minimizer = 0.0; // -b / c
    std::vector<std::pair<double, double>> curve; // (lambda, objective) on the grid
    double grid_minimizer = 0.0;
    double operator()(double lambda) const { return a + 2.0 * b * lambda + c * lambda * lambda; }
};

LambdaObjective residual_objective(const BlockBasis& block, bool projected, const std::vector<double>& grid);
// Unprojected objective for the periodic chain from the six-block reduced density matrix of the
// fully symmetric parents; exact for any N_b >= 6 and cheap at large N_b.
LambdaObjective unprojected_objective_symmetric(int n_blocks, const std::vector<double>& grid);
std::vector<double> lambda_grid(double lo, double hi, int points);

struct AlphaBeta {
    double alpha;
    double beta;
    double lambda;
};
AlphaBeta alpha_beta_integrals(double tol = 1e-10);

// Adaptive Simpson quadrature on [lo, hi].
template <class F>
double integrate(F&& f, double lo, double hi, double tol);

struct NhExactness {
    double residual = 0.0;              // max_n ||(H + dH_NH^inv)|S_n> - sqrt2 n |S_n>||
    double hermitian_part_residual = 0.0; // same with the counterterm replaced by its symmetric part
    int worst_n = 0;
};
NhExactness nh_exactness_report(const BlockBasis& block, const RydbergBasis& ryd, bool inject_sign_error = false);

// |<psi0|exp(-iHt)|psi0>|^2 from a spectral decomposition of H.
std::vector<double> quench_fidelity(const SpectralDecomposition& spec, const VectorXr& psi0,
                                    const std::vector<double>& times);
// First local maximum of the fidelity after it has dropped below `dip`; nullopt if none.
std::optional<double> first_revival(const std::vector<double>& times, const std::vector<double>& fidelity,
                                    double dip = 0.5);

template <class F>
double integrate(F&& f, double lo, double hi, double tol) {
    struct Step {
        static double run(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                          int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double diff = left + right - whole;
            if (depth <= 0) throw Error(ErrorCode::quadrature_failure, "adaptive Simpson recursion limit reached");
            if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
            return run(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
                   run(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        }
    };
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw Error(ErrorCode::quadrature_failure, "integrand is not finite");
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return Step::run(f, lo, hi, fa, fm, fb, whole, tol, 50);
}

} // namespace pxpscar
