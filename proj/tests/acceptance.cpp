// Acceptance report: one PASS/FAIL line per criterion, details indented below it.
// Exit status is 0 once every criterion has been evaluated; --strict turns any FAIL into 1.

#include "pxpscar/analysis.hpp"
#include "pxpscar/mps.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

using namespace pxpscar;

namespace {

// Tolerances.
constexpr double kStateTol = 1e-10;       // MPS eigen-equations, decomposition, Neel
constexpr double kCoverTol = 1e-9;        // overlaps between constructions
constexpr double kNhTol = 1e-8;           // non-Hermitian exactness
constexpr double kCounterTol = 1e-12;     // counterterm identity
constexpr double kEnergyTol = 0.05;       // target energies
constexpr double kTailSpacingTol = 0.01;
constexpr double kCentralLo = 1.31, kCentralHi = 1.35;
constexpr double kEstimateRel = 0.03;     // analytic estimates vs numerics
constexpr double kOracleTol = 1e-10;
constexpr double kAsymptoticTol = 1e-3;
constexpr double kClosedFormTol = 1e-10;
constexpr double kLambdaStarTol = 0.05;
constexpr double kUnprojectedTol = 0.03;
constexpr double kIntegralTol = 5e-4;
constexpr double kOverlapFloor = 0.95;
constexpr double kNormRel = 0.02;
constexpr double kMpsEnergyTol = 0.002;
constexpr double kPerpTol = 0.001;
constexpr double kMpsOverlapCeiling = 0.40;

// Target values.
constexpr double kPaperTop = 12.07, kPaperNext = 11.10, kPaperTailSpacing = 0.968;
constexpr double kPaperTopEstimate = 12.37, kPaperNextEstimate = 11.37;
constexpr double kPaperLambdaStar = 0.93, kPaperUnprojected = 1.02;
constexpr double kPaperAlpha = 0.5350, kPaperBeta = 0.4739, kPaperLambda = 0.2651;
constexpr double kPaperMpsEnergy = 1.3132, kPaperPerp = 0.1354;

constexpr std::uint64_t kSeed = 20240601;
constexpr int kRandomVectors = 200;
constexpr int kLargeN = 4000;

int failures = 0;
auto clock_start = std::chrono::steady_clock::now();

double elapsed() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
}

void verdict(int id, bool ok, const std::string& what) {
    if (!ok) ++failures;
    std::printf("%s [%d] %s (t=%.0fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(), elapsed());
    std::fflush(stdout);
}

template <class... A>
void detail(const char* fmt, A... args) {
    std::printf("    ");
    std::printf(fmt, args...);
    std::printf("\n");
}

struct Setup {
    Lattice lat;
    RydbergBasis ryd;
    BlockBasis block;
    explicit Setup(Lattice l) : lat(std::move(l)) {
        ryd = enumerate_rydberg(lat);
        block = make_block_basis(lat, default_cover(lat));
    }
    Setup(const Setup&) = delete;
};

void criterion_basis() {
    const std::int64_t expected[] = {47, 322, 2207, 15127};
    bool ok = true;
    int i = 0;
    for (const auto& row : basis_dimension_table({8, 12, 16, 20})) {
        ok = ok && row.enumerated == expected[i] && row.brute_force == expected[i] && row.lucas == expected[i];
        detail("2N=%d enumerated=%lld brute=%lld lucas=%lld", row.n_sites, (long long)row.enumerated,
               (long long)row.brute_force, (long long)row.lucas);
        ++i;
    }
    verdict(1, ok, "chain basis dimensions 47, 322, 2207, 15127");
}

void criterion_mps() {
    double pbc = 0.0, obc = 0.0;
    for (int nb = 3; nb <= 10; ++nb) {
        Setup s(build_chain(nb, Boundary::periodic));
        const SparseOp h = build_pxp(s.lat, s.ryd);
        pbc = std::max(pbc, (h * gamma_state(s.block, s.ryd)).norm());

        Setup o(build_chain(nb, Boundary::open));
        const SparseOp ho = build_pxp(o.lat, o.ryd);
        std::vector<double> energies;
        for (Tau a : {Tau::right, Tau::left})
            for (Tau b : {Tau::right, Tau::left}) {
                const VectorXr v = gamma_state(o.block, o.ryd, std::make_pair(a, b));
                const double e = v.dot(ho * v);
                energies.push_back(e);
                obc = std::max(obc, (ho * v - e * v).norm());
            }
        std::sort(energies.begin(), energies.end());
        obc = std::max({obc, std::abs(energies[0] + kSqrt2), std::abs(energies[1]), std::abs(energies[2]),
                        std::abs(energies[3] - kSqrt2)});
    }
    detail("max ||H Gamma|| (PBC, N_b=3..10) = %.2e", pbc);
    detail("max OBC eigen-residual / eigenvalue error = %.2e", obc);
    verdict(2, pbc < kStateTol && obc < kStateTol, "exact MPS states");
}

double decomposition_residual(const Setup& s, std::mt19937_64& rng, double& h2_leak) {
    const SparseOp h = build_pxp(s.lat, s.ryd);
    const BlockspinParts parts = build_blockspin_parts(s.block);
    const SparseOp sum = parts.hz + parts.h1 + parts.h2;
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int r = 0; r < kRandomVectors; ++r) {
        VectorXr psi(s.block.dim());
        for (Index k = 0; k < psi.size(); ++k) psi[k] = gauss(rng);
        const VectorXr lhs = h * project_ryd(s.block, s.ryd, psi);
        const VectorXr rhs = project_ryd(s.block, s.ryd, VectorXr(sum * psi));
        worst = std::max(worst, (lhs - rhs).norm() / psi.norm());
        h2_leak = std::max(h2_leak, project_ryd(s.block, s.ryd, VectorXr(parts.h2 * psi)).norm() / psi.norm());
    }
    return worst;
}

void criterion_decomposition() {
    std::mt19937_64 rng(kSeed);
    double worst = 0.0, leak = 0.0;
    for (int nb = 2; nb <= 8; ++nb) {
        Setup s(build_chain(nb, Boundary::periodic));
        worst = std::max(worst, decomposition_residual(s, rng, leak));
    }
    Setup h(build_honeycomb(2, 2));
    worst = std::max(worst, decomposition_residual(h, rng, leak));
    detail("max relative residual = %.2e, max ||P H_2 psi|| = %.2e", worst, leak);
    verdict(3, worst < kStateTol && leak < kStateTol, "block-spin decomposition, chain N_b<=8 and honeycomb 2x2");
}

void criterion_cover() {
    double cover = 0.0, invariant = 0.0, translation = 0.0;
    for (int nb = 2; nb <= 8; ++nb) {
        Setup s(build_chain(nb, Boundary::periodic));
        const BlockBasis alt = make_block_basis(s.lat, alternate_cover(s.lat));
        const SymmetryOp t = chain_translation(s.lat, 1);
        for (int n = -nb; n <= nb; ++n) {
            const VectorXr a = trial_scar(s.block, s.ryd, n);
            cover = std::max(cover, std::abs(1.0 - std::abs(a.dot(trial_scar(alt, s.ryd, n)))));
            invariant = std::max(invariant, std::abs(1.0 - std::abs(a.dot(trial_scar_invariant(s.ryd, n)))));
            const double expected = (nb - n) % 2 == 0 ? 1.0 : -1.0;
            translation = std::max(translation, std::abs(symmetry_expectation(s.ryd, t, a) - expected));
        }
    }
    detail("cover mismatch = %.2e, invariant-route mismatch = %.2e, translation error = %.2e", cover, invariant,
           translation);
    verdict(4, cover < kCoverTol && invariant < kCoverTol && translation < kCoverTol,
            "dimerization invariance and translation eigenvalues, chain N_b<=8");
}

void criterion_neel() {
    double worst = 0.0;
    auto run = [&](Lattice lat) {
        Setup s(std::move(lat));
        const NeelDecomposition d = verify_neel_decomposition(s.block, s.ryd);
        worst = std::max({worst, d.residual, d.residual_swapped, d.local_residual});
    };
    for (int nb = 2; nb <= 6; ++nb) run(build_chain(nb, Boundary::periodic));
    run(build_honeycomb(2, 2));
    detail("max residual = %.2e", worst);
    verdict(5, worst < kStateTol, "Neel decomposition, chain N_b<=6 and honeycomb 2x2");
}

void criterion_nh() {
    double worst = 0.0, herm = 1e300;
    auto run = [&](Lattice lat, const char* name) {
        Setup s(std::move(lat));
        const NhExactness r = nh_exactness_report(s.block, s.ryd);
        detail("%s: residual = %.2e (worst n=%d), Hermitian-part residual = %.3f", name, r.residual, r.worst_n,
               r.hermitian_part_residual);
        worst = std::max(worst, r.residual);
        herm = std::min(herm, r.hermitian_part_residual);
    };
    run(build_chain(8, Boundary::periodic), "chain N_b=8");
    run(build_chain(10, Boundary::periodic), "chain N_b=10");
    run(build_honeycomb(3, 3), "honeycomb 3x3");
    double counter = 0.0;
    for (int k : {1, 2})
        for (bool mirrored : {false, true}) counter = std::max(counter, counterterm_residual(k, mirrored));
    detail("counterterm identity residual (k=1,2) = %.2e", counter);
    verdict(6, worst < kNhTol && counter < kCounterTol, "non-Hermitian exactness and counterterm identity");
}

void criterion_oracle() {
    double worst = 0.0;
    for (int nb = 2; nb <= 8; ++nb) {
        Setup s(build_chain(nb, Boundary::periodic));
        for (int n = -nb; n <= nb; ++n)
            worst = std::max(worst, std::abs(energy_correction_analytic(nb, n) - block_h1_expectation(s.block, n)));
    }
    const double e1 = kSqrt2 + energy_correction_analytic(10000, 1);
    detail("max |analytic - block expectation| (N_b<=8) = %.2e; E_1(N_b=1e4) = %.6f vs %.6f", worst, e1,
           15.0 / 16.0 * kSqrt2);
    verdict(8, worst < kOracleTol && std::abs(e1 - 15.0 / 16.0 * kSqrt2) < kAsymptoticTol,
            "analytic energy correction oracle");
}

void criterion_honeycomb() {
    const HoneycombTail t = honeycomb_tail_check(build_honeycomb(3, 3));
    const double rel = std::abs(t.energy_top_estimate - t.energy_top) / std::abs(t.energy_top);
    const double closed = std::max(std::abs(t.h1_top - t.h1_top_closed), std::abs(t.h1_next - t.h1_next_closed));
    detail("E_top numeric = %.5f, estimate = %.5f (rel %.4f)", t.energy_top, t.energy_top_estimate, rel);
    detail("E_next numeric = %.5f, estimate = %.5f; spacing %.5f vs %.5f", t.energy_next, t.energy_next_estimate,
           t.energy_top - t.energy_next, t.spacing_estimate);
    detail("<H_1> top %.12f vs %.12f, next %.12f vs %.12f", t.h1_top, t.h1_top_closed, t.h1_next, t.h1_next_closed);
    verdict(9, rel < kEstimateRel && closed < kClosedFormTol, "honeycomb 3x3 tail energies and closed forms");
}

// Criteria 7, 10 and 11 share the N_b = 10 chain; the two dense diagonalizations run one after the other.
void criteria_nb10() {
    constexpr int nb = 10;
    Setup s(build_chain(nb, Boundary::periodic));
    const TrialTower trial = tower(s.block, s.ryd, TrialRoute::block_ladder);
    const TrialTower mps = tower(s.block, s.ryd, TrialRoute::mps);
    const VectorXr neel = neel_state(s.ryd, s.block.cover);
    const SparseOp h = build_pxp(s.lat, s.ryd);

    {
        const ScarTable t = identify_scars(diagonalize(h), trial, neel, &mps);
        const double top = t.row(nb).energy, next = t.row(nb - 1).energy;
        const double tail = top - next, central = t.row(1).energy - t.row(0).energy;
        const double top_est = nb * kSqrt2 + energy_correction_analytic(nb, nb);
        const double next_est = (nb - 1) * kSqrt2 + energy_correction_analytic(nb, nb - 1);
        const double rel_top = std::abs(top_est - top) / top, rel_next = std::abs(next_est - next) / next;
        detail("lambda=0: E_N=%.5f E_N-1=%.5f tail=%.4f central=%.4f min|<S_n|E>|^2=%.4f", top, next, tail, central,
               t.min_overlap2_trial());
        detail("estimates %.5f / %.5f (rel %.4f / %.4f); quoted values %.2f / %.2f (rel %.4f / %.4f)", top_est,
               next_est, rel_top, rel_next, kPaperTopEstimate, kPaperNextEstimate,
               std::abs(kPaperTopEstimate - top) / top, std::abs(kPaperNextEstimate - next) / next);
        for (const auto& r : t.rows)
            if (r.n >= 0)
                detail("  n=%2d E=%9.5f trial=%.4f mps=%.4f neel=%.4f deg=%lld", r.n, r.energy, r.overlap2_trial,
                       r.overlap2_mps, r.overlap2_neel, (long long)r.degeneracy);
        verdict(7,
                std::abs(top - kPaperTop) < kEnergyTol && std::abs(next - kPaperNext) < kEnergyTol &&
                    std::abs(tail - kPaperTailSpacing) < kTailSpacingTol && central >= kCentralLo &&
                    central <= kCentralHi && rel_top < kEstimateRel && rel_next < kEstimateRel,
                "chain N_b=10 scar energies and spacings");
    }

    const auto grid = lambda_grid(0.0, 2.0, 401);
    const LambdaObjective projected = residual_objective(s.block, true, grid);
    const LambdaObjective unprojected = unprojected_objective_symmetric(kLargeN, grid);
    const AlphaBeta ab = alpha_beta_integrals();
    const double lambda_star = projected.minimizer;

    const ScarTable pert = identify_scars(diagonalize(h + build_dh_lambda(s.lat, s.ryd, lambda_star)), trial, neel, &mps);
    double mps_min = 1.0;
    for (const auto& r : pert.rows) mps_min = std::min(mps_min, r.overlap2_mps);

    detail("projected minimizer lambda* = %.5f (grid %.3f)", lambda_star, projected.grid_minimizer);
    detail("unprojected minimizer at N_b=%d = %.5f", kLargeN, unprojected.minimizer);
    detail("alpha = %.6f, beta = %.6f, lambda = %.6f", ab.alpha, ab.beta, ab.lambda);
    detail("H+dH(lambda*): min|<S_n|E>|^2 = %.4f, min|<MPS_n|E>|^2 = %.4f", pert.min_overlap2_trial(), mps_min);
    for (const auto& r : pert.rows)
        if (r.n >= 0)
            detail("  n=%2d E=%9.5f trial=%.4f mps=%.4f", r.n, r.energy, r.overlap2_trial, r.overlap2_mps);
    verdict(10,
            std::abs(lambda_star - kPaperLambdaStar) < kLambdaStarTol &&
                std::abs(unprojected.minimizer - kPaperUnprojected) < kUnprojectedTol &&
                std::abs(ab.alpha - kPaperAlpha) < kIntegralTol && std::abs(ab.beta - kPaperBeta) < kIntegralTol &&
                std::abs(ab.lambda - kPaperLambda) < kIntegralTol && pert.min_overlap2_trial() > kOverlapFloor,
            "lambda optimization, integrals and perturbed overlaps");

    const TransferNorms n40 = transfer_norms(40), n100 = transfer_norms(100);
    const double norm_rel = std::abs(n40.norm_mps1 - n40.norm_reference) / n40.norm_reference;
    detail("N=40: <MPS_1|MPS_1> = %.6e vs (14N/9)(3/4)^N = %.6e (rel %.3f)", n40.norm_mps1, n40.norm_reference,
           norm_rel);
    detail("N=100: energy %.5f, perpendicular ratio %.5f (exact-remainder values %.5f, %.5f)", n100.energy_literal,
           n100.perp_ratio_literal, n100.energy_exact, n100.perp_ratio_exact);
    verdict(11,
            norm_rel < kNormRel && std::abs(n100.energy_literal - kPaperMpsEnergy) < kMpsEnergyTol &&
                std::abs(n100.perp_ratio_literal - kPaperPerp) < kPerpTol && mps_min < kMpsOverlapCeiling,
            "MPS transfer-matrix asymptotics and perturbed MPS overlaps");
}

} // namespace

int main(int argc, char** argv) {
    const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    try {
        criterion_basis();
        criterion_mps();
        criterion_decomposition();
        criterion_cover();
        criterion_neel();
        criterion_nh();
        criterion_oracle();
        criterion_honeycomb();
        criteria_nb10();
    } catch (const std::exception& e) {
        std::printf("ERROR %s\n", e.what());
        return 2;
    }
    std::printf("%d of 11 criteria failed\n", failures);
    return strict && failures > 0 ? 1 : 0;
}
