#include "doctest.h"

#include "pxpscar/analysis.hpp"
#include "pxpscar/mps.hpp"

#include <numbers>

using namespace pxpscar;

namespace {

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

} // namespace

TEST_CASE("dense diagonalization agrees with Eigen") {
    Setup s(build_chain(4, Boundary::periodic));
    const SparseOp h = build_pxp(s.lat, s.ryd);
    const SpectralDecomposition spec = diagonalize(h);
    Eigen::SelfAdjointEigenSolver<MatrixXr> ref{MatrixXr(h)};
    CHECK((spec.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    const MatrixXr hd(h);
    CHECK((hd * spec.eigenvectors - spec.eigenvectors * spec.eigenvalues.asDiagonal()).norm() < 1e-10);
    CHECK(diagonalize(h, false).eigenvectors.size() == 0);

    SparseOp bad = h;
    bad.coeffRef(0, 1) += 0.5;
    CHECK_THROWS_AS(diagonalize(bad), Error);
}

TEST_CASE("degenerate clusters") {
    VectorXr e(6);
    e << -1.0, 0.0, 1e-10, 2e-10, 1.0, 1.0 + 1e-3;
    const auto c = degenerate_clusters(e);
    REQUIRE(c.size() == 4);
    CHECK(c[1] == std::make_pair(Index{1}, Index{4}));
    CHECK(c[3] == std::make_pair(Index{5}, Index{6}));
}

TEST_CASE("scar identification") {
    Setup s(build_chain(6, Boundary::periodic));
    const SpectralDecomposition spec = diagonalize(build_pxp(s.lat, s.ryd));
    const TrialTower trial = tower(s.block, s.ryd, TrialRoute::block_ladder);
    const TrialTower mps = tower(s.block, s.ryd, TrialRoute::mps);
    const VectorXr neel = neel_state(s.ryd, s.block.cover);
    const ScarTable t = identify_scars(spec, trial, neel, &mps);
    REQUIRE(t.rows.size() == 13);
    CHECK(t.rows.front().n == -6);
    for (const auto& r : t.rows) {
        CHECK(r.overlap2_trial >= 0.0);
        CHECK(r.overlap2_trial <= 1.0 + 1e-12);
        CHECK(r.overlap2_mps >= 0.0);
        CHECK(r.overlap2_mps <= 1.0 + 1e-12);
    }
    // energies mirror under n -> -n through the chiral symmetry
    for (int n = 1; n <= 6; ++n) CHECK(t.row(n).energy == doctest::Approx(-t.row(-n).energy).epsilon(1e-9));
    CHECK(t.row(6).energy > t.row(5).energy);
    CHECK(t.row(0).degeneracy > 1);
    CHECK(t.row(-5).spacing_to_previous == doctest::Approx(t.row(-5).energy - t.row(-6).energy));

    // the cluster overlap is never smaller than the best single-state overlap
    const VectorXr single = overlaps2(spec, trial.column(0));
    CHECK(t.row(0).overlap2_trial >= single.maxCoeff() - 1e-12);

    // rescaling H rescales the energies and leaves the overlaps unchanged
    SpectralDecomposition scaled = spec;
    scaled.eigenvalues *= 3.0;
    const ScarTable t3 = identify_scars(scaled, trial, neel, nullptr, 3 * kDegeneracyTol);
    for (int n = -6; n <= 6; ++n) {
        CHECK(t3.row(n).energy == doctest::Approx(3 * t.row(n).energy));
        CHECK(t3.row(n).overlap2_trial == doctest::Approx(t.row(n).overlap2_trial));
        CHECK(t3.row(n).overlap2_mps == -1.0);
    }
    CHECK_THROWS_AS(t.row(9), Error);

    const auto sel = neel_selected_tower(spec, neel, 7);
    CHECK(sel.size() == 7);
    CHECK(std::is_sorted(sel.begin(), sel.end()));
}

TEST_CASE("energy correction against block expectations") {
    for (int nb = 2; nb <= 8; ++nb) {
        Setup s(build_chain(nb, Boundary::periodic));
        for (int n = -nb; n <= nb; ++n)
            CHECK(std::abs(energy_correction_analytic(nb, n) - block_h1_expectation(s.block, n)) < 1e-10);
    }
    CHECK(std::abs(kSqrt2 + energy_correction_analytic(10000, 1) - 15.0 / 16.0 * kSqrt2) < 1e-3);
    // top of the tower: 7 sqrt2 N_b / 8
    CHECK(5 * kSqrt2 + energy_correction_analytic(5, 5) == doctest::Approx(35.0 / 8.0 * kSqrt2));
    CHECK_THROWS_AS(energy_correction_analytic(3, 4), Error);
}

TEST_CASE("honeycomb block expectations") {
    Setup s(build_honeycomb(2, 2));
    const SparseOp h1 = build_blockspin_parts(s.block).h1;
    const VectorXr top = parent_state(s.block, 4), next = parent_state(s.block, 3);
    CHECK(top.dot(h1 * top) == doctest::Approx(-7.0 / 32.0 * kSqrt2 * 4).epsilon(1e-12));
    CHECK(next.dot(h1 * next) ==
          doctest::Approx(25.0 / 32.0 * kSqrt2 * 4 - 15.0 / 32.0 * kSqrt2 - kSqrt2 * 3).epsilon(1e-12));
    CHECK_THROWS_AS(honeycomb_tail_check(build_chain(4, Boundary::periodic)), Error);
}

TEST_CASE("lambda objective") {
    Setup s(build_chain(6, Boundary::periodic));
    const auto grid = lambda_grid(0.0, 2.0, 201);
    CHECK(grid.size() == 201);
    CHECK(grid[100] == doctest::Approx(1.0));
    for (bool projected : {false, true}) {
        const LambdaObjective obj = residual_objective(s.block, projected, grid);
        // direct evaluation at an arbitrary lambda
        const double lam = 0.37;
        const SparseOp op = build_blockspin_parts(s.block).h1 + build_dh_lambda_block(s.lat, s.block, lam);
        const VectorXr w = projected ? blockade_diagonal(s.block) : VectorXr::Ones(s.block.dim());
        double direct = 0.0;
        for (int n = -6; n <= 6; ++n) direct += (op * parent_state(s.block, n)).cwiseProduct(w).squaredNorm();
        CHECK(obj(lam) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(obj.minimizer == doctest::Approx(-obj.b / obj.c));
        CHECK(std::abs(obj.grid_minimizer - obj.minimizer) < 0.01);
        CHECK(obj.curve.size() == grid.size());
    }
    for (int nb : {8, 9}) {
        Setup q(build_chain(nb, Boundary::periodic));
        const LambdaObjective dense = residual_objective(q.block, false, grid);
        const LambdaObjective sym = unprojected_objective_symmetric(nb, grid);
        CHECK(sym.a == doctest::Approx(dense.a).epsilon(1e-10));
        CHECK(sym.b == doctest::Approx(dense.b).epsilon(1e-10));
        CHECK(sym.c == doctest::Approx(dense.c).epsilon(1e-10));
    }
    CHECK_THROWS_AS(unprojected_objective_symmetric(5, grid), Error);
    CHECK_THROWS_AS(lambda_grid(1.0, 0.0, 5), Error);
}

TEST_CASE("quadrature") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(std::numbers::pi / 4).epsilon(1e-10));
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10), Error);
    const AlphaBeta ab = alpha_beta_integrals();
    CHECK(ab.lambda == doctest::Approx(ab.alpha / (2 * (ab.alpha + ab.beta))));
    CHECK(ab.alpha > ab.beta);
}

TEST_CASE("non-Hermitian exactness") {
    Setup s(build_chain(6, Boundary::periodic));
    const NhExactness r = nh_exactness_report(s.block, s.ryd);
    CHECK(r.residual < 1e-10);
    CHECK(r.hermitian_part_residual > 1e-3);
    CHECK(nh_exactness_report(s.block, s.ryd, true).residual > 1e-3);
}

TEST_CASE("quench fidelity") {
    SpectralDecomposition two;
    two.eigenvalues = VectorXr(2);
    two.eigenvalues << 0.0, 1.0;
    two.eigenvectors = MatrixXr::Identity(2, 2);
    const VectorXr psi = VectorXr::Constant(2, 1 / kSqrt2);
    std::vector<double> times;
    for (int i = 0; i <= 800; ++i) times.push_back(0.01 * i);
    const auto f = quench_fidelity(two, psi, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(f[i] == doctest::Approx(std::pow(std::cos(times[i] / 2), 2)).epsilon(1e-12));
    const auto rev = first_revival(times, f);
    REQUIRE(rev.has_value());
    CHECK(std::abs(*rev - 2 * std::numbers::pi) < 0.011);
    CHECK_FALSE(first_revival({0.0, 1.0, 2.0}, {1.0, 0.9, 0.8}).has_value());
}
