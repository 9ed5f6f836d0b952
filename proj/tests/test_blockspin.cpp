#include "doctest.h"

#include "pxpscar/blockspin.hpp"
#include "pxpscar/trial.hpp"

#include <random>

using namespace pxpscar;

namespace {

double max_abs(const MatrixXr& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

VectorXr random_vector(Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    VectorXr v(dim);
    for (Index k = 0; k < dim; ++k) v[k] = g(rng);
    return v;
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

} // namespace

TEST_CASE("spin-1 matrices") {
    const cplx i{0.0, 1.0};
    const Eigen::Matrix3cd x = spin1::sx().cast<cplx>(), y = spin1::sy(), z = spin1::sz().cast<cplx>();
    CHECK((x * y - y * x - i * z).norm() < 1e-14);
    CHECK((y * z - z * y - i * x).norm() < 1e-14);
    CHECK(((z + i * y) - spin1::lower().cast<cplx>()).norm() < 1e-14);
    CHECK((spin1::raise() - spin1::lower().transpose()).norm() == 0.0);
    CHECK((spin1::sx() * spin1::x_plus() - spin1::x_plus()).norm() < 1e-14);
    CHECK((spin1::sx() * spin1::x_zero()).norm() < 1e-14);
    CHECK((spin1::sx() * spin1::x_minus() + spin1::x_minus()).norm() < 1e-14);
    // lowering along x: J^-|+^> = sqrt2 |0^> in the real phase convention
    CHECK((spin1::lower() * spin1::x_plus() - kSqrt2 * spin1::x_zero()).norm() < 1e-14);
    CHECK((spin1::lower() * spin1::x_minus()).norm() < 1e-14);
}

TEST_CASE("ladder and Zeeman term on parents") {
    Setup s(build_chain(4, Boundary::periodic));
    const BlockspinParts parts = build_blockspin_parts(s.block);
    const SparseOp lower = build_ladder(s.block, Ladder::lower);
    const SparseOp raise = build_ladder(s.block, Ladder::raise);
    CHECK(max_abs(MatrixXr(raise) - MatrixXr(SparseOp(lower.transpose()))) == 0.0);

    VectorXr v = parent_state(s.block, 4);
    CHECK((parts.hz * v - 4 * kSqrt2 * v).norm() < 1e-12);
    for (int k = 0; k < 9; ++k) v = lower * v;
    CHECK(v.norm() < 1e-9);
    for (int n = -4; n <= 4; ++n) {
        const VectorXr p = parent_state(s.block, n);
        CHECK((parts.hz * p - kSqrt2 * n * p).norm() < 1e-10);
    }
}

TEST_CASE("H_1 on the chain") {
    Setup s(build_chain(4, Boundary::periodic));
    const BlockspinParts parts = build_blockspin_parts(s.block);
    // -Sum_b (|+,0> + |0,->)<+,-|_{b,b+1}
    MatrixXr ref = MatrixXr::Zero(s.block.dim(), s.block.dim());
    for (Index k = 0; k < s.block.dim(); ++k)
        for (int b = 0; b < 4; ++b) {
            const int c = (b + 1) % 4;
            if (s.block.digit(k, b) != kPlus || s.block.digit(k, c) != kMinus) continue;
            ref(s.block.with_digit(k, c, kZero), k) -= 1.0;
            ref(s.block.with_digit(k, b, kZero), k) -= 1.0;
        }
    CHECK(max_abs(MatrixXr(parts.h1) - ref) == 0.0);
    CHECK(max_abs(MatrixXr(parts.h2) - ref.transpose()) == 0.0);
    CHECK(max_abs(MatrixXr(build_h1_expanded(s.block)) - ref) == 0.0);
}

TEST_CASE("block decomposition of PXP") {
    for (int which = 0; which < 2; ++which) {
        Setup s(which == 0 ? build_chain(6, Boundary::periodic) : build_honeycomb(2, 2));
        const BlockspinParts parts = build_blockspin_parts(s.block);
        const SparseOp sum = parts.hz + parts.h1 + parts.h2;
        const SparseOp h = build_pxp(s.lat, s.ryd);
        CHECK(max_abs(MatrixXr(build_h1_expanded(s.block)) - MatrixXr(parts.h1)) < 1e-14);
        for (int t = 0; t < 20; ++t) {
            const VectorXr psi = random_vector(s.block.dim(), 100 + t);
            CHECK((h * project_ryd(s.block, s.ryd, psi) - project_ryd(s.block, s.ryd, VectorXr(sum * psi))).norm() <
                  1e-10);
            CHECK(project_ryd(s.block, s.ryd, VectorXr(parts.h2 * psi)).norm() < 1e-12);
        }
    }
}

TEST_CASE("generic counterterm") {
    for (int which = 0; which < 2; ++which) {
        Setup s(which == 0 ? build_chain(6, Boundary::periodic) : build_honeycomb(2, 2));
        const SparseOp nh = build_dh_nh_generic(s.block);
        const SparseOp h1 = build_blockspin_parts(s.block).h1;
        const VectorXr p = blockade_diagonal(s.block);

        // commutes with the blockade projector
        const SparseOp pd = SparseOp(p.asDiagonal() * nh) - SparseOp(nh * p.asDiagonal());
        CHECK(max_abs(MatrixXr(pd)) == 0.0);

        const SparseOp bad = build_dh_nh_generic(s.block, true);
        double worst = 0.0, worst_bad = 0.0;
        for (int n = -s.block.n_blocks; n <= s.block.n_blocks; ++n) {
            const VectorXr parent = parent_state(s.block, n);
            worst = std::max(worst, VectorXr(p.cwiseProduct((h1 + nh) * parent)).norm());
            worst_bad = std::max(worst_bad, VectorXr(p.cwiseProduct((h1 + bad) * parent)).norm());
        }
        CHECK(worst < 1e-10);
        CHECK(worst_bad > 1e-3);
    }

    // honeycomb: three-block terms carry -1/4
    Setup h(build_honeycomb(3, 3));
    const SparseOp nh = build_dh_nh_generic(h.block);
    const SparseOp pair_only = build_dh_nh_generic(h.block, true);
    CHECK(max_abs(MatrixXr(nh + pair_only)) > 0.0);
}

TEST_CASE("counterterm limits") {
    using S = Sublattice;
    // complete bipartite K_{5,5}: every beta site has four outside neighbours
    std::vector<Edge> edges;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) edges.emplace_back(a, 5 + b);
    Lattice k55 = make_lattice(10, edges, {S::A, S::A, S::A, S::A, S::A, S::B, S::B, S::B, S::B, S::B}, "k55");
    DimerCover cover;
    for (int a = 0; a < 5; ++a) cover.dimers.emplace_back(a, 5 + a);
    const BlockBasis block = make_block_basis(k55, cover);
    CHECK_THROWS_AS(build_dh_nh_generic(block), Error);
}

TEST_CASE("maximal spin projectors") {
    const MatrixXr p2 = local_maximal_spin_projector(2);
    CHECK(std::abs(p2.trace() - 5.0) < 1e-10);
    CHECK(max_abs(p2 * p2 - p2) < 1e-12);
    CHECK(max_abs(p2 - p2.transpose()) < 1e-12);
    CHECK(std::abs(local_maximal_spin_projector(3).trace() - 7.0) < 1e-10);
    CHECK_THROWS_AS(local_maximal_spin_projector(5), Error);

    Setup s(build_chain(4, Boundary::periodic));
    const SparseOp p = maximal_spin_projector(s.block, {0, 1, 2});
    for (int n = -4; n <= 4; ++n) {
        const VectorXr parent = parent_state(s.block, n);
        CHECK(std::abs(parent.dot(parent - p * parent)) < 1e-12);
    }
    for (int k : {1, 2}) {
        CHECK(counterterm_residual(k, false) < 1e-12);
        CHECK(counterterm_residual(k, true) < 1e-12);
    }
    CHECK(counterterm_residual(3, false) < 1e-12);
}
