#include "pxpscar/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <tuple>

namespace pxpscar {
namespace {

// Signed product kept as (sign, log|value|); sign 0 marks an exact zero.
struct LogProduct {
    int sign = 1;
    double log = 0.0;
    void mul(double x) {
        if (x == 0.0) sign = 0;
        if (sign == 0) return;
        if (x < 0) sign = -sign;
        log += std::log(std::abs(x));
    }
};

double log_binom(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double quadratic_min(const std::vector<std::pair<double, double>>& curve) {
    auto it = std::min_element(curve.begin(), curve.end(),
                               [](const auto& x, const auto& y) { return x.second < y.second; });
    return it == curve.end() ? 0.0 : it->first;
}

void finish(LambdaObjective& obj, double f0, double fp, double fm, const std::vector<double>& grid) {
    // evaluations at lambda = 0, +1, -1
    obj.a = f0;
    obj.b = (fp - fm) / 4.0;
    obj.c = (fp + fm) / 2.0 - f0;
    obj.minimizer = -obj.b / obj.c;
    for (double l : grid) obj.curve.emplace_back(l, obj(l));
    obj.grid_minimizer = quadratic_min(obj.curve);
}

// Open segment of six blocks, block j on sites (2j, 2j+1), digit j at weight 3^j.
constexpr int kSegment = 6;
constexpr Index kSegmentDim = 729;

Mask segment_halfspin(Index state) {
    Mask m = 0;
    for (int j = 0; j < kSegment; ++j) {
        const int d = static_cast<int>(state % 3);
        state /= 3;
        if (d == kPlus) m |= Mask{1} << (2 * j + 1);
        else if (d == kMinus) m |= Mask{1} << (2 * j);
    }
    return m;
}

Index segment_state(Mask m) {
    Index s = 0, w = 1;
    for (int j = 0; j < kSegment; ++j, w *= 3) {
        const bool alpha = (m >> (2 * j)) & 1u, beta = (m >> (2 * j + 1)) & 1u;
        const int d = beta ? kPlus : (alpha ? kMinus : kZero);
        s += d * w;
    }
    return s;
}

int segment_digit(Index state, int j) {
    for (int q = 0; q < j; ++q) state /= 3;
    return static_cast<int>(state % 3);
}

// H_1 and dH(1) terms attached to block b (1 <= b <= 4), supported on blocks b-1..b+1.
std::pair<MatrixXr, MatrixXr> segment_local_terms(int b) {
    MatrixXr h = MatrixXr::Zero(kSegmentDim, kSegmentDim);
    MatrixXr d = MatrixXr::Zero(kSegmentDim, kSegmentDim);
    Index pow_b = 1;
    for (int q = 0; q < b; ++q) pow_b *= 3;
    for (Index k = 0; k < kSegmentDim; ++k) {
        const int mid = segment_digit(k, b);
        if (mid == kPlus && segment_digit(k, b + 1) == kMinus) h(k + (kZero - kPlus) * pow_b, k) -= 1.0;
        if (mid == kMinus && segment_digit(k, b - 1) == kPlus) h(k + (kZero - kMinus) * pow_b, k) -= 1.0;

        const Mask m = segment_halfspin(k);
        auto down = [m](int site) { return ((m >> site) & 1u) ? 0.0 : 1.0; };
        for (int i : {2 * b, 2 * b + 1}) {
            const double w = down(i - 1) * down(i + 1) * (down(i - 2) + down(i + 2));
            if (w != 0.0) d(segment_state(m ^ (Mask{1} << i)), k) += w / 8.0;
        }
    }
    return {h, d};
}

} // namespace

SpectralDecomposition diagonalize(const SparseOp& h, bool vectors) {
    require_hermitian(h);
    MatrixXr dense = MatrixXr(h);
    return eigh_dense(std::move(dense), vectors);
}

VectorXr overlaps2(const SpectralDecomposition& spec, const VectorXr& psi) {
    if (psi.size() != spec.eigenvectors.rows()) throw Error(ErrorCode::basis_mismatch, "state and spectrum differ in dimension");
    return (spec.eigenvectors.transpose() * psi).array().square().matrix();
}

std::vector<std::pair<Index, Index>> degenerate_clusters(const VectorXr& e, double tol) {
    std::vector<std::pair<Index, Index>> out;
    Index start = 0;
    for (Index k = 1; k <= e.size(); ++k) {
        if (k == e.size() || e[k] - e[k - 1] > tol) {
            out.emplace_back(start, k);
            start = k;
        }
    }
    return out;
}

const ScarRow& ScarTable::row(int n) const {
    for (const auto& r : rows)
        if (r.n == n) return r;
    throw Error(ErrorCode::out_of_range, "n not present in the scar table");
}

double ScarTable::min_overlap2_trial() const {
    double m = 1.0;
    for (const auto& r : rows) m = std::min(m, r.overlap2_trial);
    return m;
}

ScarTable identify_scars(const SpectralDecomposition& spec, const TrialTower& trial, const VectorXr& neel,
                         const TrialTower* mps, double degeneracy_tol) {
    const Index dim = spec.eigenvectors.rows();
    if (dim == 0 || trial.states.rows() != dim || neel.size() != dim || (mps && mps->states.rows() != dim))
        throw Error(ErrorCode::basis_mismatch, "spectrum, trial states and Neel state must share the basis");

    const auto clusters = degenerate_clusters(spec.eigenvalues, degeneracy_tol);
    std::vector<Index> cluster_of(dim);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (Index k = clusters[c].first; k < clusters[c].second; ++k) cluster_of[k] = static_cast<Index>(c);

    const MatrixXr trial_ov = (spec.eigenvectors.transpose() * trial.states).array().square().matrix();
    MatrixXr mps_ov;
    if (mps) mps_ov = (spec.eigenvectors.transpose() * mps->states).array().square().matrix();
    const VectorXr neel_ov = overlaps2(spec, neel);

    ScarTable table;
    for (int col = static_cast<int>(trial.n_values.size()) - 1; col >= 0; --col) {
        ScarRow r;
        r.n = trial.n_values[col];
        Index best = 0;
        trial_ov.col(col).maxCoeff(&best);
        const auto [first, last] = clusters[cluster_of[best]];
        r.index = first;
        r.degeneracy = last - first;
        r.energy = spec.eigenvalues.segment(first, last - first).mean();
        r.overlap2_trial = trial_ov.col(col).segment(first, last - first).sum();
        r.overlap2_neel = neel_ov.segment(first, last - first).sum();
        if (mps) {
            const int mcol = static_cast<int>(std::find(mps->n_values.begin(), mps->n_values.end(), r.n) -
                                              mps->n_values.begin());
            if (mcol < static_cast<int>(mps->n_values.size()))
                r.overlap2_mps = mps_ov.col(mcol).segment(first, last - first).sum();
        }
        table.rows.push_back(r);
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        table.rows[i].spacing_to_previous = table.rows[i].energy - table.rows[i - 1].energy;
    return table;
}

std::vector<Index> neel_selected_tower(const SpectralDecomposition& spec, const VectorXr& neel, int count) {
    const VectorXr ov = overlaps2(spec, neel);
    std::vector<Index> order(ov.size());
    std::iota(order.begin(), order.end(), Index{0});
    count = std::min<int>(count, static_cast<int>(order.size()));
    std::partial_sort(order.begin(), order.begin() + count, order.end(),
                      [&](Index a, Index b) { return ov[a] > ov[b]; });
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

double energy_correction_analytic(int n_blocks, int n) {
    const int nb = n_blocks;
    if (nb < 1 || n > nb || n < -nb) throw Error(ErrorCode::out_of_range, "need N_b >= 1 and |n| <= N_b");
    const int k = nb - n;
    const double big = static_cast<double>(nb);
    auto f = [&](int m) { return (big - 2.0) * (big - 1.0) - static_cast<double>(m) * (m - 1.0); };

    LogProduct c2;
    for (int m = nb - k - 1; m <= nb - 2; ++m) c2.mul(f(m));
    LogProduct cm2;
    if (k >= 4) {
        const double q = static_cast<double>(k) * (k - 1.0) * (k - 2.0) * (k - 3.0);
        cm2.mul(q * q);
        for (int m = nb - k + 3; m <= nb - 2; ++m) cm2.mul(f(m));
    } else {
        cm2.sign = 0;
    }
    LogProduct norm;
    for (int m = nb - k + 1; m <= nb; ++m) norm.mul(big * (big + 1.0) - static_cast<double>(m) * (m - 1.0));

    double diff = 0.0; // (|c2|^2 - |c-2|^2) / norm
    if (c2.sign != 0 && cm2.sign != 0) {
        if (c2.sign == cm2.sign)
            diff = -c2.sign * std::exp(c2.log - norm.log) * std::expm1(cm2.log - c2.log);
        else
            diff = c2.sign * (std::exp(c2.log - norm.log) + std::exp(cm2.log - norm.log));
    } else if (c2.sign != 0) {
        diff = c2.sign * std::exp(c2.log - norm.log);
    } else if (cm2.sign != 0) {
        diff = -cm2.sign * std::exp(cm2.log - norm.log);
    }
    return -kSqrt2 / 8.0 * big * diff;
}

double block_h1_expectation(const BlockBasis& block, int n) {
    const VectorXr p = parent_state(block, n);
    const SparseOp h1 = build_blockspin_parts(block).h1;
    return p.dot(h1 * p) / p.squaredNorm();
}

HoneycombTail honeycomb_tail_check(const Lattice& lat) {
    if (!lat.is_honeycomb()) throw Error(ErrorCode::unsupported_lattice, "tail check is defined on the honeycomb");
    const BlockBasis block = make_block_basis(lat, default_cover(lat));
    const RydbergBasis ryd = enumerate_rydberg(lat);
    const int nb = block.n_blocks;

    HoneycombTail t;
    t.n_blocks = nb;
    {
        const SparseOp h1 = build_blockspin_parts(block).h1;
        const VectorXr top = parent_state(block, nb), next = parent_state(block, nb - 1);
        t.h1_top = top.dot(h1 * top);
        t.h1_next = next.dot(h1 * next);
    }
    t.h1_top_closed = -7.0 / 32.0 * kSqrt2 * nb;
    t.h1_next_closed = 25.0 / 32.0 * kSqrt2 * nb - 15.0 / 32.0 * kSqrt2 - kSqrt2 * (nb - 1);
    t.energy_top_estimate = 25.0 / 32.0 * kSqrt2 * nb;
    t.energy_next_estimate = 25.0 / 32.0 * kSqrt2 * nb - 15.0 / 32.0 * kSqrt2;
    t.spacing_estimate = 15.0 / 32.0 * kSqrt2;

    const SpectralDecomposition spec = diagonalize(build_pxp(lat, ryd));
    const TrialTower trial = tower(block, ryd, TrialRoute::block_ladder);
    const ScarTable table = identify_scars(spec, trial, neel_state(ryd, block.cover));
    t.energy_top = table.row(nb).energy;
    t.energy_next = table.row(nb - 1).energy;
    return t;
}

LambdaObjective residual_objective(const BlockBasis& block, bool projected, const std::vector<double>& grid) {
    const Lattice& lat = *block.lattice;
    const SparseOp h1 = build_blockspin_parts(block).h1;
    const SparseOp dh = build_dh_lambda_block(lat, block, 1.0);
    const VectorXr weight = projected ? blockade_diagonal(block) : VectorXr::Ones(block.dim());
    const MatrixXr parents = parent_tower(block);

    double f0 = 0.0, fp = 0.0, fm = 0.0;
    for (Index k = 0; k < parents.cols(); ++k) {
        const VectorXr p = parents.col(k);
        const VectorXr u = (h1 * p).cwiseProduct(weight);
        const VectorXr w = (dh * p).cwiseProduct(weight);
        f0 += u.squaredNorm();
        fp += (u + w).squaredNorm();
        fm += (u - w).squaredNorm();
    }
    LambdaObjective obj;
    finish(obj, f0, fp, fm, grid);
    return obj;
}

LambdaObjective unprojected_objective_symmetric(int n_blocks, const std::vector<double>& grid) {
    const int nb = n_blocks;
    if (nb < kSegment) throw Error(ErrorCode::invalid_size, "symmetric evaluation needs N_b >= 6");

    // |6, M1> for M1 = 6 .. -6
    const Eigen::Matrix3d jm = spin1::lower();
    std::vector<VectorXr> states;
    {
        VectorXr v(kSegmentDim);
        const Eigen::Vector3d xp = spin1::x_plus();
        for (Index k = 0; k < kSegmentDim; ++k) {
            double a = 1.0;
            for (int j = 0; j < kSegment; ++j) a *= xp[segment_digit(k, j)];
            v[k] = a;
        }
        for (int step = 0; step <= 2 * kSegment; ++step) {
            states.push_back(v);
            VectorXr next = VectorXr::Zero(kSegmentDim);
            Index w = 1;
            for (int j = 0; j < kSegment; ++j, w *= 3)
                for (Index k = 0; k < kSegmentDim; ++k) {
                    const int d = segment_digit(k, j);
                    for (int e = 0; e < 3; ++e)
                        if (jm(e, d) != 0.0) next[k + (e - d) * w] += jm(e, d) * v[k];
                }
            if (step < 2 * kSegment) v = next / next.norm();
        }
    }

    // local terms centred on blocks 1..4
    std::vector<MatrixXr> h(5), d(5);
    for (int b = 1; b <= 4; ++b) std::tie(h[b], d[b]) = segment_local_terms(b);

    // ordered pairs (x, y) with multiplicities on the ring
    const double big = nb;
    const std::vector<std::tuple<int, int, double>> pairs = {
        {1, 1, big}, {1, 2, big}, {2, 1, big}, {1, 3, big}, {3, 1, big},
        {1, 4, big * (big - 5.0) / 2.0}, {4, 1, big * (big - 5.0) / 2.0}};

    std::vector<std::array<double, 3>> g(states.size()); // (h.h, h.d + d.h, d.d) per M1
    for (std::size_t s = 0; s < states.size(); ++s) {
        std::vector<VectorXr> hs(5), ds(5);
        for (int b = 1; b <= 4; ++b) {
            hs[b] = h[b] * states[s];
            ds[b] = d[b] * states[s];
        }
        std::array<double, 3> acc{};
        for (const auto& [x, y, mult] : pairs) {
            acc[0] += mult * hs[x].dot(hs[y]);
            acc[1] += mult * (hs[x].dot(ds[y]) + ds[x].dot(hs[y]));
            acc[2] += mult * ds[x].dot(ds[y]);
        }
        g[s] = acc;
    }

    // Sum over n of the Clebsch-Gordan weights of each six-block component.
    double a = 0.0, b2 = 0.0, c = 0.0;
    const int rest = nb - kSegment;
    for (int n = -nb; n <= nb; ++n) {
        const double lnorm = log_binom(2 * nb, nb + n);
        for (std::size_t s = 0; s < states.size(); ++s) {
            const int m1 = kSegment - static_cast<int>(s);
            const double lw = log_binom(2 * kSegment, kSegment + m1) + log_binom(2 * rest, rest + n - m1) - lnorm;
            if (!std::isfinite(lw)) continue;
            const double w = std::exp(lw);
            a += w * g[s][0];
            b2 += w * g[s][1];
            c += w * g[s][2];
        }
    }
    LambdaObjective obj;
    finish(obj, a, a + b2 + c, a - b2 + c, grid);
    return obj;
}

std::vector<double> lambda_grid(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw Error(ErrorCode::out_of_range, "grid needs at least two points and hi > lo");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

AlphaBeta alpha_beta_integrals(double tol) {
    auto r = [](double s) { return s / (2.0 - s); };
    auto z = [&](double s) {
        const double x = r(s);
        return 1.0 + 4.0 * x + 1.5 * x * x + x * x * x / 6.0 + std::pow(x, 4) / 144.0;
    };
    const double alpha = integrate(
        [&](double s) {
            const double x = r(s);
            return (1.0 + x * x + std::pow(x, 4) / 144.0) / z(s);
        },
        0.0, 1.0, tol);
    const double beta = integrate(
        [&](double s) {
            const double x = r(s);
            return (1.0 + std::pow(x, 4) / 144.0) / z(s);
        },
        0.0, 1.0, tol);
    return {alpha, beta, alpha / (2.0 * (alpha + beta))};
}

NhExactness nh_exactness_report(const BlockBasis& block, const RydbergBasis& ryd, bool inject_sign_error) {
    const SparseOp h = build_pxp(*block.lattice, ryd);
    const SparseOp nh = build_dh_nh_inv(block, ryd, inject_sign_error);
    const SparseOp herm = 0.5 * (nh + SparseOp(nh.transpose()));
    const SparseOp full = h + nh;
    const SparseOp full_herm = h + herm;
    const TrialTower t = tower(block, ryd, TrialRoute::block_ladder);

    NhExactness r;
    for (std::size_t k = 0; k < t.n_values.size(); ++k) {
        const int n = t.n_values[k];
        const VectorXr s = t.states.col(static_cast<Index>(k));
        const double res = (full * s - kSqrt2 * n * s).norm();
        if (res > r.residual) {
            r.residual = res;
            r.worst_n = n;
        }
        r.hermitian_part_residual = std::max(r.hermitian_part_residual, (full_herm * s - kSqrt2 * n * s).norm());
    }
    return r;
}

std::vector<double> quench_fidelity(const SpectralDecomposition& spec, const VectorXr& psi0,
                                    const std::vector<double>& times) {
    const VectorXr w = overlaps2(spec, psi0);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        std::complex<double> amp = 0.0;
        for (Index k = 0; k < w.size(); ++k) amp += w[k] * std::polar(1.0, -spec.eigenvalues[k] * t);
        out.push_back(std::norm(amp));
    }
    return out;
}

std::optional<double> first_revival(const std::vector<double>& times, const std::vector<double>& fidelity, double dip) {
    bool dipped = false;
    for (std::size_t i = 1; i + 1 < fidelity.size(); ++i) {
        if (fidelity[i] < dip) dipped = true;
        if (dipped && fidelity[i] >= fidelity[i - 1] && fidelity[i] > fidelity[i + 1] && fidelity[i] > dip)
            return times[i];
    }
    return std::nullopt;
}

} // namespace pxpscar
