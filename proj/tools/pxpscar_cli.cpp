#include "pxpscar/io.hpp"
#include "pxpscar/mps.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pxpscar;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

struct RunConfig {
    std::string lattice = "chain";
    int blocks = 6;
    int n1 = 2;
    int n2 = 2;
    std::string bc = "pbc";
    std::string cover = "default";
    std::string model = "pxp";
    double lambda = 0.93;
    std::string out = "pxpscar_out";
    double tol = 1e-8;
    std::uint64_t seed = 20240601;
    bool inject_sign_error = false;
    bool mps_momentum = false;
    int large_n = 4000;
    double t_max = 20.0;
    int steps = 400;
};

struct Setup {
    Lattice lattice;
    DimerCover cover;
};

Setup make_setup(const RunConfig& c) {
    Setup s;
    if (c.lattice == "chain") {
        if (c.bc != "pbc" && c.bc != "obc") throw Error(ErrorCode::config_error, "--bc must be pbc or obc");
        s.lattice = build_chain(c.blocks, c.bc == "pbc" ? Boundary::periodic : Boundary::open);
    } else if (c.lattice == "honeycomb") {
        s.lattice = build_honeycomb(c.n1, c.n2);
    } else if (c.lattice.rfind("file:", 0) == 0) {
        s.lattice = load_lattice_json(c.lattice.substr(5));
    } else {
        throw Error(ErrorCode::config_error, "unknown lattice '" + c.lattice + "' (chain, honeycomb, file:PATH)");
    }
    if (c.cover == "default") s.cover = default_cover(s.lattice);
    else if (c.cover == "alternate") s.cover = alternate_cover(s.lattice);
    else throw Error(ErrorCode::config_error, "--cover must be default or alternate");
    return s;
}

bool hermitian_model(const std::string& model) { return model != "pxp+dhnh" && model != "pxp+dhnh_inv"; }

SparseOp build_model(const RunConfig& c, const Setup& s, const RydbergBasis& ryd) {
    const Lattice& lat = s.lattice;
    SparseOp h = build_pxp(lat, ryd);
    if (c.model == "pxp") return h;
    if (c.model == "pxp+dhlambda") return h + build_dh_lambda(lat, ryd, c.lambda);
    if (c.model == "pxp+dhsu2") return h + build_dh_su2(lat, ryd, default_su2_coefficients(lat.n_blocks()));
    if (c.model == "pxp+dhnh") return h + build_dh_nh_chain(lat, ryd);
    if (c.model == "pxp+dhnh_inv") {
        const BlockBasis block = make_block_basis(lat, s.cover);
        return h + build_dh_nh_inv(block, ryd);
    }
    throw Error(ErrorCode::config_error, "unknown model '" + c.model + "'");
}

json config_json(const RunConfig& c) {
    return {{"lattice", c.lattice}, {"blocks", c.blocks}, {"n1", c.n1},       {"n2", c.n2},
            {"bc", c.bc},           {"cover", c.cover},   {"model", c.model}, {"lambda", c.lambda},
            {"tol", c.tol},         {"seed", c.seed}};
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::config_error, "cannot write " + path.string());
    body(out);
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
}

fs::path prepare_out(const RunConfig& c) {
    fs::path dir(c.out);
    fs::create_directories(dir);
    return dir;
}

json basis_json(const Setup& s, const RydbergBasis& ryd) {
    const Lattice& lat = s.lattice;
    json j = {{"lattice", lat.name}, {"n_sites", lat.n_sites}, {"n_blocks", lat.n_blocks()}, {"dim", ryd.dim()}};
    if (lat.n_sites <= kMaxFullSites) j["brute_force"] = count_rydberg_brute_force(lat);
    if (lat.is_chain()) {
        const bool periodic = lat.boundary == Boundary::periodic;
        j[periodic ? "lucas" : "fibonacci"] = periodic ? lucas(lat.n_sites) : fibonacci(lat.n_sites + 2);
    }
    return j;
}

int cmd_basis(const RunConfig& c) {
    const Setup s = make_setup(c);
    const RydbergBasis ryd = enumerate_rydberg(s.lattice);
    const json j = basis_json(s, ryd);
    const fs::path dir = prepare_out(c);
    write_json(dir / "basis.json", j);
    std::printf("dim=%lld\n", static_cast<long long>(ryd.dim()));
    bool ok = !j.contains("brute_force") || j["brute_force"].get<Index>() == ryd.dim();
    if (j.contains("lucas")) ok = ok && j["lucas"].get<Index>() == ryd.dim();
    if (j.contains("fibonacci")) ok = ok && j["fibonacci"].get<Index>() == ryd.dim();
    return ok ? 0 : kExitCheckFailure;
}

int cmd_scars(const RunConfig& c) {
    if (!hermitian_model(c.model))
        throw Error(ErrorCode::config_error, "non-Hermitian models are applied, never diagonalized");
    const Setup s = make_setup(c);
    const RydbergBasis ryd = enumerate_rydberg(s.lattice);
    const BlockBasis block = make_block_basis(s.lattice, s.cover);
    const SpectralDecomposition spec = diagonalize(build_model(c, s, ryd));
    const VectorXr neel = neel_state(ryd, s.cover);
    const TrialTower trial = tower(block, ryd, TrialRoute::block_ladder);

    std::optional<TrialTower> mps;
    if (s.lattice.is_chain() && s.lattice.boundary == Boundary::periodic)
        mps = tower(block, ryd, TrialRoute::mps, c.mps_momentum);
    const ScarTable table = identify_scars(spec, trial, neel, mps ? &*mps : nullptr);

    const fs::path dir = prepare_out(c);
    write_json(dir / "basis.json", basis_json(s, ryd));
    write_text(dir / "spectrum.csv", [&](std::ostream& o) { write_spectrum_csv(o, spec.eigenvalues, overlaps2(spec, neel)); });
    write_text(dir / "scars.csv", [&](std::ostream& o) { write_scars_csv(o, table); });

    json neel_energies = json::array();
    for (Index k : neel_selected_tower(spec, neel, 2 * block.n_blocks + 1)) neel_energies.push_back(spec.eigenvalues[k]);
    const int nb = block.n_blocks;
    json summary = {{"config", config_json(c)},
                    {"dim", ryd.dim()},
                    {"E_top", table.row(nb).energy},
                    {"E_next", table.row(nb - 1).energy},
                    {"tail_spacing", table.row(nb).spacing_to_previous},
                    {"min_overlap2_trial", table.min_overlap2_trial()},
                    {"neel_selected_energies", neel_energies}};
    write_json(dir / "summary.json", summary);
    std::printf("E_top=%.6f E_next=%.6f min_overlap2_trial=%.4f\n", table.row(nb).energy, table.row(nb - 1).energy,
                table.min_overlap2_trial());
    return 0;
}

struct CheckList {
    json items = json::array();
    bool ok = true;
    void add(const std::string& name, double value, double limit, bool pass) {
        items.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"pass", pass}});
        ok = ok && pass;
        std::printf("%s %s value=%.3e limit=%.3e\n", pass ? "PASS" : "FAIL", name.c_str(), value, limit);
    }
    void below(const std::string& name, double value, double limit) { add(name, value, limit, value < limit); }
};

int cmd_verify(const RunConfig& c) {
    const Setup s = make_setup(c);
    const Lattice& lat = s.lattice;
    const bool pbc_chain = lat.is_chain() && lat.boundary == Boundary::periodic;
    const RydbergBasis ryd = enumerate_rydberg(lat);
    const BlockBasis block = make_block_basis(lat, s.cover);
    const int nb = block.n_blocks;
    const SparseOp h = build_pxp(lat, ryd);
    CheckList checks;

    if (lat.n_sites <= kMaxFullSites)
        checks.below("basis_brute_force", std::abs(double(count_rydberg_brute_force(lat) - ryd.dim())), 0.5);
    if (pbc_chain) checks.below("basis_lucas", std::abs(double(lucas(lat.n_sites) - ryd.dim())), 0.5);
    checks.below("pxp_hermitian", hermiticity_residual(h), 1e-12);

    {
        const BlockspinParts parts = build_blockspin_parts(block);
        const SparseOp sum = parts.hz + parts.h1 + parts.h2;
        std::mt19937_64 rng(c.seed);
        std::normal_distribution<double> gauss;
        double worst = 0.0, leak = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            VectorXr psi(block.dim());
            for (Index k = 0; k < psi.size(); ++k) psi[k] = gauss(rng);
            const VectorXr lhs = h * project_ryd(block, ryd, psi);
            const VectorXr rhs = project_ryd(block, ryd, VectorXr(sum * psi));
            worst = std::max(worst, (lhs - rhs).norm() / psi.norm());
            leak = std::max(leak, project_ryd(block, ryd, VectorXr(parts.h2 * psi)).norm() / psi.norm());
        }
        checks.below("block_decomposition", worst, 1e-10);
        checks.below("projected_h2_vanishes", leak, 1e-10);
    }

    {
        const NeelDecomposition d = verify_neel_decomposition(block, ryd);
        checks.below("neel_decomposition", std::max({d.residual, d.residual_swapped, d.local_residual}), 1e-10);
    }

    {
        const TrialTower t = tower(block, ryd, TrialRoute::block_ladder);
        double cover_gap = 0.0, route_gap = 0.0, phase_gap = 0.0;
        std::optional<BlockBasis> other;
        if (lat.is_chain() || lat.is_honeycomb()) {
            try {
                other = make_block_basis(lat, c.cover == "default" ? alternate_cover(lat) : default_cover(lat));
            } catch (const Error&) {
            }
        }
        const SymmetryOp shift = pbc_chain ? chain_translation(lat, 1) : SymmetryOp{};
        for (int n = -nb; n <= nb; ++n) {
            const VectorXr sn = t.column(n);
            if (other) cover_gap = std::max(cover_gap, 1.0 - std::abs(sn.dot(trial_scar(*other, ryd, n))));
            if (lat.n_sites <= kMaxFullSites)
                route_gap = std::max(route_gap, 1.0 - std::abs(sn.dot(trial_scar_invariant(ryd, n))));
            if (pbc_chain) {
                const double expected = ((nb - n) % 2 == 0) ? 1.0 : -1.0;
                phase_gap = std::max(phase_gap, std::abs(symmetry_expectation(ryd, shift, sn) - expected));
            }
        }
        if (other) checks.below("cover_invariance", cover_gap, 1e-9);
        if (lat.n_sites <= kMaxFullSites) checks.below("invariant_route", route_gap, 1e-9);
        if (pbc_chain) checks.below("translation_eigenvalue", phase_gap, 1e-9);
    }

    {
        const NhExactness r = nh_exactness_report(block, ryd, c.inject_sign_error);
        checks.below("nh_exactness", r.residual, c.tol);
        checks.add("hermitian_part_inexact", r.hermitian_part_residual, 0.0, r.hermitian_part_residual > 1e-6);
        checks.below("counterterm_k1", std::max(counterterm_residual(1, false), counterterm_residual(1, true)), 1e-12);
        checks.below("counterterm_k2", std::max(counterterm_residual(2, false), counterterm_residual(2, true)), 1e-12);
    }

    if (pbc_chain) {
        const VectorXr gamma = gamma_state(block, ryd);
        checks.below("mps_zero_energy", (h * gamma).norm(), 1e-10);
        double worst = 0.0;
        for (int n = -nb; n <= nb; ++n)
            worst = std::max(worst, std::abs(energy_correction_analytic(nb, n) - block_h1_expectation(block, n)));
        checks.below("energy_correction_oracle", worst, 1e-10);
    }

    const fs::path dir = prepare_out(c);
    write_json(dir / "basis.json", basis_json(s, ryd));
    write_json(dir / "summary.json", {{"config", config_json(c)}, {"checks", checks.items}, {"pass", checks.ok}});
    return checks.ok ? 0 : kExitCheckFailure;
}

int cmd_lambda(const RunConfig& c) {
    const Setup s = make_setup(c);
    if (!s.lattice.is_chain() || s.lattice.boundary != Boundary::periodic)
        throw Error(ErrorCode::unsupported_lattice, "lambda optimization runs on the periodic chain");
    const BlockBasis block = make_block_basis(s.lattice, s.cover);
    const std::vector<double> grid = lambda_grid(0.0, 2.0, 201);
    const LambdaObjective projected = residual_objective(block, true, grid);
    const LambdaObjective unprojected = residual_objective(block, false, grid);
    const LambdaObjective large = unprojected_objective_symmetric(c.large_n, grid);
    const AlphaBeta ab = alpha_beta_integrals();

    const fs::path dir = prepare_out(c);
    write_text(dir / "lambda_curve.csv", [&](std::ostream& o) {
        o << "lambda,projected,unprojected\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            o << format_double(grid[i]) << "," << format_double(projected.curve[i].second) << ","
              << format_double(unprojected.curve[i].second) << "\n";
    });
    json summary = {{"config", config_json(c)},
                    {"lambda_projected", projected.minimizer},
                    {"lambda_projected_grid", projected.grid_minimizer},
                    {"lambda_unprojected", unprojected.minimizer},
                    {"lambda_unprojected_large_n", large.minimizer},
                    {"large_n", c.large_n},
                    {"alpha", ab.alpha},
                    {"beta", ab.beta},
                    {"lambda_appendix", ab.lambda}};
    write_json(dir / "summary.json", summary);
    std::printf("lambda*=%.5f unprojected(N_b=%d)=%.5f alpha=%.6f beta=%.6f lambda_appendix=%.6f\n",
                projected.minimizer, c.large_n, large.minimizer, ab.alpha, ab.beta, ab.lambda);
    return 0;
}

int cmd_fidelity(const RunConfig& c) {
    if (!hermitian_model(c.model))
        throw Error(ErrorCode::config_error, "fidelity needs a Hermitian model");
    if (c.steps < 2 || c.t_max <= 0) throw Error(ErrorCode::config_error, "need --steps >= 2 and --tmax > 0");
    const Setup s = make_setup(c);
    const RydbergBasis ryd = enumerate_rydberg(s.lattice);
    const SpectralDecomposition spec = diagonalize(build_model(c, s, ryd));
    const VectorXr neel = neel_state(ryd, s.cover);
    std::vector<double> times(c.steps + 1);
    for (int i = 0; i <= c.steps; ++i) times[i] = c.t_max * i / c.steps;
    const std::vector<double> f = quench_fidelity(spec, neel, times);
    const auto revival = first_revival(times, f);

    const fs::path dir = prepare_out(c);
    write_text(dir / "fidelity.csv", [&](std::ostream& o) { write_fidelity_csv(o, times, f); });
    json summary = {{"config", config_json(c)}, {"reference_period", 2 * std::numbers::pi / kSqrt2}};
    summary["first_revival"] = revival ? json(*revival) : json(nullptr);
    write_json(dir / "summary.json", summary);
    std::printf("first_revival=%s\n", revival ? std::to_string(*revival).c_str() : "none");
    return 0;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::quadrature_failure:
    case ErrorCode::degenerate_ansatz:
    case ErrorCode::not_hermitian: return kExitCheckFailure;
    default: return kExitConfigError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scar towers of the PXP model on bipartite lattices"};
    app.set_config("--config", "", "TOML/INI file with option values")->check(CLI::ExistingFile);
    app.allow_config_extras(false);
    app.require_subcommand(1);

    RunConfig c;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--lattice", c.lattice, "chain, honeycomb or file:PATH")->capture_default_str();
        sub->add_option("--blocks", c.blocks, "chain blocks N_b")->capture_default_str();
        sub->add_option("--n1", c.n1, "honeycomb cells along a1")->capture_default_str();
        sub->add_option("--n2", c.n2, "honeycomb cells along a2")->capture_default_str();
        sub->add_option("--bc", c.bc, "pbc or obc (chain)")->capture_default_str();
        sub->add_option("--cover", c.cover, "default or alternate")->capture_default_str();
        sub->add_option("--model", c.model, "pxp, pxp+dhlambda, pxp+dhsu2, pxp+dhnh, pxp+dhnh_inv")
            ->capture_default_str();
        sub->add_option("--lambda", c.lambda, "dH(lambda) coefficient")->capture_default_str();
        sub->add_option("--out", c.out, "output directory")->capture_default_str();
        sub->add_option("--tol", c.tol, "tolerance of the exactness checks")->capture_default_str();
        sub->add_option("--seed", c.seed, "seed of the random test vectors")->capture_default_str();
    };

    auto* basis = app.add_subcommand("basis", "basis dimensions and counting checks");
    auto* scars = app.add_subcommand("scars", "diagonalize and identify the scar tower");
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    auto* lambda = app.add_subcommand("lambda", "optimize the dH(lambda) coefficient");
    auto* fidelity = app.add_subcommand("fidelity", "Neel quench fidelity");
    for (auto* sub : {basis, scars, verify, lambda, fidelity}) common(sub);
    scars->add_flag("--mps-momentum", c.mps_momentum, "project MPS states onto their translation sector");
    verify->add_flag("--inject-sign-error", c.inject_sign_error, "flip the single-neighbour counterterms");
    lambda->add_option("--large-n", c.large_n, "N_b of the symmetric unprojected evaluation")->capture_default_str();
    fidelity->add_option("--tmax", c.t_max, "final time")->capture_default_str();
    fidelity->add_option("--steps", c.steps, "number of time steps")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (*basis) return cmd_basis(c);
        if (*scars) return cmd_scars(c);
        if (*verify) return cmd_verify(c);
        if (*lambda) return cmd_lambda(c);
        if (*fidelity) return cmd_fidelity(c);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailure;
    }
    return kExitConfigError;
}
