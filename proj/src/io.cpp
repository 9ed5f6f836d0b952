#include "pxpscar/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace pxpscar {
namespace {

using nlohmann::json;

std::vector<int> int_array(const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::parse_error, std::string(what) + " must be an array");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw Error(ErrorCode::parse_error, std::string(what) + " entries must be integers");
        out.push_back(x.get<int>());
    }
    return out;
}

std::vector<Edge> pair_array(const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::parse_error, std::string(what) + " must be an array of pairs");
    std::vector<Edge> out;
    for (const auto& p : j) {
        const auto v = int_array(p, what);
        if (v.size() != 2) throw Error(ErrorCode::parse_error, std::string(what) + " entries must be pairs");
        out.emplace_back(v[0], v[1]);
    }
    return out;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw Error(ErrorCode::parse_error, "unknown key '" + key + "' in " + where);
}

std::string csv_row(Index index, const std::string& label, cplx z) {
    return std::to_string(index) + "," + label + "," + format_double(z.real()) + "," + format_double(z.imag()) + "\n";
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error(ErrorCode::parse_error, "cannot format number");
    return std::string(buf, end);
}

Lattice parse_lattice_json(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "lattice description must be an object");
    check_keys(j, {"n_sites", "edges", "sublattice", "dimers", "symmetries"}, "lattice");
    for (const char* key : {"n_sites", "edges", "sublattice"})
        if (!j.contains(key)) throw Error(ErrorCode::parse_error, std::string("missing key '") + key + "'");
    if (!j["n_sites"].is_number_integer()) throw Error(ErrorCode::parse_error, "n_sites must be an integer");

    const int n = j["n_sites"].get<int>();
    std::vector<Sublattice> sub;
    if (!j["sublattice"].is_array()) throw Error(ErrorCode::parse_error, "sublattice must be an array");
    for (const auto& s : j["sublattice"]) {
        if (s == "A") sub.push_back(Sublattice::A);
        else if (s == "B") sub.push_back(Sublattice::B);
        else throw Error(ErrorCode::parse_error, "sublattice labels must be \"A\" or \"B\"");
    }
    Lattice lat = make_lattice(n, pair_array(j["edges"], "edges"), std::move(sub), name);

    if (j.contains("dimers")) {
        DimerCover cover;
        for (auto [a, b] : pair_array(j["dimers"], "dimers")) {
            if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorCode::invalid_cover, "dimer site out of range");
            if (lat.sublattice[a] != Sublattice::A) std::swap(a, b);
            cover.dimers.emplace_back(a, b);
        }
        validate_cover(lat, cover);
        lat.declared_cover = cover;
    }
    if (j.contains("symmetries")) {
        if (!j["symmetries"].is_array()) throw Error(ErrorCode::parse_error, "symmetries must be an array");
        for (const auto& s : j["symmetries"]) {
            if (!s.is_object()) throw Error(ErrorCode::parse_error, "symmetry entries must be objects");
            check_keys(s, {"label", "perm"}, "symmetry");
            SymmetryOp op;
            op.perm = int_array(s.value("perm", json::array()), "perm");
            op.label = s.value("label", std::string("g") + std::to_string(lat.declared_symmetries.size()));
            std::vector<int> sorted = op.perm;
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
                if (sorted[i] != i) throw Error(ErrorCode::invalid_lattice, "perm is not a permutation of the sites");
            if (static_cast<int>(op.perm.size()) != n || !preserves_edges(lat, op))
                throw Error(ErrorCode::invalid_lattice, "symmetry '" + op.label + "' does not preserve the edges");
            lat.declared_symmetries.push_back(op);
        }
    }
    return lat;
}

Lattice load_lattice_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config_error, "cannot open lattice file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_lattice_json(buf.str());
}

std::string digit_string(const BlockBasis& block, Index state) {
    std::string s;
    for (int b = 0; b < block.n_blocks; ++b) s += "+0-"[block.digit(state, b)];
    return s;
}

void write_state_csv(std::ostream& out, const RydbergBasis& ryd, const VectorXc& v) {
    if (v.size() != ryd.dim()) throw Error(ErrorCode::basis_mismatch, "vector length is not the Rydberg dimension");
    out << "index,bitmask,re,im\n";
    for (Index j = 0; j < ryd.dim(); ++j) out << csv_row(j, std::to_string(ryd.states[j]), v[j]);
}

void write_state_csv(std::ostream& out, const BlockBasis& block, const VectorXc& v) {
    if (v.size() != block.dim()) throw Error(ErrorCode::basis_mismatch, "vector length is not 3^N_b");
    out << "index,digits,re,im\n";
    for (Index k = 0; k < block.dim(); ++k) out << csv_row(k, digit_string(block, k), v[k]);
}

StateRecord read_state_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, "empty state file");
    std::vector<std::pair<std::string, cplx>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 4) throw Error(ErrorCode::parse_error, "state rows need four columns");
        if (std::stoll(f[0]) != static_cast<long long>(rows.size()))
            throw Error(ErrorCode::parse_error, "state rows must be ordered by index");
        double re = 0.0, im = 0.0;
        auto r1 = std::from_chars(f[2].data(), f[2].data() + f[2].size(), re);
        auto r2 = std::from_chars(f[3].data(), f[3].data() + f[3].size(), im);
        if (r1.ec != std::errc() || r2.ec != std::errc()) throw Error(ErrorCode::parse_error, "bad amplitude");
        rows.emplace_back(f[1], cplx(re, im));
    }
    StateRecord rec;
    rec.amplitudes.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rec.labels.push_back(rows[i].first);
        rec.amplitudes[static_cast<Index>(i)] = rows[i].second;
    }
    return rec;
}

void write_matrix_market(std::ostream& out, const SparseOp& m, const std::vector<std::string>& header) {
    out << "%%MatrixMarket matrix coordinate complex general\n";
    for (const auto& h : header) out << "% " << h << "\n";
    out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SparseOp::InnerIterator it(m, r); it; ++it)
            out << it.row() + 1 << " " << it.col() + 1 << " " << format_double(it.value()) << " 0\n";
}

void write_tower_csv(std::ostream& out, const TrialTower& tower) {
    out << "n,basis_index,re,im\n";
    for (std::size_t k = 0; k < tower.n_values.size(); ++k)
        for (Index j = 0; j < tower.states.rows(); ++j)
            out << tower.n_values[k] << "," << j << "," << format_double(tower.states(j, static_cast<Index>(k)))
                << ",0\n";
}

void write_spectrum_csv(std::ostream& out, const VectorXr& eigenvalues, const VectorXr& neel_overlap2) {
    out << "index,E,overlap2_neel\n";
    for (Index k = 0; k < eigenvalues.size(); ++k)
        out << k << "," << format_double(eigenvalues[k]) << ","
            << (k < neel_overlap2.size() ? format_double(neel_overlap2[k]) : std::string("")) << "\n";
}

void write_scars_csv(std::ostream& out, const ScarTable& table) {
    out << "n,E_n,spacing_to_previous,overlap2_trial,overlap2_mps,overlap2_neel,degenerate_flag\n";
    for (const auto& r : table.rows) {
        out << r.n << "," << format_double(r.energy) << "," << format_double(r.spacing_to_previous) << ","
            << format_double(r.overlap2_trial) << ","
            << (r.overlap2_mps < 0 ? std::string("") : format_double(r.overlap2_mps)) << ","
            << format_double(r.overlap2_neel) << "," << (r.degeneracy > 1 ? r.degeneracy : 0) << "\n";
    }
}

void write_fidelity_csv(std::ostream& out, const std::vector<double>& times, const std::vector<double>& fidelity) {
    out << "t,fidelity\n";
    for (std::size_t i = 0; i < times.size() && i < fidelity.size(); ++i)
        out << format_double(times[i]) << "," << format_double(fidelity[i]) << "\n";
}

} // namespace pxpscar
