// io.hpp
#pragma once

#include "pxpscar/analysis.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pxpscar {

// Lattice JSON: n_sites, edges, sublattice, optional dimers and symmetries. Unknown keys are rejected.
Lattice parse_lattice_json(const std::string& text, const std::string& name = "custom");
Lattice load_lattice_json(const std::string& path);

// CSV rows (index, label, re, im) at 17 significant digits. The label is the bitmask for the
// Rydberg basis and the digit string (+0-, block 0 first) for the block basis.
void write_state_csv(std::ostream& out, const RydbergBasis& ryd, const VectorXc& v);
void write_state_csv(std::ostream& out, const BlockBasis& block, const VectorXc& v);

struct StateRecord {
    std::vector<std::string> labels;
    VectorXc amplitudes;
};
StateRecord read_state_csv(std::istream& in);

std::string digit_string(const BlockBasis& block, Index state);

// MatrixMarket coordinate complex general; each header line becomes a % comment.
void write_matrix_market(std::ostream& out, const SparseOp& m, const std::vector<std::string>& header);

// Columns n, basis_index, re, im.
void write_tower_csv(std::ostream& out, const TrialTower& tower);
// Columns index, E, overlap2_neel.
void write_spectrum_csv(std::ostream& out, const VectorXr& eigenvalues, const VectorXr& neel_overlap2);
// Columns n, E_n, spacing_to_previous, overlap2_trial, overlap2_mps, overlap2_neel, degenerate_flag.
void write_scars_csv(std::ostream& out, const ScarTable& table);
void write_fidelity_csv(std::ostream& out, const std::vector<double>& times, const std::vector<double>& fidelity);

// Shortest text that reads back to the same double.
std::string format_double(double x);

} // namespace pxpscar
