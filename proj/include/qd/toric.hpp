// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qd/protocols.hpp"

namespace qd {

/// Direct Pauli realization of the two-element-group model. Operates on a
/// QdSystem built with the z2 group; ancillas are the registry's vertex and
/// face qudits.
namespace toric {

enum class PauliKind { X, Z };
enum class StabKind { Vertex, Plaquette };

/// U_X / U_Z between an ancilla site and one code edge: identity on ancilla
/// |0>, the Pauli on |1>.
void controlled_pauli(SparseState& state, const QdSystem& sys, int ancilla_site, int edge, PauliKind kind);

/// Ancilla-mediated stabilizer measurement: |+> ancilla, a controlled Pauli
/// per support edge, then an X-basis readout. Returns +1/-1 and leaves the
/// post-state projected by (1 +- S)/norm; the ancilla is parked back in |0>.
MeasurementOutcome measure_stabilizer(SparseState& state, const QdSystem& sys, StabKind kind, int index,
                                      RunContext& ctx);
int stabilizer_sign(const MeasurementOutcome& out);  // outcome 0 -> +1, 1 -> -1

/// Pauli string via an ancilla prepared in |1>.
void apply_string(SparseState& state, const QdSystem& sys, PauliKind kind, const std::vector<int>& path,
                  RunContext& ctx);

/// String-operator measurement via a |+> ancilla; projects (1 +- P)/norm.
MeasurementOutcome measure_string(SparseState& state, const QdSystem& sys, PauliKind kind,
                                  const std::vector<int>& path, RunContext& ctx);

/// Measurement-based code preparation from |0...0>: A stabilizers row-major
/// with the below-edge correction, the rightmost-qubit correction on the
/// last row. On the open lattice the final vertex is skipped (its
/// constraint is implied); on the rough-smooth rectangle every vertex is
/// measured and the last correction uses the right half-edge.
SparseState prepare_toric_code(const QdSystem& sys, RunContext& ctx);

/// All stabilizer signs of the current state (expectation of each A_v, B_p).
std::vector<std::pair<std::string, double>> stabilizer_signs(const SparseState& state, const QdSystem& sys);

struct PhaseLedger {
    double phi_s = 0.0;
    double phi_d = 0.0;
    double phi_g = 0.0;  // no mechanism generates one in an ideal gate model
    double coupling = 0.0;
    int t_braid = 0;
    double measured_phase = 0.0;  // arg of the interferometer amplitude, in (-pi, pi]
    double total() const { return phi_s + phi_d + phi_g; }
};

struct Fig3Result {
    double p_plus = 0.0;
    double p_minus = 0.0;
    int outcome_sign = 0;  // collapsed A2 readout
    PhaseLedger ledger;
};

/// The minimal interferometry run: an electric pair created unconditionally
/// by A1 = |1>, a magnetic pair superposed by A2 = |+>, the magnetic defect
/// wound around the chosen vertex, reannihilated, and A2 read in the +-
/// basis. `enclose` picks whether the electric pair sits inside the loop;
/// `windings` repeats the loop; `coupling` adds the background-energy phase
/// 2U per broken stabilizer per winding gate.
Fig3Result interferometry_fig3(const QdSystem& sys, bool enclose, int windings, double coupling, int t_braid,
                               RunContext& ctx);

struct ReferencePhaseResult {
    double raw_main = 0.0;       // unwrapped pi + 4 U t ledger value
    double raw_reference = 0.0;  // unwrapped 4 U t
    double phi_s = 0.0;          // wrapped difference
    double measured_main = 0.0;
    double measured_reference = 0.0;
};

/// Runs the enclosed and control interferometers with identical braid paths
/// and particle counts and subtracts the accumulated phases.
ReferencePhaseResult reference_phase_experiment(const QdSystem& sys, double coupling, int t_braid, RunContext& ctx);

/// Logical operations on the rough-smooth rectangle.
MeasurementOutcome measure_logical_z(SparseState& state, const QdSystem& sys, RunContext& ctx);
void apply_logical_x(SparseState& state, const QdSystem& sys, RunContext& ctx);

/// Syndrome lookup for single-qubit Pauli errors: signature of violated
/// stabilizers -> the edge to correct.
struct SingleErrorDecoder {
    explicit SingleErrorDecoder(const QdSystem& sys);
    /// Returns the edge whose `kind` correction clears the syndrome.
    int decode(PauliKind kind, const std::vector<std::string>& violated) const;

  private:
    std::vector<std::pair<std::string, int>> x_table_;  // syndrome signature -> edge
    std::vector<std::pair<std::string, int>> z_table_;
};

/// Signature helper shared by the decoder and tests: the violated-stabilizer
/// labels of a single Pauli on one edge, from commutation alone.
std::vector<std::string> single_error_syndrome(const QdSystem& sys, PauliKind kind, int edge);

}  // namespace toric
}  // namespace qd
