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

#include <optional>
#include <string>
#include <vector>

#include "qd/group.hpp"
#include "qd/lattice.hpp"
#include "qd/state.hpp"

namespace qd {

struct ProtocolLogEntry {
    std::string op;
    std::string detail;
    int outcome = -1;        // -1 when the step has no measurement
    double probability = -1.0;
};

struct AnyonRecord {
    enum class Kind { Magnetic, Electric };
    Kind kind;
    std::string label;            // conjugacy class name or irrep label
    std::vector<int> sites;       // faces for magnetic, vertices for electric
    bool active = true;
};

struct FusionDistribution {
    std::vector<std::pair<std::string, double>> channels;
    double probability(const std::string& label) const;
    double total() const;
};

/// Shared run state: measurement mode, RNG, protocol log, anyon bookkeeping.
/// Branch mode picks `forced_outcome` when set, otherwise the most likely
/// outcome (ties to the lowest index).
struct RunContext {
    MeasureMode mode = MeasureMode::Branch;
    std::mt19937_64 rng{0};
    std::optional<int> forced_outcome;
    std::vector<ProtocolLogEntry> log;
    std::vector<AnyonRecord> anyons;

    int take_forced() {
        if (!forced_outcome) return -1;
        const int k = *forced_outcome;
        forced_outcome.reset();
        return k;
    }
    void record(std::string op, std::string detail, int outcome = -1, double probability = -1.0) {
        log.push_back({std::move(op), std::move(detail), outcome, probability});
    }
};

enum class CorrectionPolicy { PaperCorrection, Postselect };

/// Lattice + group + site registry bundle every protocol operates on.
class QdSystem {
  public:
    FiniteGroup group;
    Lattice lattice;
    SiteRegistry registry;
    std::shared_ptr<const SiteLayout> layout;

    QdSystem(FiniteGroup g, Lattice lat);

    int d() const { return group.order; }
    int edge_site(int e) const { return registry.edge_site(e); }
    int vertex_ancilla(int v) const { return registry.vertex_ancilla_site(v); }
    int face_ancilla(int f) const { return registry.face_ancilla_site(f); }

    std::vector<int> left_mul_perm(int h) const;
    std::vector<int> right_mul_perm(int h) const;

    /// All code qudits and ancillas in |e> = |0>.
    SparseState initial_state() const;

    /// Fourier (tilde) measurement basis as a matrix of row vectors.
    Mat fourier_basis() const;

    /// The oriented edge joining u and w, with `forward` true when it points
    /// u -> w. Throws if the vertices are not adjacent.
    std::pair<int, bool> edge_between(int u, int w) const;

    /// Asserts that `site` holds the definite value 0 (|e>) in every stored
    /// configuration.
    void require_site_zero(const SparseState& state, int site, const std::string& who) const;
};

// ---- gauge structure ------------------------------------------------------

/// Edge rewrites of the gauge transformation T_g(v): left multiplication on
/// outgoing star edges, right multiplication by the inverse on incoming ones.
std::vector<PrimAction> gauge_actions(const QdSystem& sys, int v, int g);

void gauge_transform(SparseState& state, const QdSystem& sys, int v, int g);

/// A(v) = (1/|G|) sum_g T_g(v) as a weighted operator sum.
SparseOperator vertex_projector(const QdSystem& sys, int v);

double vertex_projector_expectation(const SparseState& state, const QdSystem& sys, int v);

/// Flux of one basis configuration through face f: the base-pointed cycle
/// product of edge values, inverted where the edge opposes the walk. Uses
/// the face's stored base vertex unless `base_vertex` is given.
int flux_of_key(const QdSystem& sys, Key k, int f, int base_vertex = -1);

/// Probability weight of each flux value at f (a diagonal observable).
std::vector<double> flux_distribution(const SparseState& state, const QdSystem& sys, int f, int base_vertex = -1);

/// <B_l(f)>; l defaults to the identity (the ground-state flux condition).
double flux_projector_expectation(const SparseState& state, const QdSystem& sys, int f, int element = 0);

// ---- ground state ---------------------------------------------------------

/// Controlled gauge transform sum_h |h><h| (x) T_h(v) between the vertex
/// ancilla and the star edges.
void apply_controlled_gauge(SparseState& state, const QdSystem& sys, int v);

/// Ancilla-mediated A(v) measurement: requires the vertex ancilla in the
/// Fourier |~0> state, entangles it with the star, and measures it in the
/// tilde basis. Outcome 0 projects with A(v).
MeasurementOutcome measure_vertex(SparseState& state, const QdSystem& sys, int v, RunContext& ctx);

SparseState prepare_ground_state(const QdSystem& sys, CorrectionPolicy policy, RunContext& ctx);

/// Projects the all-|e> state with every A(v) and normalizes. Independent of
/// vertex order; guarded against oversized lattices.
SparseState ground_state_oracle(const QdSystem& sys);

struct StabilizerTable {
    std::vector<std::pair<std::string, double>> vertex_terms;
    std::vector<std::pair<std::string, double>> face_terms;
    bool all_one(double tol = 1e-10) const;
};
StabilizerTable stabilizer_table(const SparseState& state, const QdSystem& sys);

// ---- magnetic charges ------------------------------------------------------

/// Writes the flux at f (based at w) onto the face ancilla by a chain of
/// edge-controlled left multiplications. The ancilla must start in |e>.
void flux_to_ancilla(SparseState& state, const QdSystem& sys, int w, int f);
void flux_to_ancilla_inverse(SparseState& state, const QdSystem& sys, int w, int f);

/// Creates the conjugation-invariant magnetic vacuum pair of class `cls` on
/// the two adjacent interior faces. Any measurement outcome is corrected, so
/// the preparation is deterministic.
void create_magnetic_vacuum_pair(SparseState& state, const QdSystem& sys, int cls, int f1, int f2, RunContext& ctx);

/// Moves the magnetic charge at f to the adjacent vacuum face f2. All face
/// ancillas are returned to |e> and verified pure.
void transport_magnetic(SparseState& state, const QdSystem& sys, int f, int f2);

/// Fuses the adjacent pair at (f1, f2): annihilates it coherently and
/// measures the class register. Outcome "vacuum" has the vacuum-fusion
/// probability; the post-state is the merged code state with the pair gone.
FusionDistribution fuse_magnetic(SparseState& state, const QdSystem& sys, int f1, int f2, int cls, RunContext& ctx);

// ---- electric charges ------------------------------------------------------

/// K(v,e): writes the edge value (or its inverse for incoming edges) onto
/// the vertex ancilla by right multiplication.
void conditional_rotation_K(SparseState& state, const QdSystem& sys, int v, int e, bool inverse = false);

/// Creates the conjugation-invariant electric vacuum pair of irrep R at the
/// ends of a vertex path. Returns the post-selection weight (squared norm)
/// of the character-weight operator W_R; 1 for the unitary cases.
double create_electric_vacuum_pair(SparseState& state, const QdSystem& sys, const std::string& irrep,
                                   const std::vector<int>& path, RunContext& ctx);

/// Fusion channel measurement for the electric pair at the path endpoints:
/// accumulates the path group element onto the ancilla, disentangles the
/// code with a controlled gauge transform, and measures in the character
/// basis. Channels: one per irrep label, then "aux<k>" completions. The
/// post-state is the renormalized projection onto the measured channel.
FusionDistribution fuse_electric(SparseState& state, const QdSystem& sys, const std::vector<int>& path,
                                 RunContext& ctx);

/// T_h(v) logged as a braiding event: a flux pair (h, h^-1) carried around
/// the vertex and annihilated.
void braid_flux_around_vertex(SparseState& state, const QdSystem& sys, int h, int v, RunContext& ctx);

struct InterferenceResult {
    double p_plus = 0.0, p_minus = 0.0;          // real-quadrature outcome weights
    double p_plus_im = 0.0, p_minus_im = 0.0;    // imaginary quadrature
    double visibility_re = 0.0;                  // P(+) - P(-) = Re<T_h>
    double visibility_im = 0.0;                  // Im<T_h>
    double fusion_probability = 0.0;             // |<T_h>|^2
    double pair_survival = 1.0;
};

/// Single-face interference: prepares the ground state and an adjacent
/// electric R2 vacuum pair, drives the vertex ancilla through (|e>+|h>)/sqrt2
/// with the controlled gauge transform, and reads both interferometer
/// quadratures. `fusion_probability` is |Tr R2(h)|^2 / |R2|^2.
InterferenceResult single_face_interference(const QdSystem& sys, int h, RunContext& ctx);

/// Same experiment on an already-prepared pair between v and v2.
InterferenceResult interference_on_pair(const SparseState& pair_state, const QdSystem& sys, int v, int h,
                                        RunContext& ctx);

}  // namespace qd
