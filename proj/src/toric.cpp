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

#include "qd/toric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qd {
namespace toric {

namespace {

const std::vector<int> kFlip = {1, 0};
const std::vector<cplx> kZPhase = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};

Mat hadamard() {
    Mat h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h.at(0, 0) = s;
    h.at(0, 1) = s;
    h.at(1, 0) = s;
    h.at(1, 1) = -s;
    return h;
}

Mat pm_basis() {
    // Rows |+>, |->.
    return hadamard();
}

void require_z2(const QdSystem& sys) {
    if (sys.group.order != 2) throw ValidationError("toric operations need the two-element group");
}

std::vector<int> stabilizer_support(const QdSystem& sys, StabKind kind, int index) {
    std::vector<int> edges;
    if (kind == StabKind::Vertex) {
        for (const auto& [e, dir] : sys.lattice.vertex_star(index)) edges.push_back(e);
    } else {
        for (const auto& [e, sign] : sys.lattice.face_cycle(index)) edges.push_back(e);
    }
    return edges;
}

int pick_sign_outcome(const std::vector<double>& probs, RunContext& ctx) {
    const int forced = ctx.take_forced();
    if (forced >= 0) return forced;
    if (ctx.mode == MeasureMode::Sample) {
        const double u = uniform_unit(ctx.rng);
        return u < probs[0] ? 0 : 1;
    }
    return probs[1] > probs[0] + 1e-15 ? 1 : 0;
}

double wrap_phase(double x) {
    while (x > std::numbers::pi) x -= 2.0 * std::numbers::pi;
    while (x <= -std::numbers::pi) x += 2.0 * std::numbers::pi;
    return x;
}

}  // namespace

void controlled_pauli(SparseState& state, const QdSystem& sys, int ancilla_site, int edge, PauliKind kind) {
    require_z2(sys);
    std::vector<std::vector<PrimAction>> family(2);
    if (kind == PauliKind::X)
        family[1] = {PermAction{sys.edge_site(edge), kFlip}};
    else
        family[1] = {DiagAction{sys.edge_site(edge), kZPhase}};
    state.apply_controlled(ancilla_site, family);
}

int stabilizer_sign(const MeasurementOutcome& out) { return out.outcome == 0 ? +1 : -1; }

MeasurementOutcome measure_stabilizer(SparseState& state, const QdSystem& sys, StabKind kind, int index,
                                      RunContext& ctx) {
    require_z2(sys);
    const int anc = kind == StabKind::Vertex ? sys.vertex_ancilla(index) : sys.face_ancilla(index);
    sys.require_site_zero(state, anc, "measure_stabilizer");
    state.apply_site_unitary(anc, hadamard());  // |0> -> |+>
    const PauliKind pauli = kind == StabKind::Vertex ? PauliKind::X : PauliKind::Z;
    for (int e : stabilizer_support(sys, kind, index)) controlled_pauli(state, sys, anc, e, pauli);

    const Mat basis = pm_basis();
    const auto probs = state.measurement_distribution(anc, basis);
    const int k = pick_sign_outcome(probs, ctx);
    const auto out = state.measure(anc, basis, MeasureMode::Branch, nullptr, k);
    // Ancilla back to |0>.
    state.apply_site_unitary(anc, hadamard());
    if (out.outcome == 1) state.apply_perm(anc, kFlip);
    const std::string label = kind == StabKind::Vertex ? "A-vertex " + std::to_string(index)
                                                       : "B-" + sys.lattice.face_label(index);
    ctx.record("measure-stabilizer", label, out.outcome, out.probability);
    return out;
}

void apply_string(SparseState& state, const QdSystem& sys, PauliKind kind, const std::vector<int>& path,
                  RunContext& ctx) {
    require_z2(sys);
    if (path.empty()) throw ValidationError("string path is empty");
    const int anc = sys.vertex_ancilla(0);
    sys.require_site_zero(state, anc, "apply_string");
    state.apply_perm(anc, kFlip);  // |0> -> |1>
    for (int e : path) controlled_pauli(state, sys, anc, e, kind);
    state.apply_perm(anc, kFlip);
    ctx.record("apply-string", std::string(kind == PauliKind::X ? "X" : "Z") + " on " +
                                   std::to_string(path.size()) + " edges");
}

MeasurementOutcome measure_string(SparseState& state, const QdSystem& sys, PauliKind kind,
                                  const std::vector<int>& path, RunContext& ctx) {
    require_z2(sys);
    if (path.empty()) throw ValidationError("string path is empty");
    const int anc = sys.vertex_ancilla(0);
    sys.require_site_zero(state, anc, "measure_string");
    state.apply_site_unitary(anc, hadamard());
    for (int e : path) controlled_pauli(state, sys, anc, e, kind);
    const Mat basis = pm_basis();
    const auto probs = state.measurement_distribution(anc, basis);
    const int k = pick_sign_outcome(probs, ctx);
    const auto out = state.measure(anc, basis, MeasureMode::Branch, nullptr, k);
    state.apply_site_unitary(anc, hadamard());
    if (out.outcome == 1) state.apply_perm(anc, kFlip);
    ctx.record("measure-string", std::string(kind == PauliKind::X ? "X" : "Z") + " on " +
                                     std::to_string(path.size()) + " edges",
               out.outcome, out.probability);
    return out;
}

SparseState prepare_toric_code(const QdSystem& sys, RunContext& ctx) {
    require_z2(sys);
    const int n = sys.lattice.rows, m = sys.lattice.cols;
    const bool rough = sys.lattice.boundary == Boundary::RoughSmooth;
    SparseState state = sys.initial_state();

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            if (!rough && i == n - 1 && j == m - 1) continue;  // implied by the others
            const int v = sys.lattice.vertex_id(i, j);
            const auto out = measure_stabilizer(state, sys, StabKind::Vertex, v, ctx);
            if (stabilizer_sign(out) == -1) {
                int corr;
                if (i < n - 1)
                    corr = sys.lattice.vertical_edge(i, j);
                else if (j < m - 1)
                    corr = sys.lattice.horizontal_edge(i, j);
                else
                    corr = sys.lattice.right_half_edge(i);
                apply_string(state, sys, PauliKind::Z, {corr}, ctx);
                ctx.record("correction", "Z on " + sys.lattice.edge_label(corr));
            }
        }
    ctx.record("prepare-code", (rough ? "rough-smooth " : "open ") + std::to_string(n) + "x" + std::to_string(m));
    return state;
}

std::vector<std::pair<std::string, double>> stabilizer_signs(const SparseState& state, const QdSystem& sys) {
    std::vector<std::pair<std::string, double>> out;
    for (int v = 0; v < sys.lattice.vertex_count(); ++v) {
        const auto [i, j] = sys.lattice.vertex_coords(v);
        out.push_back({"A(" + std::to_string(i) + "," + std::to_string(j) + ")",
                       2.0 * vertex_projector_expectation(state, sys, v) - 1.0});
    }
    for (int f = 0; f < static_cast<int>(sys.lattice.faces.size()); ++f)
        out.push_back({"B" + sys.lattice.face_label(f),
                       2.0 * flux_projector_expectation(state, sys, f) - 1.0});
    return out;
}

namespace {

/// Broken-stabilizer count of a (sub)state that is a stabilizer eigenstate.
int count_defects(const SparseState& state, const QdSystem& sys) {
    int defects = 0;
    for (const auto& [label, s] : stabilizer_signs(state, sys)) {
        if (std::abs(std::abs(s) - 1.0) > 1e-6)
            throw ProtocolError("state is not a stabilizer eigenstate at " + label);
        if (s < 0.0) ++defects;
    }
    return defects;
}

SparseState sector(const SparseState& state, int site, int value) {
    SparseState sub(state.layout);
    sub.prune_epsilon = state.prune_epsilon;
    for (const auto& [k, a] : state.amps)
        if (state.layout->get(k, site) == value) sub.amps.emplace(k, a);
    sub.normalize();
    return sub;
}

/// Winding loop around the vertex block: edges with exactly one endpoint in
/// the block, ordered so consecutive edges flank a common face.
std::vector<int> loop_edges(const QdSystem& sys, int t_braid) {
    const auto& lat = sys.lattice;
    if (t_braid == 4) {
        if (lat.rows < 3 || lat.cols < 3) throw ValidationError("the 4-gate loop needs at least a 3x3 lattice");
        return {lat.vertical_edge(0, 1), lat.horizontal_edge(1, 1), lat.vertical_edge(1, 1),
                lat.horizontal_edge(1, 0)};
    }
    if (t_braid == 8) {
        if (lat.rows < 4 || lat.cols < 4) throw ValidationError("the 8-gate loop needs at least a 4x4 lattice");
        return {lat.vertical_edge(0, 1),   lat.vertical_edge(0, 2),   lat.horizontal_edge(1, 2),
                lat.horizontal_edge(2, 2), lat.vertical_edge(2, 2),   lat.vertical_edge(2, 1),
                lat.horizontal_edge(2, 0), lat.horizontal_edge(1, 0)};
    }
    throw ValidationError("supported braid durations are 4 and 8 gates");
}

cplx sector_overlap(const SparseState& state, int site) {
    // sum conj(a[k, site=0]) * a[k, site=1] over configurations.
    cplx ov = 0.0;
    for (const auto& [k, a] : state.amps) {
        if (state.layout->get(k, site) != 0) continue;
        auto it = state.amps.find(state.layout->set(k, site, 1));
        if (it != state.amps.end()) ov += std::conj(a) * it->second;
    }
    return ov;
}

}  // namespace

Fig3Result interferometry_fig3(const QdSystem& sys, bool enclose, int windings, double coupling, int t_braid,
                               RunContext& ctx) {
    require_z2(sys);
    if (sys.lattice.boundary != Boundary::RoughSmooth)
        throw ValidationError("the interferometry experiment runs on the rough-smooth rectangle");
    const auto& lat = sys.lattice;
    const int n = lat.rows, m = lat.cols;
    if (windings < 1) throw ValidationError("windings must be positive");

    SparseState state = prepare_toric_code(sys, ctx);

    // Electric pair: enclosed runs place one defect at the loop center (1,1);
    // the control run uses the far corner so the loop encloses none.
    const int e_edge = enclose ? lat.horizontal_edge(1, 0) : lat.horizontal_edge(n - 1, m - 2);
    const int a1 = sys.vertex_ancilla(lat.edges[e_edge].src);
    sys.require_site_zero(state, a1, "interferometry_fig3");
    state.apply_perm(a1, kFlip);  // A1 = |1>
    controlled_pauli(state, sys, a1, e_edge, PauliKind::Z);
    ctx.record("create-electric", std::string("U_Z on ") + lat.edge_label(e_edge) +
                                      (enclose ? " (enclosed)" : " (control)"));

    // Magnetic superposition: A2 = |+>, one U_X on the first loop edge.
    const auto loop = loop_edges(sys, t_braid);
    const int a2 = sys.vertex_ancilla(lat.vertex_id(1, 1));
    sys.require_site_zero(state, a2, "interferometry_fig3");
    state.apply_site_unitary(a2, hadamard());
    controlled_pauli(state, sys, a2, loop[0], PauliKind::X);
    ctx.record("create-magnetic-superposition", "U_X on " + lat.edge_label(loop[0]));

    // Winding order keeps exactly one defect pair alive in the |1> sector:
    // push the moving defect around, then hand the partner across the
    // creation edge, then close the ring.
    std::vector<int> order;
    for (size_t k = 1; k + 1 < loop.size(); ++k) order.push_back(loop[k]);
    order.push_back(loop[0]);
    order.push_back(loop.back());

    Fig3Result res;
    res.ledger.coupling = coupling;
    res.ledger.t_braid = t_braid * windings;
    for (int wind = 0; wind < windings; ++wind)
        for (int e : order) {
            controlled_pauli(state, sys, a2, e, PauliKind::X);
            if (coupling != 0.0) {
                const int d0 = count_defects(sector(state, a2, 0), sys);
                const int d1 = count_defects(sector(state, a2, 1), sys);
                res.ledger.phi_d += 2.0 * coupling * (d1 - d0);
                const cplx ph0 = std::exp(cplx(0.0, 2.0 * coupling * d0));
                const cplx ph1 = std::exp(cplx(0.0, 2.0 * coupling * d1));
                for (auto& [k, a] : state.amps)
                    a *= (state.layout->get(k, a2) == 0) ? ph0 : ph1;
            }
        }
    ctx.record("winding", std::to_string(windings) + " loop(s), " + std::to_string(t_braid) + " gates each");

    controlled_pauli(state, sys, a2, loop[0], PauliKind::X);  // reannihilate
    res.ledger.measured_phase = std::arg(sector_overlap(state, a2));
    res.ledger.phi_s = wrap_phase(res.ledger.measured_phase - res.ledger.phi_d);

    const Mat basis = pm_basis();
    const auto probs = state.measurement_distribution(a2, basis);
    res.p_plus = probs[0];
    res.p_minus = probs[1];
    const int k = pick_sign_outcome(probs, ctx);
    const auto out = state.measure(a2, basis, MeasureMode::Branch, nullptr, k);
    res.outcome_sign = stabilizer_sign(out);
    ctx.record("readout-a2", enclose ? "main" : "control", out.outcome, out.probability);
    return res;
}

ReferencePhaseResult reference_phase_experiment(const QdSystem& sys, double coupling, int t_braid,
                                                RunContext& ctx) {
    const Fig3Result main_run = interferometry_fig3(sys, true, 1, coupling, t_braid, ctx);
    const Fig3Result ref_run = interferometry_fig3(sys, false, 1, coupling, t_braid, ctx);
    ReferencePhaseResult res;
    res.measured_main = main_run.ledger.measured_phase;
    res.measured_reference = ref_run.ledger.measured_phase;
    res.raw_main = main_run.ledger.phi_d + wrap_phase(main_run.ledger.measured_phase - main_run.ledger.phi_d);
    res.raw_reference = ref_run.ledger.phi_d + wrap_phase(ref_run.ledger.measured_phase - ref_run.ledger.phi_d);
    res.phi_s = wrap_phase(res.raw_main - res.raw_reference);
    ctx.record("reference-phase", "U=" + format_g12(coupling) + " t=" + std::to_string(t_braid) +
                                      " phi_s=" + format_g12(res.phi_s));
    return res;
}

MeasurementOutcome measure_logical_z(SparseState& state, const QdSystem& sys, RunContext& ctx) {
    const auto [z_path, x_path] = sys.lattice.logical_paths();
    return measure_string(state, sys, PauliKind::Z, z_path, ctx);
}

void apply_logical_x(SparseState& state, const QdSystem& sys, RunContext& ctx) {
    const auto [z_path, x_path] = sys.lattice.logical_paths();
    apply_string(state, sys, PauliKind::X, x_path, ctx);
}

std::vector<std::string> single_error_syndrome(const QdSystem& sys, PauliKind kind, int edge) {
    std::vector<std::string> violated;
    if (kind == PauliKind::X) {
        for (int f = 0; f < static_cast<int>(sys.lattice.faces.size()); ++f)
            for (const auto& [e, sign] : sys.lattice.face_cycle(f))
                if (e == edge) violated.push_back("B" + sys.lattice.face_label(f));
    } else {
        for (int v : {sys.lattice.edges[edge].src, sys.lattice.edges[edge].dst}) {
            if (v < 0) continue;
            const auto [i, j] = sys.lattice.vertex_coords(v);
            violated.push_back("A(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    std::sort(violated.begin(), violated.end());
    return violated;
}

namespace {
std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) {
        if (!s.empty()) s += "|";
        s += p;
    }
    return s;
}
}  // namespace

SingleErrorDecoder::SingleErrorDecoder(const QdSystem& sys) {
    for (int e = 0; e < static_cast<int>(sys.lattice.edges.size()); ++e) {
        const std::string xs = join(single_error_syndrome(sys, PauliKind::X, e));
        const std::string zs = join(single_error_syndrome(sys, PauliKind::Z, e));
        for (const auto& [sig, edge] : x_table_)
            if (sig == xs) throw ValidationError("ambiguous X syndrome " + xs);
        for (const auto& [sig, edge] : z_table_)
            if (sig == zs) throw ValidationError("ambiguous Z syndrome " + zs);
        x_table_.push_back({xs, e});
        z_table_.push_back({zs, e});
    }
}

int SingleErrorDecoder::decode(PauliKind kind, const std::vector<std::string>& violated) const {
    std::vector<std::string> sorted = violated;
    std::sort(sorted.begin(), sorted.end());
    const std::string sig = join(sorted);
    const auto& table = kind == PauliKind::X ? x_table_ : z_table_;
    for (const auto& [s, e] : table)
        if (s == sig) return e;
    throw ProtocolError("syndrome does not match any single-qubit error: " + sig);
}

}  // namespace toric
}  // namespace qd
