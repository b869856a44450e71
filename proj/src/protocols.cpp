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

#include "qd/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qd {

double FusionDistribution::probability(const std::string& label) const {
    for (const auto& [l, p] : channels)
        if (l == label) return p;
    return 0.0;
}

double FusionDistribution::total() const {
    double s = 0.0;
    for (const auto& [l, p] : channels) s += p;
    return s;
}

QdSystem::QdSystem(FiniteGroup g, Lattice lat)
    : group(std::move(g)), lattice(std::move(lat)), registry(lattice) {
    if (lattice.boundary == Boundary::RoughSmooth && group.order != 2)
        throw ValidationError("rough-smooth boundaries are defined for the two-element group only");
    std::vector<int> dims(registry.total_sites(), group.order);
    layout = std::make_shared<SiteLayout>(std::move(dims));
}

std::vector<int> QdSystem::left_mul_perm(int h) const {
    std::vector<int> p(group.order);
    for (int g = 0; g < group.order; ++g) p[g] = group.mul(h, g);
    return p;
}

std::vector<int> QdSystem::right_mul_perm(int h) const {
    std::vector<int> p(group.order);
    for (int g = 0; g < group.order; ++g) p[g] = group.mul(g, h);
    return p;
}

SparseState QdSystem::initial_state() const {
    return SparseState::product_state(layout, std::vector<int>(layout->site_count(), 0));
}

Mat QdSystem::fourier_basis() const {
    const int n = group.order;
    Mat b(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int v = 0; v < n; ++v)
            b.at(k, v) = s * std::exp(cplx(0.0, 2.0 * std::numbers::pi * k * v / n));
    return b;
}

std::pair<int, bool> QdSystem::edge_between(int u, int w) const {
    for (int e = 0; e < static_cast<int>(lattice.edges.size()); ++e) {
        if (lattice.edges[e].src == u && lattice.edges[e].dst == w) return {e, true};
        if (lattice.edges[e].src == w && lattice.edges[e].dst == u) return {e, false};
    }
    throw ValidationError("vertices are not adjacent");
}

void QdSystem::require_site_zero(const SparseState& state, int site, const std::string& who) const {
    for (const auto& [k, a] : state.amps)
        if (layout->get(k, site) != 0)
            throw ProtocolError(who + ": ancilla is not in |e>");
}

// ---- gauge structure ------------------------------------------------------

std::vector<PrimAction> gauge_actions(const QdSystem& sys, int v, int g) {
    std::vector<PrimAction> acts;
    if (g == 0) return acts;
    for (const auto& [e, dir] : sys.lattice.vertex_star(v)) {
        if (dir == EdgeDir::Outgoing)
            acts.push_back(PermAction{sys.edge_site(e), sys.left_mul_perm(g)});
        else
            acts.push_back(PermAction{sys.edge_site(e), sys.right_mul_perm(sys.group.inv(g))});
    }
    return acts;
}

void gauge_transform(SparseState& state, const QdSystem& sys, int v, int g) {
    for (const auto& act : gauge_actions(sys, v, g))
        state.apply_perm(std::get<PermAction>(act).site, std::get<PermAction>(act).perm);
}

SparseOperator vertex_projector(const QdSystem& sys, int v) {
    SparseOperator op;
    const double w = 1.0 / sys.group.order;
    for (int g = 0; g < sys.group.order; ++g) op.push_back({cplx(w, 0.0), gauge_actions(sys, v, g)});
    return op;
}

double vertex_projector_expectation(const SparseState& state, const QdSystem& sys, int v) {
    return state.operator_expectation(vertex_projector(sys, v)).real();
}

int flux_of_key(const QdSystem& sys, Key k, int f, int base_vertex) {
    const auto& lat = sys.lattice;
    std::vector<std::pair<int, int>> cycle;
    if (base_vertex < 0 || !lat.is_interior_face(f) || base_vertex == lat.faces[f].base_vertex)
        cycle = lat.face_cycle(f);
    else
        cycle = lat.face_cycle_from(f, base_vertex);
    int acc = 0;
    for (const auto& [e, sign] : cycle) {
        const int val = sys.layout->get(k, sys.edge_site(e));
        const int term = sign > 0 ? sys.group.inv(val) : val;
        acc = sys.group.mul(term, acc);
    }
    return acc;
}

std::vector<double> flux_distribution(const SparseState& state, const QdSystem& sys, int f, int base_vertex) {
    std::vector<double> p(sys.group.order, 0.0);
    for (const auto& [k, a] : state.amps) p[flux_of_key(sys, k, f, base_vertex)] += std::norm(a);
    return p;
}

double flux_projector_expectation(const SparseState& state, const QdSystem& sys, int f, int element) {
    return flux_distribution(state, sys, f)[element];
}

// ---- ground state ---------------------------------------------------------

void apply_controlled_gauge(SparseState& state, const QdSystem& sys, int v) {
    std::vector<std::vector<PrimAction>> family(sys.group.order);
    for (int h = 0; h < sys.group.order; ++h) family[h] = gauge_actions(sys, v, h);
    state.apply_controlled(sys.vertex_ancilla(v), family);
}

namespace {

/// Controlled gauge transform at v conditioned on an arbitrary ancilla site.
void apply_gauge_controlled_on(SparseState& state, const QdSystem& sys, int control_site, int v, bool inverse) {
    std::vector<std::vector<PrimAction>> family(sys.group.order);
    for (int h = 0; h < sys.group.order; ++h)
        family[h] = gauge_actions(sys, v, inverse ? sys.group.inv(h) : h);
    state.apply_controlled(control_site, family);
}

Mat fourier_gate(const QdSystem& sys) {
    // Columns are the tilde states: F|j> = |~j>.
    const int n = sys.group.order;
    Mat f(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            f.at(k, j) = s * std::exp(cplx(0.0, 2.0 * std::numbers::pi * k * j / n));
    return f;
}

std::vector<cplx> root_phases(int n, int power) {
    // diag(w^{k*power}) with w the primitive n-th root.
    std::vector<cplx> ph(n);
    for (int k = 0; k < n; ++k)
        ph[k] = std::exp(cplx(0.0, 2.0 * std::numbers::pi * k * power / n));
    return ph;
}

int pick_outcome(const std::vector<double>& probs, RunContext& ctx) {
    const int forced = ctx.take_forced();
    if (forced >= 0) return forced;
    if (ctx.mode == MeasureMode::Sample) {
        const double u = uniform_unit(ctx.rng);
        double acc = 0.0;
        for (size_t k = 0; k < probs.size(); ++k) {
            acc += probs[k];
            if (u < acc) return static_cast<int>(k);
        }
        return static_cast<int>(probs.size()) - 1;
    }
    int best = 0;
    for (size_t k = 1; k < probs.size(); ++k)
        if (probs[k] > probs[best] + 1e-15) best = static_cast<int>(k);
    return best;
}

/// Unitary sending |e> to the uniform superposition over the class members.
Mat class_prep_gate(const QdSystem& sys, int cls) {
    const auto& members = sys.group.classes[cls];
    const int n = sys.group.order;
    std::vector<cplx> c0(n, 0.0);
    const double s = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (int m : members) c0[m] = s;
    const auto rows = complete_orthonormal_basis({c0}, n);
    Mat u(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) u.at(i, k) = rows[k][i];
    return u;
}

/// Measurement basis for the class register: the class DFT vectors followed
/// by the computational states outside the class.
Mat class_measurement_basis(const QdSystem& sys, int cls) {
    const auto& members = sys.group.classes[cls];
    const int n = sys.group.order;
    const int L = static_cast<int>(members.size());
    Mat b(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(L));
    for (int k = 0; k < L; ++k)
        for (int m = 0; m < L; ++m)
            b.at(k, members[m]) = s * std::exp(cplx(0.0, 2.0 * std::numbers::pi * k * m / L));
    int row = L;
    for (int g = 0; g < n; ++g)
        if (sys.group.class_of[g] != cls) b.at(row++, g) = 1.0;
    return b;
}

/// diag over the class: phases w_L^{power*m} on member m, 1 elsewhere.
std::vector<cplx> class_phase(const QdSystem& sys, int cls, int power) {
    const auto& members = sys.group.classes[cls];
    const int L = static_cast<int>(members.size());
    std::vector<cplx> ph(sys.group.order, cplx(1.0, 0.0));
    for (int m = 0; m < L; ++m)
        ph[members[m]] = std::exp(cplx(0.0, 2.0 * std::numbers::pi * power * m / L));
    return ph;
}

/// The edge action that clears a flux read into an ancilla: conditioned on
/// flux value m, act on the shared edge s so the flux at f (based at w)
/// becomes trivial. Valid when s is the first or last edge of the rebased
/// walk, i.e. when w is an endpoint of s.
std::vector<std::vector<PrimAction>> flux_clearing_family(const QdSystem& sys, int f, int w, int s, int control_anc,
                                                          bool inverse) {
    const auto cyc = sys.lattice.face_cycle_from(f, w);
    const int last = static_cast<int>(cyc.size()) - 1;
    int pos = -1;
    for (int i = 0; i <= last; ++i)
        if (cyc[i].first == s) pos = i;
    if (pos != 0 && pos != last)
        throw ValidationError("shared edge is not incident on the flux base vertex");
    const int sign = cyc[pos].second;
    std::vector<std::vector<PrimAction>> family(sys.group.order);
    for (int m = 0; m < sys.group.order; ++m) {
        int a;
        bool left;
        if (pos == last && sign > 0) {
            a = m;
            left = false;
        } else if (pos == last && sign < 0) {
            a = sys.group.inv(m);
            left = true;
        } else if (pos == 0 && sign > 0) {
            a = m;
            left = true;
        } else {
            a = sys.group.inv(m);
            left = false;
        }
        if (inverse) a = sys.group.inv(a);
        family[m] = {PermAction{sys.edge_site(s), left ? sys.left_mul_perm(a) : sys.right_mul_perm(a)}};
    }
    (void)control_anc;
    return family;
}

/// The face whose rebased walk at w starts with the shared edge against its
/// orientation; its flux based at w is the representative written by a right
/// multiplication on s.
int representative_face(const QdSystem& sys, int f1, int f2, int w, int s) {
    for (int f : {f1, f2}) {
        const auto cyc = sys.lattice.face_cycle_from(f, w);
        if (cyc.front().first == s && cyc.front().second < 0) return f;
    }
    throw ValidationError("no representative face for the shared edge");
}

}  // namespace

MeasurementOutcome measure_vertex(SparseState& state, const QdSystem& sys, int v, RunContext& ctx) {
    const int anc = sys.vertex_ancilla(v);
    {
        // The ancilla must be exactly |~0>: rotating by the inverse Fourier
        // gate must leave it in |0> across the whole superposition.
        SparseState probe = state;
        probe.apply_site_unitary(anc, fourier_gate(sys).dagger());
        sys.require_site_zero(probe, anc, "measure_vertex");
    }
    apply_controlled_gauge(state, sys, v);
    const Mat basis = sys.fourier_basis();
    const auto probs = state.measurement_distribution(anc, basis);
    const int k = pick_outcome(probs, ctx);
    const auto out = state.measure(anc, basis, MeasureMode::Branch, nullptr, k);
    ctx.record("measure-vertex", "v=" + std::to_string(v), out.outcome, out.probability);
    // Park the ancilla back in |e> so it can be reused.
    if (out.outcome != 0) state.apply_diag(anc, root_phases(sys.d(), -out.outcome));
    state.apply_site_unitary(anc, fourier_gate(sys).dagger());
    return out;
}

SparseState prepare_ground_state(const QdSystem& sys, CorrectionPolicy policy, RunContext& ctx) {
    if (sys.lattice.boundary != Boundary::OpenSquare)
        throw ValidationError("ground-state preparation runs on the open square lattice");
    const int n = sys.lattice.rows, m = sys.lattice.cols;
    SparseState state = sys.initial_state();
    const Mat fourier = fourier_gate(sys);

    auto handle_vertex = [&](int i, int j, int correction_edge) {
        const int v = sys.lattice.vertex_id(i, j);
        const int anc = sys.vertex_ancilla(v);
        state.apply_site_unitary(anc, fourier);  // |e> -> |~0>
        if (policy == CorrectionPolicy::Postselect) ctx.forced_outcome = 0;
        const auto out = measure_vertex(state, sys, v, ctx);
        if (out.outcome != 0 && policy == CorrectionPolicy::PaperCorrection) {
            state.apply_diag(sys.edge_site(correction_edge), root_phases(sys.d(), out.outcome));
            ctx.record("correction", "Z^" + std::to_string(out.outcome) + " on " +
                                         sys.lattice.edge_label(correction_edge));
            const double av = vertex_projector_expectation(state, sys, v);
            if (std::abs(av - 1.0) > 1e-10) {
                ctx.record("correction-diagnostic", "post-correction <A> = " + format_g12(av) + " at v=" +
                                                        std::to_string(v));
                throw ProtocolError("correction failed to restore <A(v)> = 1 at vertex " + std::to_string(v));
            }
        }
    };

    for (int j = 0; j < m - 1; ++j)
        for (int i = 0; i < n; ++i) handle_vertex(i, j, sys.lattice.horizontal_edge(i, j));
    for (int i = 0; i < n - 1; ++i) handle_vertex(i, m - 1, sys.lattice.vertical_edge(i, m - 1));
    ctx.record("prepare-ground-state",
               policy == CorrectionPolicy::Postselect ? "postselect" : "paper-correction");
    return state;
}

SparseState ground_state_oracle(const QdSystem& sys) {
    const int v_count = sys.lattice.vertex_count();
    double support = 1.0;
    for (int i = 0; i + 1 < v_count; ++i) support *= sys.group.order;
    if (support > (1 << 21)) throw ValidationError("lattice too large for the direct projection oracle");
    SparseState state = sys.initial_state();
    for (int v = 0; v < v_count; ++v) state.apply_operator(vertex_projector(sys, v));
    return state;
}

StabilizerTable stabilizer_table(const SparseState& state, const QdSystem& sys) {
    StabilizerTable t;
    for (int v = 0; v < sys.lattice.vertex_count(); ++v) {
        const auto [i, j] = sys.lattice.vertex_coords(v);
        t.vertex_terms.push_back({"A(" + std::to_string(i) + "," + std::to_string(j) + ")",
                                  vertex_projector_expectation(state, sys, v)});
    }
    for (int f = 0; f < static_cast<int>(sys.lattice.faces.size()); ++f)
        t.face_terms.push_back({"B" + sys.lattice.face_label(f), flux_projector_expectation(state, sys, f)});
    return t;
}

bool StabilizerTable::all_one(double tol) const {
    for (const auto& [l, x] : vertex_terms)
        if (std::abs(x - 1.0) > tol) return false;
    for (const auto& [l, x] : face_terms)
        if (std::abs(x - 1.0) > tol) return false;
    return true;
}

// ---- magnetic charges ------------------------------------------------------

void flux_to_ancilla(SparseState& state, const QdSystem& sys, int w, int f) {
    const int anc = sys.face_ancilla(f);
    for (const auto& [e, sign] : sys.lattice.face_cycle_from(f, w)) {
        std::vector<std::vector<PrimAction>> family(sys.group.order);
        for (int g = 0; g < sys.group.order; ++g) {
            const int term = sign > 0 ? sys.group.inv(g) : g;
            family[g] = {PermAction{anc, sys.left_mul_perm(term)}};
        }
        state.apply_controlled(sys.edge_site(e), family);
    }
}

void flux_to_ancilla_inverse(SparseState& state, const QdSystem& sys, int w, int f) {
    const int anc = sys.face_ancilla(f);
    const auto cyc = sys.lattice.face_cycle_from(f, w);
    for (auto it = cyc.rbegin(); it != cyc.rend(); ++it) {
        std::vector<std::vector<PrimAction>> family(sys.group.order);
        for (int g = 0; g < sys.group.order; ++g) {
            const int term = it->second > 0 ? g : sys.group.inv(g);
            family[g] = {PermAction{anc, sys.left_mul_perm(term)}};
        }
        state.apply_controlled(sys.edge_site(it->first), family);
    }
}

void create_magnetic_vacuum_pair(SparseState& state, const QdSystem& sys, int cls, int f1, int f2,
                                 RunContext& ctx) {
    if (cls <= 0 || cls >= static_cast<int>(sys.group.classes.size()))
        throw ValidationError("magnetic pair class must be a nontrivial conjugacy class");
    const int s = sys.lattice.shared_edge(f1, f2);
    const int w = sys.lattice.edges[s].dst;
    const int anc = sys.face_ancilla(f1);
    sys.require_site_zero(state, anc, "create_magnetic_vacuum_pair");

    const Mat prep = class_prep_gate(sys, cls);
    state.apply_site_unitary(anc, prep);

    // Controlled right multiplication on the shared edge by the class member
    // held in the ancilla.
    std::vector<std::vector<PrimAction>> family(sys.group.order);
    for (int g = 0; g < sys.group.order; ++g)
        if (sys.group.class_of[g] == cls)
            family[g] = {PermAction{sys.edge_site(s), sys.right_mul_perm(g)}};
    state.apply_controlled(anc, family);

    const Mat basis = class_measurement_basis(sys, cls);
    const auto probs = state.measurement_distribution(anc, basis);
    const int k = pick_outcome(probs, ctx);
    const auto out = state.measure(anc, basis, MeasureMode::Branch, nullptr, k);
    ctx.record("create-magnetic-pair",
               "[" + sys.group.element_names[sys.group.classes[cls][0]] + "] at " + sys.lattice.face_label(f1) +
                   "," + sys.lattice.face_label(f2),
               out.outcome, out.probability);

    // Return the ancilla to |e>.
    if (out.outcome != 0) state.apply_diag(anc, class_phase(sys, cls, -out.outcome));
    state.apply_site_unitary(anc, prep.dagger());

    if (out.outcome != 0) {
        // Undo the residual class phases: read the representative flux and
        // rotate it back.
        const int fr = representative_face(sys, f1, f2, w, s);
        const int anc_r = sys.face_ancilla(fr);
        sys.require_site_zero(state, anc_r, "create_magnetic_vacuum_pair correction");
        flux_to_ancilla(state, sys, w, fr);
        state.apply_diag(anc_r, class_phase(sys, cls, out.outcome));
        flux_to_ancilla_inverse(state, sys, w, fr);
        ctx.record("create-magnetic-correction", "phase unwinding via " + sys.lattice.face_label(fr));
    }
    sys.require_site_zero(state, anc, "create_magnetic_vacuum_pair exit");

    const std::string cname = "[" + sys.group.element_names[sys.group.classes[cls][0]] + "]";
    ctx.anyons.push_back({AnyonRecord::Kind::Magnetic, cname, {f1, f2}, true});
}

void transport_magnetic(SparseState& state, const QdSystem& sys, int f, int f2) {
    const int s = sys.lattice.shared_edge(f, f2);
    const int w = sys.lattice.edges[s].dst;
    const int anc_f = sys.face_ancilla(f);
    const int anc_f2 = sys.face_ancilla(f2);
    sys.require_site_zero(state, anc_f, "transport_magnetic");
    sys.require_site_zero(state, anc_f2, "transport_magnetic");
    {
        const auto p = flux_distribution(state, sys, f2, w);
        if (std::abs(p[0] - 1.0) > 1e-10) throw ProtocolError("transport target face is occupied");
    }

    flux_to_ancilla(state, sys, w, f);
    state.apply_controlled(anc_f, flux_clearing_family(sys, f, w, s, anc_f, false));
    flux_to_ancilla(state, sys, w, f2);
    {
        // The new flux at f2 equals the value held by the f ancilla; clear it.
        std::vector<std::vector<PrimAction>> family(sys.group.order);
        for (int g = 0; g < sys.group.order; ++g)
            family[g] = {PermAction{anc_f, sys.left_mul_perm(sys.group.inv(g))}};
        state.apply_controlled(anc_f2, family);
    }
    flux_to_ancilla_inverse(state, sys, w, f2);

    sys.require_site_zero(state, anc_f, "transport_magnetic exit");
    sys.require_site_zero(state, anc_f2, "transport_magnetic exit");
}

FusionDistribution fuse_magnetic(SparseState& state, const QdSystem& sys, int f1, int f2, int cls,
                                 RunContext& ctx) {
    if (cls <= 0 || cls >= static_cast<int>(sys.group.classes.size()))
        throw ValidationError("magnetic fusion class must be a nontrivial conjugacy class");
    const int s = sys.lattice.shared_edge(f1, f2);
    const int w = sys.lattice.edges[s].dst;
    const int fr = representative_face(sys, f1, f2, w, s);
    const int anc = sys.face_ancilla(fr);
    sys.require_site_zero(state, anc, "fuse_magnetic");

    flux_to_ancilla(state, sys, w, fr);
    state.apply_controlled(anc, flux_clearing_family(sys, fr, w, s, anc, false));

    const Mat basis = class_measurement_basis(sys, cls);
    const auto probs = state.measurement_distribution(anc, basis);
    const int L = static_cast<int>(sys.group.classes[cls].size());

    FusionDistribution dist;
    {
        int stray_index = 0;
        for (int g = 0; g < sys.group.order; ++g)
            if (sys.group.class_of[g] != cls) {
                if (probs[L + stray_index] > 1e-12)
                    dist.channels.push_back({"stray:" + sys.group.element_names[g], probs[L + stray_index]});
                ++stray_index;
            }
        for (int k = L - 1; k >= 1; --k) dist.channels.insert(dist.channels.begin(), {"k=" + std::to_string(k), probs[k]});
        dist.channels.insert(dist.channels.begin(), {"vacuum", probs[0]});
    }

    const int k = pick_outcome(probs, ctx);
    if (k >= L) throw ProtocolError("measured flux lies outside the declared class");
    const auto out = state.measure(anc, basis, MeasureMode::Branch, nullptr, k);
    ctx.record("fuse-magnetic", sys.lattice.face_label(f1) + "," + sys.lattice.face_label(f2), out.outcome,
               out.probability);

    // The pair is annihilated; return the class register to |e>.
    if (out.outcome != 0) state.apply_diag(anc, class_phase(sys, cls, -out.outcome));
    state.apply_site_unitary(anc, class_prep_gate(sys, cls).dagger());
    sys.require_site_zero(state, anc, "fuse_magnetic exit");

    for (auto& rec : ctx.anyons)
        if (rec.kind == AnyonRecord::Kind::Magnetic && rec.active &&
            ((rec.sites[0] == f1 && rec.sites[1] == f2) || (rec.sites[0] == f2 && rec.sites[1] == f1)))
            rec.active = false;
    return dist;
}

// ---- electric charges ------------------------------------------------------

void conditional_rotation_K(SparseState& state, const QdSystem& sys, int v, int e, bool inverse) {
    const auto& edge = sys.lattice.edges[e];
    if (edge.src != v && edge.dst != v) throw ValidationError("edge is not incident on the vertex");
    const bool outgoing = edge.src == v;
    const int anc = sys.vertex_ancilla(v);
    std::vector<std::vector<PrimAction>> family(sys.group.order);
    for (int g = 0; g < sys.group.order; ++g) {
        int x = outgoing ? g : sys.group.inv(g);
        if (inverse) x = sys.group.inv(x);
        family[g] = {PermAction{anc, sys.right_mul_perm(x)}};
    }
    state.apply_controlled(sys.edge_site(e), family);
}

namespace {

void path_accumulate(SparseState& state, const QdSystem& sys, const std::vector<int>& path, bool inverse) {
    // Right-multiplies the start vertex ancilla by the oriented edge values
    // along the path, so it ends holding the path-ordered product.
    const int anc = sys.vertex_ancilla(path.front());
    std::vector<std::pair<int, bool>> hops;
    for (size_t i = 0; i + 1 < path.size(); ++i) hops.push_back(sys.edge_between(path[i], path[i + 1]));
    if (inverse) std::reverse(hops.begin(), hops.end());
    for (const auto& [e, forward] : hops) {
        std::vector<std::vector<PrimAction>> family(sys.group.order);
        for (int g = 0; g < sys.group.order; ++g) {
            int x = forward ? g : sys.group.inv(g);
            if (inverse) x = sys.group.inv(x);
            family[g] = {PermAction{anc, sys.right_mul_perm(x)}};
        }
        state.apply_controlled(sys.edge_site(e), family);
    }
}

void validate_path(const QdSystem& sys, const std::vector<int>& path) {
    if (path.size() < 2) throw ValidationError("vertex path needs at least two vertices");
    for (size_t i = 0; i + 1 < path.size(); ++i) sys.edge_between(path[i], path[i + 1]);
}

/// Character measurement basis: one row per irrep (|R> = sum_g chi_R(g)|g> /
/// sqrt|G|), completed deterministically.
Mat character_basis(const QdSystem& sys) {
    const int n = sys.group.order;
    std::vector<std::vector<cplx>> rows;
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (const auto& irr : sys.group.irreps) {
        std::vector<cplx> r(n);
        for (int g = 0; g < n; ++g) r[g] = s * irr.character(g);
        rows.push_back(std::move(r));
    }
    const auto full = complete_orthonormal_basis(rows, n);
    Mat b(n, n);
    for (int k = 0; k < n; ++k)
        for (int g = 0; g < n; ++g) b.at(k, g) = full[k][g];
    return b;
}

}  // namespace

double create_electric_vacuum_pair(SparseState& state, const QdSystem& sys, const std::string& irrep,
                                   const std::vector<int>& path, RunContext& ctx) {
    validate_path(sys, path);
    const Irrep& irr = sys.group.irrep(irrep);
    const int anc = sys.vertex_ancilla(path.front());
    sys.require_site_zero(state, anc, "create_electric_vacuum_pair");

    path_accumulate(state, sys, path, false);
    // Character weight on the accumulated group element.
    Mat w(sys.d(), sys.d());
    bool unitary = true;
    for (int g = 0; g < sys.d(); ++g) {
        w.at(g, g) = irr.character(g);
        if (std::abs(std::abs(w.at(g, g)) - 1.0) > 1e-12) unitary = false;
    }
    double survival = 1.0;
    if (unitary)
        state.apply_site_unitary(anc, w);
    else
        survival = state.apply_site_linear(anc, w);
    path_accumulate(state, sys, path, true);
    sys.require_site_zero(state, anc, "create_electric_vacuum_pair exit");

    ctx.record("create-electric-pair",
               irrep + " at v" + std::to_string(path.front()) + "..v" + std::to_string(path.back()), -1, survival);
    ctx.anyons.push_back({AnyonRecord::Kind::Electric, irrep, {path.front(), path.back()}, true});
    return survival;
}

FusionDistribution fuse_electric(SparseState& state, const QdSystem& sys, const std::vector<int>& path,
                                 RunContext& ctx) {
    validate_path(sys, path);
    const int v0 = path.front();
    const int vL = path.back();
    const int anc = sys.vertex_ancilla(v0);
    sys.require_site_zero(state, anc, "fuse_electric");

    path_accumulate(state, sys, path, false);
    apply_gauge_controlled_on(state, sys, anc, vL, false);

    const Mat basis = character_basis(sys);
    const auto probs = state.measurement_distribution(anc, basis);

    FusionDistribution dist;
    for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
        std::string label = k < static_cast<int>(sys.group.irreps.size())
                                ? sys.group.irreps[k].label
                                : "aux" + std::to_string(k - static_cast<int>(sys.group.irreps.size()));
        dist.channels.push_back({label, probs[k]});
    }

    const int k = pick_outcome(probs, ctx);
    const auto out = state.measure(anc, basis, MeasureMode::Branch, nullptr, k);
    ctx.record("fuse-electric", "v" + std::to_string(v0) + "..v" + std::to_string(vL), out.outcome,
               out.probability);

    // Uncompute: the post-state becomes the renormalized projection of the
    // input onto the measured channel, with the ancilla back in |e>.
    apply_gauge_controlled_on(state, sys, anc, vL, true);
    path_accumulate(state, sys, path, true);
    sys.require_site_zero(state, anc, "fuse_electric exit");

    for (auto& rec : ctx.anyons)
        if (rec.kind == AnyonRecord::Kind::Electric && rec.active &&
            ((rec.sites[0] == v0 && rec.sites[1] == vL) || (rec.sites[0] == vL && rec.sites[1] == v0)))
            rec.active = false;
    return dist;
}

void braid_flux_around_vertex(SparseState& state, const QdSystem& sys, int h, int v, RunContext& ctx) {
    gauge_transform(state, sys, v, h);
    ctx.record("braid-flux", "T_" + sys.group.element_names[h] + " around v" + std::to_string(v));
}

InterferenceResult interference_on_pair(const SparseState& pair_state, const QdSystem& sys, int v, int h,
                                        RunContext& ctx) {
    InterferenceResult res;
    if (h == 0) {
        res.p_plus = 1.0;
        res.p_plus_im = 0.5;
        res.p_minus_im = 0.5;
        res.visibility_re = 1.0;
        res.fusion_probability = 1.0;
        ctx.record("interference", "h=e (trivial control)", 0, 1.0);
        return res;
    }
    const int anc = sys.vertex_ancilla(v);
    const int d = sys.d();
    sys.require_site_zero(pair_state, anc, "interference");

    auto quadrature = [&](bool imaginary) -> std::vector<double> {
        SparseState st = pair_state;
        // |e> -> (|e> + |h>)/sqrt2
        std::vector<cplx> plus(d, 0.0);
        plus[0] = 1.0 / std::sqrt(2.0);
        plus[h] = 1.0 / std::sqrt(2.0);
        auto rows = complete_orthonormal_basis({plus}, d);
        Mat prep(d, d);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i) prep.at(i, k) = rows[k][i];
        st.apply_site_unitary(anc, prep);
        apply_controlled_gauge(st, sys, v);
        // Measure in (|e> +- |h>)/sqrt2 or (|e> -+ i|h>)/sqrt2.
        std::vector<cplx> b0(d, 0.0), b1(d, 0.0);
        const cplx s = imaginary ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
        b0[0] = 1.0 / std::sqrt(2.0);
        b0[h] = s / std::sqrt(2.0);
        b1[0] = 1.0 / std::sqrt(2.0);
        b1[h] = -s / std::sqrt(2.0);
        auto mrows = complete_orthonormal_basis({b0, b1}, d);
        Mat basis(d, d);
        for (int k = 0; k < d; ++k)
            for (int g = 0; g < d; ++g) basis.at(k, g) = mrows[k][g];
        return st.measurement_distribution(anc, basis);
    };

    const auto pre = quadrature(false);
    const auto pim = quadrature(true);
    res.p_plus = pre[0];
    res.p_minus = pre[1];
    res.p_plus_im = pim[0];
    res.p_minus_im = pim[1];
    res.visibility_re = pre[0] - pre[1];
    // With the (|e> + i|h>)/sqrt2 outcome listed first, its excess weight is +Im<T_h>.
    res.visibility_im = pim[0] - pim[1];
    res.fusion_probability = res.visibility_re * res.visibility_re + res.visibility_im * res.visibility_im;
    ctx.record("interference", "h=" + sys.group.element_names[h] + " visibility=" + format_g12(res.visibility_re),
               -1, res.fusion_probability);
    return res;
}

InterferenceResult single_face_interference(const QdSystem& sys, int h, RunContext& ctx) {
    SparseState state = prepare_ground_state(sys, CorrectionPolicy::Postselect, ctx);
    const int v = sys.lattice.vertex_id(0, 0);
    const int v2 = sys.lattice.vertex_id(0, 1);
    InterferenceResult res;
    res.pair_survival = create_electric_vacuum_pair(state, sys, "R2", {v, v2}, ctx);
    const double survival = res.pair_survival;
    res = interference_on_pair(state, sys, v, h, ctx);
    res.pair_survival = survival;
    return res;
}

}  // namespace qd
