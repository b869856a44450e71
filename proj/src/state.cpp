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

#include "qd/state.hpp"

#include <algorithm>
#include <cmath>

namespace qd {

namespace {
int bits_for(int d) {
    int b = 1;
    while ((1 << b) < d) ++b;
    return b;
}
}  // namespace

SiteLayout::SiteLayout(std::vector<int> dims) : dims_(std::move(dims)) {
    offsets_.reserve(dims_.size());
    mask_.reserve(dims_.size());
    for (int d : dims_) {
        if (d < 2) throw ValidationError("site dimension must be at least 2");
        const int b = bits_for(d);
        offsets_.push_back(total_bits_);
        mask_.push_back((1ULL << b) - 1);
        total_bits_ += b;
    }
    if (total_bits_ > 128) throw ValidationError("site register exceeds 128 packed bits");
}

Key SiteLayout::pack(const std::vector<int>& values) const {
    if (static_cast<int>(values.size()) != site_count())
        throw ValidationError("assignment does not cover all sites");
    Key k = 0;
    for (int s = 0; s < site_count(); ++s) {
        if (values[s] < 0 || values[s] >= dims_[s]) throw ValidationError("site value out of range");
        k = set(k, s, values[s]);
    }
    return k;
}

std::vector<int> SiteLayout::unpack(Key k) const {
    std::vector<int> v(site_count());
    for (int s = 0; s < site_count(); ++s) v[s] = get(k, s);
    return v;
}

SparseState SparseState::product_state(std::shared_ptr<const SiteLayout> layout,
                                       const std::vector<int>& assignment) {
    SparseState st(layout);
    st.amps.emplace(layout->pack(assignment), cplx(1.0, 0.0));
    return st;
}

void SparseState::check_site(int site) const {
    if (site < 0 || site >= layout->site_count()) throw ValidationError("site index out of range");
}

void SparseState::apply_perm(int site, const std::vector<int>& perm) {
    check_site(site);
    const int d = layout->dim(site);
    if (static_cast<int>(perm.size()) != d) throw ValidationError("permutation size mismatch");
    Map out;
    out.reserve(amps.size());
    for (const auto& [k, a] : amps) out.emplace(layout->set(k, site, perm[layout->get(k, site)]), a);
    amps = std::move(out);
}

void SparseState::apply_diag(int site, const std::vector<cplx>& phases) {
    check_site(site);
    if (static_cast<int>(phases.size()) != layout->dim(site)) throw ValidationError("diagonal size mismatch");
    for (auto& [k, a] : amps) a *= phases[layout->get(k, site)];
}

void SparseState::apply_left_mul(int site, const std::vector<int>& mul_table, int order, int h) {
    if (h < 0 || h >= order) throw ValidationError("group element out of range");
    if (layout->dim(site) != order) throw ValidationError("site dimension does not match group order");
    std::vector<int> perm(order);
    for (int g = 0; g < order; ++g) perm[g] = mul_table[static_cast<size_t>(h) * order + g];
    apply_perm(site, perm);
}

void SparseState::apply_right_mul(int site, const std::vector<int>& mul_table, int order, int h) {
    if (h < 0 || h >= order) throw ValidationError("group element out of range");
    if (layout->dim(site) != order) throw ValidationError("site dimension does not match group order");
    std::vector<int> perm(order);
    for (int g = 0; g < order; ++g) perm[g] = mul_table[static_cast<size_t>(g) * order + h];
    apply_perm(site, perm);
}

void SparseState::apply_site_unitary(int site, const Mat& u) {
    check_site(site);
    if (u.rows != layout->dim(site) || u.cols != u.rows) throw ValidationError("unitary has wrong shape");
    if (!u.is_unitary(1e-12)) throw ValidationError("matrix is not unitary within 1e-12");
    apply_site_linear(site, u);
    prune();
}

double SparseState::apply_site_linear(int site, const Mat& m) {
    check_site(site);
    if (m.rows != layout->dim(site) || m.cols != m.rows) throw ValidationError("operator has wrong shape");
    const int d = m.rows;
    Map out;
    out.reserve(amps.size() * 2);
    for (const auto& [k, a] : amps) {
        const int v = layout->get(k, site);
        for (int vp = 0; vp < d; ++vp) {
            const cplx c = m.at(vp, v);
            if (c == cplx(0.0, 0.0)) continue;
            out[layout->set(k, site, vp)] += c * a;
        }
    }
    amps = std::move(out);
    const double w = norm_sq();
    if (w < 1e-24) throw ProtocolError("operator annihilates the state");
    normalize();
    prune();
    return w;
}

void SparseState::apply_actions_to_term(const SiteLayout& lay, Key k, cplx a,
                                        const std::vector<PrimAction>& actions, Key* out_k, cplx* out_a) {
    for (const auto& act : actions) {
        if (const auto* p = std::get_if<PermAction>(&act)) {
            k = lay.set(k, p->site, p->perm[lay.get(k, p->site)]);
        } else {
            const auto& dg = std::get<DiagAction>(act);
            a *= dg.phases[lay.get(k, dg.site)];
        }
    }
    *out_k = k;
    *out_a = a;
}

void SparseState::apply_controlled(int control_site, const std::vector<std::vector<PrimAction>>& family) {
    check_site(control_site);
    if (static_cast<int>(family.size()) != layout->dim(control_site))
        throw ValidationError("controlled family must cover every control value");
    for (const auto& branch : family)
        for (const auto& act : branch) {
            const int target = std::holds_alternative<PermAction>(act) ? std::get<PermAction>(act).site
                                                                       : std::get<DiagAction>(act).site;
            if (target == control_site) throw ValidationError("control site overlaps a branch target");
        }
    Map out;
    out.reserve(amps.size());
    for (const auto& [k, a] : amps) {
        Key nk;
        cplx na;
        apply_actions_to_term(*layout, k, a, family[layout->get(k, control_site)], &nk, &na);
        out[nk] += na;
    }
    amps = std::move(out);
}

double SparseState::apply_operator(const SparseOperator& op) {
    Map out;
    out.reserve(amps.size() * op.size());
    for (const auto& [k, a] : amps)
        for (const auto& term : op) {
            Key nk;
            cplx na;
            apply_actions_to_term(*layout, k, a, term.actions, &nk, &na);
            out[nk] += term.weight * na;
        }
    amps = std::move(out);
    const double w = norm_sq();
    if (w < 1e-24) throw ProtocolError("operator annihilates the state");
    normalize();
    prune();
    return w;
}

cplx SparseState::operator_expectation(const SparseOperator& op) const {
    cplx e = 0.0;
    for (const auto& [k, a] : amps)
        for (const auto& term : op) {
            Key nk;
            cplx na;
            apply_actions_to_term(*layout, k, a, term.actions, &nk, &na);
            auto it = amps.find(nk);
            if (it != amps.end()) e += std::conj(it->second) * term.weight * na;
        }
    return e;
}

std::vector<double> SparseState::measurement_distribution(int site, const Mat& basis) const {
    SparseState copy = *this;
    const int d = layout->dim(site);
    Mat rot(d, d);
    for (int k = 0; k < d; ++k)
        for (int v = 0; v < d; ++v) rot.at(k, v) = std::conj(basis.at(k, v));
    if (!rot.is_unitary(1e-12)) throw ValidationError("measurement basis is not orthonormal within 1e-12");
    copy.apply_site_linear(site, rot);
    std::vector<double> p(d, 0.0);
    for (const auto& [k, a] : copy.amps) p[copy.layout->get(k, site)] += std::norm(a);
    return p;
}

MeasurementOutcome SparseState::measure(int site, const Mat& basis, MeasureMode mode, std::mt19937_64* rng,
                                        int branch_k) {
    check_site(site);
    const int d = layout->dim(site);
    if (basis.rows != d || basis.cols != d) throw ValidationError("measurement basis has wrong shape");
    Mat rot(d, d);
    for (int k = 0; k < d; ++k)
        for (int v = 0; v < d; ++v) rot.at(k, v) = std::conj(basis.at(k, v));
    if (!rot.is_unitary(1e-12)) throw ValidationError("measurement basis is not orthonormal within 1e-12");

    apply_site_linear(site, rot);
    std::vector<double> p(d, 0.0);
    for (const auto& [k, a] : amps) p[layout->get(k, site)] += std::norm(a);

    int outcome = -1;
    if (mode == MeasureMode::Sample) {
        if (rng == nullptr) throw ValidationError("sample mode needs a random generator");
        const double u = uniform_unit(*rng);
        double acc = 0.0;
        for (int k = 0; k < d; ++k) {
            acc += p[k];
            if (u < acc) {
                outcome = k;
                break;
            }
        }
        if (outcome < 0) outcome = d - 1;
    } else {
        if (branch_k < 0 || branch_k >= d) throw ValidationError("branch outcome out of range");
        if (p[branch_k] < 1e-14) throw ProtocolError("selected branch has probability below 1e-14");
        outcome = branch_k;
    }

    Map out;
    out.reserve(amps.size() / std::max<size_t>(1, d));
    for (const auto& [k, a] : amps)
        if (layout->get(k, site) == outcome) out.emplace(k, a);
    amps = std::move(out);
    normalize();
    apply_site_linear(site, rot.dagger());
    return {outcome, p[outcome]};
}

cplx SparseState::inner_product(const SparseState& other) const {
    if (layout->site_count() != other.layout->site_count()) throw ValidationError("site layouts differ");
    for (int s = 0; s < layout->site_count(); ++s)
        if (layout->dim(s) != other.layout->dim(s)) throw ValidationError("site layouts differ");
    const SparseState& small = amps.size() <= other.amps.size() ? *this : other;
    const SparseState& big = amps.size() <= other.amps.size() ? other : *this;
    cplx ip = 0.0;
    for (const auto& [k, a] : small.amps) {
        auto it = big.amps.find(k);
        if (it == big.amps.end()) continue;
        // <this|other> regardless of which map is iterated.
        if (&small == this)
            ip += std::conj(a) * it->second;
        else
            ip += std::conj(it->second) * a;
    }
    return ip;
}

double SparseState::norm_sq() const {
    double n = 0.0;
    for (const auto& [k, a] : amps) n += std::norm(a);
    return n;
}

void SparseState::normalize() {
    const double n = norm_sq();
    if (n < 1e-24) throw ProtocolError("cannot normalize a null state");
    const double s = 1.0 / std::sqrt(n);
    for (auto& [k, a] : amps) a *= s;
}

void SparseState::prune() {
    bool dropped = false;
    for (auto it = amps.begin(); it != amps.end();)
        if (std::abs(it->second) < prune_epsilon) {
            it = amps.erase(it);
            dropped = true;
        } else {
            ++it;
        }
    if (dropped) normalize();
}

void SparseState::dump(std::ostream& os) const {
    std::vector<Key> keys;
    keys.reserve(amps.size());
    for (const auto& [k, a] : amps) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (Key k : keys) {
        const auto vals = layout->unpack(k);
        for (size_t i = 0; i < vals.size(); ++i) os << (i ? " " : "") << vals[i];
        const cplx a = amps.at(k);
        os << " : " << format_g12(a.real()) << " : " << format_g12(a.imag()) << "\n";
    }
}

}  // namespace qd
