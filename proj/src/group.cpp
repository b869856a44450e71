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

#include "qd/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace qd {

std::vector<std::vector<cplx>> complete_orthonormal_basis(std::vector<std::vector<cplx>> rows, int n) {
    auto dot = [n](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
        return s;
    };
    for (int seed = 0; seed < n && static_cast<int>(rows.size()) < n; ++seed) {
        std::vector<cplx> v(n, 0.0);
        v[seed] = 1.0;
        for (const auto& r : rows) {
            const cplx c = dot(r, v);
            for (int i = 0; i < n; ++i) v[i] -= c * r[i];
        }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += std::norm(v[i]);
        if (nrm < 1e-20) continue;
        const double s = 1.0 / std::sqrt(nrm);
        for (int i = 0; i < n; ++i) v[i] *= s;
        rows.push_back(std::move(v));
    }
    if (static_cast<int>(rows.size()) != n) throw ValidationError("basis completion failed");
    return rows;
}

std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

FiniteGroup FiniteGroup::from_permutations(const std::string& name,
                                           const std::vector<std::vector<int>>& perms,
                                           const std::vector<std::string>& names) {
    FiniteGroup g;
    g.name = name;
    g.order = static_cast<int>(perms.size());
    g.element_names = names;
    g.mul_table.assign(static_cast<size_t>(g.order) * g.order, -1);

    auto find = [&](const std::vector<int>& p) {
        for (int i = 0; i < g.order; ++i)
            if (perms[i] == p) return i;
        throw ValidationError(name + ": product leaves the element set");
    };

    const int npts = static_cast<int>(perms[0].size());
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b) {
            std::vector<int> comp(npts);
            for (int x = 0; x < npts; ++x) comp[x] = perms[a][perms[b][x]];
            g.mul_table[static_cast<size_t>(a) * g.order + b] = find(comp);
        }

    g.inv_table.assign(g.order, -1);
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b)
            if (g.mul_table[static_cast<size_t>(a) * g.order + b] == 0) g.inv_table[a] = b;

    // Conjugacy classes, ordered by their smallest member.
    g.class_of.assign(g.order, -1);
    for (int a = 0; a < g.order; ++a) {
        if (g.class_of[a] >= 0) continue;
        std::vector<int> members;
        for (int h = 0; h < g.order; ++h) {
            const int c = g.mul_table[static_cast<size_t>(g.mul_table[static_cast<size_t>(h) * g.order + a]) * g.order +
                                      g.inv_table[h]];
            if (std::find(members.begin(), members.end(), c) == members.end()) members.push_back(c);
        }
        std::sort(members.begin(), members.end());
        const int ci = static_cast<int>(g.classes.size());
        for (int m : members) g.class_of[m] = ci;
        g.classes.push_back(std::move(members));
    }
    return g;
}

FiniteGroup FiniteGroup::z2() {
    FiniteGroup g = from_permutations("z2", {{0, 1}, {1, 0}}, {"e", "g1"});

    Irrep triv{"R1+", 1, {Mat::identity(1), Mat::identity(1)}};
    Irrep sign{"R1-", 1, {Mat::identity(1), Mat::identity(1)}};
    sign.matrices[1].at(0, 0) = -1.0;
    g.irreps = {triv, sign};
    return g;
}

FiniteGroup FiniteGroup::s3() {
    // Permutations of {0,1,2}: c+ maps 0->1->2->0, t_k fixes point k.
    const std::vector<std::vector<int>> perms = {
        {0, 1, 2},  // e
        {1, 2, 0},  // c+
        {2, 0, 1},  // c-
        {0, 2, 1},  // t0
        {2, 1, 0},  // t1
        {1, 0, 2},  // t2
    };
    FiniteGroup g = from_permutations("s3", perms, {"e", "c+", "c-", "t0", "t1", "t2"});

    Irrep triv{"R1+", 1, {}};
    triv.matrices.assign(6, Mat::identity(1));

    Irrep sign{"R1-", 1, {}};
    sign.matrices.assign(6, Mat::identity(1));
    for (int t = 3; t < 6; ++t) sign.matrices[t].at(0, 0) = -1.0;

    // Two-dimensional irrep: R2(c_rho) = exp(i rho 2pi/3 sz),
    // R2(t_k) = sx exp(i 2pi k/3 sz).
    const cplx w = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 3.0));
    Irrep two{"R2", 2, {}};
    two.matrices.assign(6, Mat(2, 2));
    two.matrices[0] = Mat::identity(2);
    two.matrices[1].at(0, 0) = w;
    two.matrices[1].at(1, 1) = std::conj(w);
    two.matrices[2].at(0, 0) = std::conj(w);
    two.matrices[2].at(1, 1) = w;
    for (int k = 0; k < 3; ++k) {
        Mat m(2, 2);
        m.at(0, 1) = std::pow(std::conj(w), k);
        m.at(1, 0) = std::pow(w, k);
        two.matrices[3 + k] = m;
    }
    g.irreps = {triv, sign, two};
    return g;
}

FiniteGroup FiniteGroup::by_name(const std::string& name) {
    if (name == "z2") return z2();
    if (name == "s3") return s3();
    throw ValidationError("unknown group '" + name + "' (expected z2 or s3)");
}

const Irrep& FiniteGroup::irrep(const std::string& label) const {
    for (const auto& r : irreps)
        if (r.label == label) return r;
    throw ValidationError(name + ": unknown irrep label '" + label + "'");
}

cplx FiniteGroup::projector_coefficient(const std::string& label, int mu, int nu, int g) const {
    const Irrep& r = irrep(label);
    check_element(g);
    if (mu < 0 || mu >= r.dim || nu < 0 || nu >= r.dim)
        throw ValidationError(name + ": irrep matrix index out of range");
    return static_cast<double>(r.dim) / order * std::conj(r.matrices[g].at(mu, nu));
}

std::vector<cplx> FiniteGroup::fourier_state(int j) const {
    check_element(j);
    std::vector<cplx> v(order);
    const double s = 1.0 / std::sqrt(static_cast<double>(order));
    for (int k = 0; k < order; ++k)
        v[k] = s * std::exp(cplx(0.0, 2.0 * std::numbers::pi * j * k / order));
    return v;
}

int FiniteGroup::element_by_name(const std::string& n) const {
    for (int i = 0; i < order; ++i)
        if (element_names[i] == n) return i;
    throw ValidationError(name + ": unknown element '" + n + "'");
}

GroupValidationReport FiniteGroup::validate() const {
    GroupValidationReport rep;
    auto fail = [&rep](const std::string& m) { rep.violations.push_back(m); };

    // Group axioms on the multiplication table.
    for (int a = 0; a < order; ++a) {
        if (mul_table[static_cast<size_t>(0) * order + a] != a || mul_table[static_cast<size_t>(a) * order + 0] != a)
            fail("identity is not neutral at element " + std::to_string(a));
        std::vector<bool> seen_row(order, false), seen_col(order, false);
        for (int b = 0; b < order; ++b) {
            seen_row[mul_table[static_cast<size_t>(a) * order + b]] = true;
            seen_col[mul_table[static_cast<size_t>(b) * order + a]] = true;
        }
        for (int b = 0; b < order; ++b)
            if (!seen_row[b] || !seen_col[b]) {
                fail("row/column " + std::to_string(a) + " is not a permutation");
                break;
            }
    }
    for (int a = 0; a < order && rep.ok(); ++a)
        for (int b = 0; b < order; ++b)
            for (int c = 0; c < order; ++c) {
                const int ab_c = mul(mul(a, b), c);
                const int a_bc = mul(a, mul(b, c));
                if (ab_c != a_bc) {
                    fail("associativity violated at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                         std::to_string(c) + ")");
                    b = c = order;
                }
            }
    for (int a = 0; a < order; ++a)
        if (mul(a, inv_table[a]) != 0) fail("inverse table wrong at element " + std::to_string(a));

    // Classes partition the element set; the identity sits alone.
    std::vector<int> cover(order, 0);
    for (const auto& cls : classes)
        for (int m : cls) cover[m]++;
    for (int a = 0; a < order; ++a)
        if (cover[a] != 1) fail("conjugacy classes do not partition at element " + std::to_string(a));
    if (classes.empty() || classes[class_of[0]].size() != 1) fail("identity class is not a singleton");

    // Representation data.
    int dimsq = 0;
    for (const auto& r : irreps) {
        dimsq += r.dim * r.dim;
        for (int g = 0; g < order; ++g)
            if (!r.matrices[g].is_unitary(1e-12)) fail(r.label + ": matrix " + std::to_string(g) + " not unitary");
        for (int g = 0; g < order; ++g)
            for (int h = 0; h < order; ++h) {
                const Mat p = r.matrices[g].mul(r.matrices[h]);
                if (p.max_abs_diff(r.matrices[mul(g, h)]) > 1e-12) {
                    fail(r.label + ": homomorphism violated at (" + std::to_string(g) + "," + std::to_string(h) + ")");
                    g = h = order;
                }
            }
    }
    if (!irreps.empty() && dimsq != order) fail("sum of squared irrep dimensions != group order");
    return rep;
}

}  // namespace qd
