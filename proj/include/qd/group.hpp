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

#include <string>
#include <vector>

#include "qd/common.hpp"

namespace qd {

/// One unitary irreducible representation, stored as explicit per-element
/// matrices. The groups here have order at most 6, so table storage is the
/// simplest correct choice.
struct Irrep {
    std::string label;
    int dim = 1;
    std::vector<Mat> matrices;  // one dim x dim matrix per group element

    cplx character(int g) const {
        cplx t = 0.0;
        for (int i = 0; i < dim; ++i) t += matrices[g].at(i, i);
        return t;
    }
};

struct GroupValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Finite group arithmetic plus representation data.
///
/// Element ordering is frozen: index 0 is always the identity. For S3 the
/// order is e, c+, c-, t0, t1, t2 with c+ the cycle 0->1->2->0 and t_k the
/// transposition fixing point k. Products compose right factor first:
/// (g*h)(x) = g(h(x)).
class FiniteGroup {
  public:
    std::string name;
    int order = 0;
    std::vector<int> mul_table;   // order x order, row-major
    std::vector<int> inv_table;
    std::vector<int> class_of;    // element -> conjugacy class index
    std::vector<std::vector<int>> classes;  // class index -> sorted members
    std::vector<std::string> element_names;
    std::vector<Irrep> irreps;

    static FiniteGroup z2();
    static FiniteGroup s3();
    /// Lookup by CLI name ("z2" or "s3").
    static FiniteGroup by_name(const std::string& name);

    int mul(int g, int h) const {
        check_element(g);
        check_element(h);
        return mul_table[static_cast<size_t>(g) * order + h];
    }

    int inv(int g) const {
        check_element(g);
        return inv_table[g];
    }

    const std::vector<int>& conjugacy_class(int g) const {
        check_element(g);
        return classes[class_of[g]];
    }

    const Irrep& irrep(const std::string& label) const;

    cplx character(const std::string& label, int g) const { return irrep(label).character(g); }

    /// Coefficient of group element g in the representation projector
    /// P^R_{mu,nu} = (|R|/|G|) sum_g conj(R(g)_{mu,nu}) g.
    cplx projector_coefficient(const std::string& label, int mu, int nu, int g) const;

    /// Discrete-Fourier vector over the element ordering,
    /// |~j> = (1/sqrt|G|) sum_k exp(2 pi i j k / |G|) |k>.
    std::vector<cplx> fourier_state(int j) const;

    int element_by_name(const std::string& n) const;

    GroupValidationReport validate() const;

    /// Builds a group from explicit permutations acting on points,
    /// composing as (g*h)(x) = g(h(x)). Irreps are not filled in.
    static FiniteGroup from_permutations(const std::string& name,
                                         const std::vector<std::vector<int>>& perms,
                                         const std::vector<std::string>& names);

  private:
    void check_element(int g) const {
        if (g < 0 || g >= order) throw ValidationError(name + ": element index out of range");
    }
};

}  // namespace qd
