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

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <random>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qd/common.hpp"

namespace qd {

/// Packed site configuration. 3 bits per d=6 site, 1 bit per d=2 site;
/// 128 bits cover every lattice in scope.
using Key = unsigned __int128;

struct KeyHash {
    size_t operator()(Key k) const noexcept {
        auto mix = [](uint64_t x) {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        };
        return static_cast<size_t>(mix(static_cast<uint64_t>(k)) ^ mix(static_cast<uint64_t>(k >> 64)));
    }
};

/// Site table: per-site dimension and bit offsets into the packed key.
class SiteLayout {
  public:
    explicit SiteLayout(std::vector<int> dims);

    int site_count() const { return static_cast<int>(dims_.size()); }
    int dim(int site) const { return dims_[site]; }
    int total_bits() const { return total_bits_; }

    int get(Key k, int site) const {
        return static_cast<int>((k >> offsets_[site]) & mask_[site]);
    }
    Key set(Key k, int site, int value) const {
        k &= ~(static_cast<Key>(mask_[site]) << offsets_[site]);
        return k | (static_cast<Key>(value) << offsets_[site]);
    }
    Key pack(const std::vector<int>& values) const;
    std::vector<int> unpack(Key k) const;

  private:
    std::vector<int> dims_;
    std::vector<int> offsets_;
    std::vector<uint64_t> mask_;
    int total_bits_ = 0;
};

/// Primitive single-site actions used inside controlled operations and
/// operator sums. Both map one basis configuration to one configuration, so
/// controlled applications stay exact and collision-free.
struct PermAction {
    int site;
    std::vector<int> perm;  // value -> new value
};
struct DiagAction {
    int site;
    std::vector<cplx> phases;  // value -> factor
};
using PrimAction = std::variant<PermAction, DiagAction>;

/// Weighted sum of action sequences: sum_t weight_t * (actions applied left
/// to right). Expresses projectors like averaged gauge transforms.
struct OpTerm {
    cplx weight{1.0, 0.0};
    std::vector<PrimAction> actions;
};
using SparseOperator = std::vector<OpTerm>;

struct MeasurementOutcome {
    int outcome = -1;
    double probability = 0.0;
};

enum class MeasureMode { Sample, Branch };

class SparseState {
  public:
    using Map = std::unordered_map<Key, cplx, KeyHash>;

    std::shared_ptr<const SiteLayout> layout;
    Map amps;
    double prune_epsilon = 1e-12;

    SparseState() = default;
    explicit SparseState(std::shared_ptr<const SiteLayout> lay) : layout(std::move(lay)) {}

    /// Single-configuration state with amplitude 1. The assignment must cover
    /// every site with a value below the site dimension.
    static SparseState product_state(std::shared_ptr<const SiteLayout> layout, const std::vector<int>& assignment);

    int value(Key k, int site) const { return layout->get(k, site); }

    void apply_perm(int site, const std::vector<int>& perm);
    void apply_diag(int site, const std::vector<cplx>& phases);

    /// Group multiplication rewrites of one site's value.
    void apply_left_mul(int site, const std::vector<int>& mul_table, int order, int h);
    void apply_right_mul(int site, const std::vector<int>& mul_table, int order, int h);

    /// General single-site unitary; throws unless U is unitary within 1e-12.
    void apply_site_unitary(int site, const Mat& u);

    /// Single-site linear map with renormalization; returns the squared norm
    /// before renormalization. Throws if the operator annihilates the state.
    double apply_site_linear(int site, const Mat& m);

    /// For each stored configuration, apply the action list selected by the
    /// control site's current value. Branch actions must not touch the
    /// control site.
    void apply_controlled(int control_site, const std::vector<std::vector<PrimAction>>& family);

    /// Apply a weighted operator sum, renormalize, and return the squared
    /// norm before renormalization.
    double apply_operator(const SparseOperator& op);

    /// <psi| Op |psi> without modifying the state.
    cplx operator_expectation(const SparseOperator& op) const;

    /// Outcome probabilities of measuring `site` in the given orthonormal
    /// basis (basis.at(k, v) is component v of outcome vector k).
    std::vector<double> measurement_distribution(int site, const Mat& basis) const;

    /// Projective measurement. Sample mode draws from the seeded generator;
    /// branch mode takes outcome `branch_k` (error if its probability is
    /// below 1e-14). The state collapses in place and stays in the
    /// computational representation.
    MeasurementOutcome measure(int site, const Mat& basis, MeasureMode mode, std::mt19937_64* rng, int branch_k = -1);

    cplx inner_product(const SparseState& other) const;
    double norm_sq() const;
    void normalize();
    void prune();

    size_t support_size() const { return amps.size(); }

    /// One line per configuration: "v0 v1 ... : re : im", sorted by key.
    void dump(std::ostream& os) const;

  private:
    void check_site(int site) const;
    static void apply_actions_to_term(const SiteLayout& lay, Key k, cplx a, const std::vector<PrimAction>& actions,
                                      Key* out_k, cplx* out_a);
};

/// Portable uniform double in [0,1) from a mersenne-twister draw.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qd
