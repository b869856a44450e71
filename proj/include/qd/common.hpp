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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qd {

using cplx = std::complex<double>;

/// Raised when an input (script, CLI options, operator arguments) fails
/// validation before any state is touched.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a protocol cannot continue at runtime (zero-probability
/// branch, annihilated state, ancilla in the wrong state).
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Minimal dense complex matrix. Everything in this project is at most
/// 6x6, so no linear-algebra library is pulled in.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, cplx(0.0, 0.0)) {}

    cplx& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cplx& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    Mat mul(const Mat& o) const {
        if (cols != o.rows) throw ValidationError("matrix dimension mismatch");
        Mat r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const cplx v = at(i, k);
                if (v == cplx(0.0, 0.0)) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }

    Mat dagger() const {
        Mat r(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r.at(j, i) = std::conj(at(i, j));
        return r;
    }

    bool is_unitary(double tol = 1e-12) const {
        if (rows != cols) return false;
        Mat p = dagger().mul(*this);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
                if (std::abs(p.at(i, j) - want) > tol) return false;
            }
        return true;
    }

    double max_abs_diff(const Mat& o) const {
        double m = 0.0;
        for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }
};

/// Gram-Schmidt completion: given k orthonormal rows of length n, extend to a
/// full orthonormal n-vector set using unit seeds in index order. The result
/// is deterministic.
std::vector<std::vector<cplx>> complete_orthonormal_basis(std::vector<std::vector<cplx>> rows, int n);

/// Format a double with 12 significant digits (shared by all emitters).
std::string format_g12(double x);

}  // namespace qd
