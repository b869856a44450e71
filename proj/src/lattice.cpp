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

#include "qd/lattice.hpp"

#include <algorithm>

namespace qd {

namespace {
std::string coord_label(const char* kind, int i, int j) {
    return std::string(kind) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}
}  // namespace

int Lattice::vertex_id(int i, int j) const {
    if (i < 0 || i >= rows || j < 0 || j >= cols) throw ValidationError("vertex out of range");
    return i * cols + j;
}

int Lattice::horizontal_edge(int i, int j) const {
    if (i < 0 || i >= rows || j < 0 || j >= cols - 1) throw ValidationError("horizontal edge out of range");
    return h_base_ + i * (cols - 1) + j;
}

int Lattice::vertical_edge(int i, int j) const {
    if (i < 0 || i >= rows - 1 || j < 0 || j >= cols) throw ValidationError("vertical edge out of range");
    return v_base_ + i * cols + j;
}

int Lattice::left_half_edge(int i) const {
    if (boundary != Boundary::RoughSmooth) throw ValidationError("half-edges exist only with rough boundaries");
    if (i < 0 || i >= rows) throw ValidationError("half-edge out of range");
    return lh_base_ + i;
}

int Lattice::right_half_edge(int i) const {
    if (boundary != Boundary::RoughSmooth) throw ValidationError("half-edges exist only with rough boundaries");
    if (i < 0 || i >= rows) throw ValidationError("half-edge out of range");
    return rh_base_ + i;
}

int Lattice::face_id(int i, int j) const {
    if (i < 0 || i >= rows - 1 || j < 0 || j >= cols - 1) throw ValidationError("face out of range");
    return i * (cols - 1) + j;
}

int Lattice::rough_left_face(int i) const {
    if (boundary != Boundary::RoughSmooth) throw ValidationError("rough faces exist only with rough boundaries");
    if (i < 0 || i >= rows - 1) throw ValidationError("rough face out of range");
    return rough_left_base_ + i;
}

int Lattice::rough_right_face(int i) const {
    if (boundary != Boundary::RoughSmooth) throw ValidationError("rough faces exist only with rough boundaries");
    if (i < 0 || i >= rows - 1) throw ValidationError("rough face out of range");
    return rough_right_base_ + i;
}

Lattice Lattice::build_square(int n, int m, Boundary boundary) {
    if (n < 2 || m < 2) throw ValidationError("lattice needs at least 2x2 vertices");
    Lattice lat;
    lat.rows = n;
    lat.cols = m;
    lat.boundary = boundary;

    lat.h_base_ = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m - 1; ++j)
            lat.edges.push_back({i * m + j, i * m + j + 1, coord_label("h", i, j)});
    lat.v_base_ = static_cast<int>(lat.edges.size());
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < m; ++j)
            lat.edges.push_back({i * m + j, (i + 1) * m + j, coord_label("v", i, j)});
    if (boundary == Boundary::RoughSmooth) {
        lat.lh_base_ = static_cast<int>(lat.edges.size());
        for (int i = 0; i < n; ++i)
            lat.edges.push_back({-1, i * m, "lh(" + std::to_string(i) + ")"});
        lat.rh_base_ = static_cast<int>(lat.edges.size());
        for (int i = 0; i < n; ++i)
            lat.edges.push_back({i * m + (m - 1), -1, "rh(" + std::to_string(i) + ")"});
    }

    // Interior faces: base at the top-left corner, walk top, right, bottom,
    // left. Signs follow the rightward/downward edge orientations.
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < m - 1; ++j) {
            Face f;
            f.base_vertex = i * m + j;
            f.label = coord_label("f", i, j);
            f.cycle = {
                {lat.h_base_ + i * (m - 1) + j, +1},
                {lat.v_base_ + i * m + j + 1, +1},
                {lat.h_base_ + (i + 1) * (m - 1) + j, -1},
                {lat.v_base_ + i * m + j, -1},
            };
            lat.faces.push_back(std::move(f));
        }
    if (boundary == Boundary::RoughSmooth) {
        lat.rough_left_base_ = static_cast<int>(lat.faces.size());
        for (int i = 0; i < n - 1; ++i) {
            Face f;
            f.base_vertex = -1;
            f.label = "fl(" + std::to_string(i) + ")";
            f.cycle = {{lat.lh_base_ + i, +1}, {lat.v_base_ + i * m, +1}, {lat.lh_base_ + i + 1, -1}};
            lat.faces.push_back(std::move(f));
        }
        lat.rough_right_base_ = static_cast<int>(lat.faces.size());
        for (int i = 0; i < n - 1; ++i) {
            Face f;
            f.base_vertex = -1;
            f.label = "fr(" + std::to_string(i) + ")";
            f.cycle = {{lat.rh_base_ + i, +1}, {lat.rh_base_ + i + 1, -1}, {lat.v_base_ + i * m + (m - 1), -1}};
            lat.faces.push_back(std::move(f));
        }
    }
    return lat;
}

std::vector<std::pair<int, EdgeDir>> Lattice::vertex_star(int v) const {
    if (v < 0 || v >= vertex_count()) throw ValidationError("unknown vertex");
    std::vector<std::pair<int, EdgeDir>> star;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (edges[e].src == v) star.push_back({e, EdgeDir::Outgoing});
        if (edges[e].dst == v) star.push_back({e, EdgeDir::Incoming});
    }
    return star;
}

void Lattice::check_face(int f) const {
    if (f < 0 || f >= static_cast<int>(faces.size())) throw ValidationError("unknown face");
}

const std::vector<std::pair<int, int>>& Lattice::face_cycle(int f) const {
    check_face(f);
    return faces[f].cycle;
}

std::vector<std::pair<int, int>> Lattice::face_cycle_from(int f, int w) const {
    check_face(f);
    if (!is_interior_face(f)) throw ValidationError("rough boundary faces have no rebased cycle");
    const auto& cyc = faces[f].cycle;
    // Walk vertices: position k starts the walk at the vertex the k-th edge
    // leaves (with its sign).
    int start = -1;
    int vtx = faces[f].base_vertex;
    std::vector<int> walk_vertex(cyc.size());
    for (size_t k = 0; k < cyc.size(); ++k) {
        walk_vertex[k] = vtx;
        const Edge& e = edges[cyc[k].first];
        vtx = (cyc[k].second > 0) ? e.dst : e.src;
    }
    for (size_t k = 0; k < cyc.size(); ++k)
        if (walk_vertex[k] == w) start = static_cast<int>(k);
    if (start < 0) throw ValidationError("vertex is not on the face cycle");
    std::vector<std::pair<int, int>> out;
    for (size_t k = 0; k < cyc.size(); ++k) out.push_back(cyc[(start + k) % cyc.size()]);
    return out;
}

int Lattice::shared_edge(int f1, int f2) const {
    check_face(f1);
    check_face(f2);
    int found = -1;
    for (const auto& [e1, s1] : faces[f1].cycle)
        for (const auto& [e2, s2] : faces[f2].cycle)
            if (e1 == e2) {
                if (found >= 0) throw ValidationError("faces share more than one edge");
                found = e1;
            }
    if (found < 0)
        throw ValidationError("faces " + faces[f1].label + " and " + faces[f2].label + " are not adjacent");
    return found;
}

std::pair<std::vector<int>, std::vector<int>> Lattice::logical_paths() const {
    if (boundary != Boundary::RoughSmooth)
        throw ValidationError("logical paths exist only in rough-smooth mode");
    const int i = rows / 2;
    std::vector<int> z_path;
    z_path.push_back(left_half_edge(i));
    for (int j = 0; j < cols - 1; ++j) z_path.push_back(horizontal_edge(i, j));
    z_path.push_back(right_half_edge(i));

    const int j = (cols - 1) / 2;
    std::vector<int> x_path;
    for (int r = 0; r < rows; ++r) x_path.push_back(horizontal_edge(r, j));
    return {z_path, x_path};
}

}  // namespace qd
