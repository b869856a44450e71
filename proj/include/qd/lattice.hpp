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
#include <utility>
#include <vector>

#include "qd/common.hpp"

namespace qd {

enum class Boundary { OpenSquare, RoughSmooth };

/// Oriented edge. Horizontal edges point toward increasing column, vertical
/// edges toward increasing row. Rough half-edges keep the same rightward
/// orientation and use -1 for their virtual endpoint.
struct Edge {
    int src = -1;  // vertex id, or -1 for the virtual terminal of a left half-edge
    int dst = -1;  // vertex id, or -1 for the virtual terminal of a right half-edge
    std::string label;
};

enum class EdgeDir { Outgoing, Incoming };

struct Face {
    int base_vertex = -1;                       // -1 for rough boundary faces
    std::vector<std::pair<int, int>> cycle;     // (edge id, orientation sign) from the base
    std::string label;
};

/// Two-complex for an n x m vertex grid. Open-square mode has no dangling
/// edges; rough-smooth mode adds one half-edge per row on the left and right
/// (rough) boundaries, which creates 3-edge boundary faces there, and leaves
/// the top/bottom (smooth) boundaries with 3-edge vertex stars.
class Lattice {
  public:
    int rows = 0;
    int cols = 0;
    Boundary boundary = Boundary::OpenSquare;
    std::vector<Edge> edges;
    std::vector<Face> faces;

    static Lattice build_square(int n, int m, Boundary boundary);

    int vertex_count() const { return rows * cols; }
    int vertex_id(int i, int j) const;
    std::pair<int, int> vertex_coords(int v) const { return {v / cols, v % cols}; }

    int horizontal_edge(int i, int j) const;  // (i,j) -> (i,j+1)
    int vertical_edge(int i, int j) const;    // (i,j) -> (i+1,j)
    int left_half_edge(int i) const;          // rough-smooth only
    int right_half_edge(int i) const;         // rough-smooth only

    /// Interior face with top-left corner (i,j).
    int face_id(int i, int j) const;
    int rough_left_face(int i) const;   // between rows i and i+1, left side
    int rough_right_face(int i) const;
    int interior_face_count() const { return (rows - 1) * (cols - 1); }

    /// All edges incident on v, tagged by whether v is the source.
    std::vector<std::pair<int, EdgeDir>> vertex_star(int v) const;

    /// Face boundary walk from the face base vertex; sign +1 when the edge
    /// orientation agrees with the walk direction.
    const std::vector<std::pair<int, int>>& face_cycle(int f) const;

    /// Face boundary walk rotated to start at vertex w (w must lie on the
    /// cycle). Interior faces only.
    std::vector<std::pair<int, int>> face_cycle_from(int f, int w) const;

    /// The unique common edge of two adjacent interior faces.
    int shared_edge(int f1, int f2) const;

    /// Logical operator supports in rough-smooth mode: a Z chain joining the
    /// two rough boundaries, and an X chain joining the two smooth ones.
    std::pair<std::vector<int>, std::vector<int>> logical_paths() const;

    bool is_interior_face(int f) const { return faces[f].base_vertex >= 0; }
    std::string edge_label(int e) const { return edges[e].label; }
    std::string face_label(int f) const { return faces[f].label; }

  private:
    int h_base_ = 0, v_base_ = 0, lh_base_ = -1, rh_base_ = -1;
    int rough_left_base_ = -1, rough_right_base_ = -1;
    void check_face(int f) const;
};

/// Flat site numbering: one code qudit per edge, then one ancilla per vertex,
/// then one ancilla per face.
struct SiteRegistry {
    int n_edges = 0;
    int n_vertices = 0;
    int n_faces = 0;

    explicit SiteRegistry(const Lattice& lat)
        : n_edges(static_cast<int>(lat.edges.size())),
          n_vertices(lat.vertex_count()),
          n_faces(static_cast<int>(lat.faces.size())) {}

    int edge_site(int e) const { return e; }
    int vertex_ancilla_site(int v) const { return n_edges + v; }
    int face_ancilla_site(int f) const { return n_edges + n_vertices + f; }
    int total_sites() const { return n_edges + n_vertices + n_faces; }
};

}  // namespace qd
