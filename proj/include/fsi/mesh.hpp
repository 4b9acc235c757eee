#pragma once

/// \file mesh.hpp
/// Reference triangulation of the rectangle [0,L] x [0,H] with edge
/// classification and the column map onto the shell knots.

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace fsi {

using Vec2 = Eigen::Vector2d;

enum class EdgeClass { Interior, Top, Bottom, Left, Right };

std::string to_string(EdgeClass c);

struct Edge {
    std::array<int, 2> v{};          ///< vertex indices
    std::array<int, 2> cell{-1, -1};  ///< cell[1] == -1 on the boundary
    EdgeClass cls = EdgeClass::Interior;
};

struct Cell {
    std::array<int, 3> v{};  ///< counterclockwise
    std::array<int, 3> e{};  ///< e[i] is the edge opposite v[i]
    int column = 0;          ///< footprint [r_column, r_column+1]
};

struct ReferenceMesh {
    double L = 1.0, H = 1.0;
    double h = 0.0;  ///< maximal triangle diameter
    std::vector<Vec2> vertices;
    std::vector<int> vertex_knot;  ///< knot index i with x = r_i
    std::vector<Cell> cells;
    std::vector<Edge> edges;
    std::vector<double> knots;     ///< r_0 < ... < r_n
    std::vector<int> top_edges;    ///< ordered by column
    std::vector<double> cell_area; ///< |K|
    std::vector<double> edge_length;

    int num_cells() const { return static_cast<int>(cells.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_vertices() const { return static_cast<int>(vertices.size()); }
    /// Local position (0..2) of edge e in cell c.
    int local_edge(int c, int e) const;
};

/// Builds a mesh from vertices and counterclockwise triangles. Every vertex
/// must lie on a vertical line through a top-boundary vertex.
ReferenceMesh mesh_from_triangles(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> tris,
                                  double L, double H);

/// nx x ny rectangles, each split into two triangles. The diagonals are
/// mirrored about x = L/2 so the mesh is reflection symmetric.
ReferenceMesh build_reference_mesh(double L, double H, int nx, int ny);

/// VERTICES / CELLS / EDGE_CLASS. Positions default to the reference ones.
void write_mesh_snapshot(std::ostream& os, const ReferenceMesh& m,
                         const std::vector<Vec2>* positions = nullptr);

}  // namespace fsi
