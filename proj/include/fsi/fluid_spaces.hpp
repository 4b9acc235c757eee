#pragma once

/// \file fluid_spaces.hpp
/// Piecewise-constant densities and Crouzeix-Raviart velocities on a frame,
/// with their projections, broken derivatives and traces.

#include <Eigen/Dense>
#include <functional>

#include "fsi/ale.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

using EdgeField = Eigen::Matrix<double, Eigen::Dynamic, 2>;

struct FluidState {
    Eigen::VectorXd rho;  ///< one value per cell
    EdgeField u;          ///< one vector per edge (mean over the edge)
};

/// Cell means of f on the frame (degree-5 rule).
Eigen::VectorXd project_cells(const ReferenceMesh& m, const AleFrame& f,
                              const std::function<double(const Vec2&)>& g);
/// Edge means of g on the frame (three-point Gauss).
EdgeField project_edges(const ReferenceMesh& m, const AleFrame& f,
                        const std::function<Vec2(const Vec2&)>& g);

/// |sigma| n_sigma for the local edge i of cell c, outward from c.
Vec2 scaled_outward_normal(const ReferenceMesh& m, const AleFrame& f, int c, int i);

/// grad u on cell c, (1/|K|) sum_sigma |sigma| u_sigma (x) n_sigma.
Eigen::Matrix2d cell_gradient(const ReferenceMesh& m, const AleFrame& f, const EdgeField& u, int c);
/// Pi_T u: mean over the cell, which is the mean of the three edge values.
Vec2 cell_mean(const ReferenceMesh& m, const EdgeField& u, int c);
/// Value of u|_K at local vertex i.
Vec2 vertex_value(const ReferenceMesh& m, const EdgeField& u, int c, int i);
/// Value of u|_K at barycentric coordinates b.
Vec2 evaluate(const ReferenceMesh& m, const EdgeField& u, int c, const Eigen::Vector3d& b);

struct BrokenNorms {
    double grad = 0.0;  ///< sum_K |K| |grad u|^2
    double jump = 0.0;  ///< sum over interior edges of (1/h) int |[[u]]|^2
};
BrokenNorms broken_norms(const ReferenceMesh& m, const AleFrame& f, const EdgeField& u);

/// sum_K |K| rho_K.
double total_mass(const AleFrame& f, const Eigen::VectorXd& rho);

}  // namespace fsi
