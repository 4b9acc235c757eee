#pragma once

/// \file upwind.hpp
/// Upwind flux with artificial diffusion h^eps [[r]] on interior edges.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fsi/ale.hpp"
#include "fsi/dual.hpp"
#include "fsi/fluid_spaces.hpp"

namespace fsi {

/// Up[r, v] across an edge for the side "in", with vn = <v.n> for the
/// normal pointing from "in" to "out" and diffusion weight h^eps.
template <class T>
T upwind_flux(const T& r_in, const T& r_out, const T& vn, double h_eps)
{
    const T a = kink_abs(vn);
    const T pos = 0.5 * (vn + a);
    const T neg = 0.5 * (vn - a);
    return r_in * pos + r_out * neg - h_eps * (r_out - r_in);
}

/// <(u - w).n> on every edge, with n pointing out of edge.cell[0].
std::vector<double> relative_normal_velocity(const ReferenceMesh& m, const AleFrame& prev,
                                             const AleFrame& curr, double tau, const EdgeField& u);

struct FluxField {
    std::vector<double> flux;  ///< |sigma| Up out of edge.cell[0]; zero on the boundary
    Eigen::VectorXd div;       ///< (1/|K|) sum over dK of |sigma| Up
};

/// Discrete upwind divergence of the cell field r transported by V.
FluxField upwind_divergence(const ReferenceMesh& m, const AleFrame& curr, const Eigen::VectorXd& r,
                            const std::vector<double>& V, double h, double eps);

}  // namespace fsi
