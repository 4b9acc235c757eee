#pragma once

/// \file ale.hpp
/// Moving frames of the fluid domain. The map dilates each vertical line by
/// (Pi_p eta + H)/H and is affine on every reference triangle, so the current
/// mesh is again a conforming triangulation.

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fsi/mesh.hpp"
#include "fsi/shell.hpp"

namespace fsi {

/// Raised when a frame or step would violate geometric admissibility.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AleFrame {
    int level = 0;
    Eigen::VectorXd knot_eta;          ///< Pi_p eta at the knots
    std::vector<Vec2> x;               ///< current vertex positions
    std::vector<double> area;          ///< |K^k|
    std::vector<double> det;           ///< F_0^k = |K^k| / |K|
    std::vector<Eigen::Matrix2d> jac;  ///< gradient of the map on each cell
    std::vector<double> edge_length;
    std::vector<Vec2> edge_normal;     ///< unit, pointing out of edge.cell[0]
};

template <class T>
T mapped_height(double yhat, const T& eta_knot, double H)
{
    return yhat * (1.0 + eta_knot / H);
}

/// Frame for nodal values eta at the knots. Throws InvariantError when a
/// column would collapse (eta + H <= 0).
AleFrame make_frame(const ReferenceMesh& m, const Eigen::VectorXd& knot_eta, int level);
AleFrame reference_frame(const ReferenceMesh& m);

struct Location {
    int cell = -1;
    Eigen::Vector3d bary;
};
/// Cell containing p in the given vertex positions (nullopt when outside).
std::optional<Location> locate(const ReferenceMesh& m, const std::vector<Vec2>& positions, const Vec2& p);

/// A^k(xhat); domain_error outside the reference rectangle.
Vec2 ale_map(const ReferenceMesh& m, const AleFrame& f, const Vec2& xhat);
/// (A^k)^{-1}(x); domain_error outside Omega^k.
Vec2 ale_inverse(const ReferenceMesh& m, const AleFrame& f, const Vec2& x);

/// F_i^j per cell, |K^j| / |K^i|.
std::vector<double> det_jacobian(const AleFrame& fi, const AleFrame& fj);

/// w^k(x) = (x - X_k^{k-1}(x)) / tau for x in Omega^k.
Vec2 mesh_velocity(const ReferenceMesh& m, const AleFrame& prev, const AleFrame& curr, double tau,
                   const Vec2& x);
/// Vertex values of w^k.
std::vector<Vec2> mesh_velocity_vertices(const AleFrame& prev, const AleFrame& curr, double tau);
/// div w^k on each current cell, from the vertex values.
std::vector<double> mesh_velocity_divergence(const ReferenceMesh& m, const AleFrame& prev,
                                             const AleFrame& curr, double tau);

/// Per-cell (|K^k| - |K^{k-1}|)/tau - int_{dK^k} w.n, max-norm.
double geometric_conservation_residual(const ReferenceMesh& m, const AleFrame& prev,
                                       const AleFrame& curr, double tau);

struct GapReport {
    bool admissible = true;
    double min_gap = 0.0;  ///< min over knots of (eta + H)
    int knot = -1;         ///< knot attaining the minimum
    double value = 0.0;    ///< eta at that knot
};
/// Checks eta + H >= delta0 at every knot of the frame.
GapReport gap_guard(const AleFrame& f, double H, double delta0);

}  // namespace fsi
