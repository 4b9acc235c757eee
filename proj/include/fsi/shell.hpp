#pragma once

/// \file shell.hpp
/// C1 quadratic B-spline space for the clamped plate, its Gram, bending and
/// tension forms, and the nodal (piecewise-affine) projection.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <vector>

namespace fsi {

struct ShellForms {
    Eigen::MatrixXd M;  ///< int psi_i psi_j
    Eigen::MatrixXd B;  ///< int psi_i'' psi_j''
    Eigen::MatrixXd T;  ///< int psi_i' psi_j'
};

/// The free basis functions are the quadratic B-splines on the clamped knot
/// vector with the two outermost functions at either end removed, so every
/// function satisfies psi(0) = psi'(0) = psi(L) = psi'(L) = 0.
class ShellSpace {
public:
    explicit ShellSpace(std::vector<double> knots);
    static ShellSpace uniform(int n, double L);

    int dim() const { return n_ - 2 > 0 ? n_ - 2 : 0; }
    int intervals() const { return n_; }
    double length() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }
    /// Interval index containing r; domain_error outside [0, L].
    int interval_of(double r) const;

    struct Local {
        int count = 0;
        std::array<int, 3> index{};
        std::array<std::array<double, 3>, 3> ders{};  ///< [k][order]
    };
    /// Free basis functions that do not vanish at r with value, first and
    /// second derivative.
    Local basis_at(double r) const;

    /// (value, first derivative, second derivative) of sum_j c_j psi_j at r.
    std::array<double, 3> evaluate(const Eigen::VectorXd& c, double r) const;

    /// (n+1) x dim matrix mapping coefficients to values at the knots.
    const Eigen::MatrixXd& knot_evaluation() const { return knot_eval_; }
    Eigen::VectorXd knot_values(const Eigen::VectorXd& c) const { return knot_eval_ * c; }

    ShellForms forms() const;
    /// Load vector int g psi_j dr.
    Eigen::VectorXd load_vector(const std::function<double(double)>& g) const;

    /// Three-point Gauss nodes and weights on interval i.
    std::array<std::pair<double, double>, 3> gauss(int i) const;

private:
    std::vector<double> knots_;
    std::vector<double> t_;  ///< full open knot vector
    int n_;
    Eigen::MatrixXd knot_eval_;
};

struct ShellState {
    Eigen::VectorXd eta;
    Eigen::VectorXd z;
};

/// Piecewise-affine interpolant of nodal values at the knots.
double eval_p1(const std::vector<double>& knots, const Eigen::VectorXd& values, double r);

/// E_s = |z|_M^2/2 + alpha |eta|_B^2/2 + beta |eta|_T^2/2.
double shell_energy(const ShellForms& f, const ShellState& s, double alpha, double beta);

}  // namespace fsi
