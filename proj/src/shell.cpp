#include "fsi/shell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {
constexpr int kDegree = 2;
}

ShellSpace::ShellSpace(std::vector<double> knots) : knots_(std::move(knots)), n_(0)
{
    if (knots_.size() < 2) throw std::invalid_argument("shell space needs at least one interval");
    if (knots_.front() != 0.0) throw std::invalid_argument("shell knots must start at 0");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1])) throw std::invalid_argument("shell knots must increase");
    n_ = static_cast<int>(knots_.size()) - 1;
    t_.assign(3, 0.0);
    for (int i = 1; i < n_; ++i) t_.push_back(knots_[i]);
    t_.insert(t_.end(), 3, knots_.back());

    knot_eval_ = Eigen::MatrixXd::Zero(n_ + 1, dim());
    for (int i = 0; i <= n_; ++i) {
        const Local loc = basis_at(knots_[i]);
        for (int k = 0; k < loc.count; ++k) knot_eval_(i, loc.index[k]) = loc.ders[k][0];
    }
}

ShellSpace ShellSpace::uniform(int n, double L)
{
    std::vector<double> k(n + 1);
    for (int i = 0; i <= n; ++i) k[i] = L * i / n;
    k[n] = L;
    return ShellSpace(std::move(k));
}

int ShellSpace::interval_of(double r) const
{
    const double L = length();
    const double tol = 1e-12 * L;
    if (!(r >= -tol && r <= L + tol)) throw std::domain_error("shell evaluation outside [0, L]");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
    int i = static_cast<int>(it - knots_.begin()) - 1;
    return std::clamp(i, 0, n_ - 1);
}

ShellSpace::Local ShellSpace::basis_at(double r) const
{
    const int i = interval_of(r);
    r = std::clamp(r, 0.0, length());
    const int s = i + kDegree;  // span in the full knot vector

    // derivatives of the three nonzero full B-splines N_{s-2..s}
    double ndu[3][3] = {};
    double left[3] = {}, right[3] = {};
    ndu[0][0] = 1.0;
    for (int j = 1; j <= kDegree; ++j) {
        left[j] = r - t_[s + 1 - j];
        right[j] = t_[s + j] - r;
        double saved = 0.0;
        for (int q = 0; q < j; ++q) {
            ndu[j][q] = right[q + 1] + left[j - q];
            const double tmp = ndu[q][j - 1] / ndu[j][q];
            ndu[q][j] = saved + right[q + 1] * tmp;
            saved = left[j - q] * tmp;
        }
        ndu[j][j] = saved;
    }
    double ders[3][3] = {};
    for (int j = 0; j <= kDegree; ++j) ders[0][j] = ndu[j][kDegree];
    for (int q = 0; q <= kDegree; ++q) {
        double a[2][3] = {};
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= kDegree; ++k) {
            double d = 0.0;
            const int rk = q - k, pk = kDegree - k;
            if (q >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (q - 1 <= pk) ? k - 1 : kDegree - q;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (q <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][q];
                d += a[s2][k] * ndu[q][pk];
            }
            ders[k][q] = d;
            std::swap(s1, s2);
        }
    }
    for (int j = 0; j <= kDegree; ++j) {
        ders[1][j] *= kDegree;
        ders[2][j] *= kDegree * (kDegree - 1);
    }

    Local loc;
    for (int q = 0; q <= kDegree; ++q) {
        const int full = s - kDegree + q;
        const int free = full - 2;
        if (free < 0 || free >= dim()) continue;
        loc.index[loc.count] = free;
        for (int k = 0; k < 3; ++k) loc.ders[loc.count][k] = ders[k][q];
        ++loc.count;
    }
    return loc;
}

std::array<double, 3> ShellSpace::evaluate(const Eigen::VectorXd& c, double r) const
{
    if (c.size() != dim()) throw std::invalid_argument("shell coefficient vector has wrong size");
    const Local loc = basis_at(r);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int k = 0; k < loc.count; ++k)
        for (int o = 0; o < 3; ++o) out[o] += c[loc.index[k]] * loc.ders[k][o];
    return out;
}

std::array<std::pair<double, double>, 3> ShellSpace::gauss(int i) const
{
    static const double x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double a = knots_[i], b = knots_[i + 1];
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<std::pair<double, double>, 3> out;
    for (int q = 0; q < 3; ++q) out[q] = {m + h * x[q], h * w[q]};
    return out;
}

ShellForms ShellSpace::forms() const
{
    const int d = dim();
    ShellForms f{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d),
                 Eigen::MatrixXd::Zero(d, d)};
    for (int i = 0; i < n_; ++i) {
        for (auto [r, w] : gauss(i)) {
            const Local loc = basis_at(r);
            for (int p = 0; p < loc.count; ++p)
                for (int q = 0; q < loc.count; ++q) {
                    const int I = loc.index[p], J = loc.index[q];
                    f.M(I, J) += w * (loc.ders[p][0] * loc.ders[q][0]);
                    f.T(I, J) += w * (loc.ders[p][1] * loc.ders[q][1]);
                    f.B(I, J) += w * (loc.ders[p][2] * loc.ders[q][2]);
                }
        }
    }
    return f;
}

Eigen::VectorXd ShellSpace::load_vector(const std::function<double(double)>& g) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    for (int i = 0; i < n_; ++i)
        for (auto [r, w] : gauss(i)) {
            const Local loc = basis_at(r);
            const double gv = g(r);
            for (int p = 0; p < loc.count; ++p) out[loc.index[p]] += w * gv * loc.ders[p][0];
        }
    return out;
}

double eval_p1(const std::vector<double>& knots, const Eigen::VectorXd& values, double r)
{
    const double L = knots.back();
    if (!(r >= -1e-12 * L && r <= L * (1 + 1e-12))) throw std::domain_error("evaluation outside [0, L]");
    auto it = std::upper_bound(knots.begin(), knots.end(), r);
    int i = std::clamp(static_cast<int>(it - knots.begin()) - 1, 0, static_cast<int>(knots.size()) - 2);
    const double s = (r - knots[i]) / (knots[i + 1] - knots[i]);
    return (1.0 - s) * values[i] + s * values[i + 1];
}

double shell_energy(const ShellForms& f, const ShellState& s, double alpha, double beta)
{
    return 0.5 * s.z.dot(f.M * s.z) + 0.5 * alpha * s.eta.dot(f.B * s.eta) +
           0.5 * beta * s.eta.dot(f.T * s.eta);
}

}  // namespace fsi
