#pragma once

/// \file dual.hpp
/// Forward-mode dual numbers with a fixed number of tangent slots.
/// Used to differentiate the local residual kernels.

#include <array>
#include <cmath>

namespace fsi {

template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants

    static Dual variable(double value, int slot)
    {
        Dual x(value);
        x.d[slot] = 1.0;
        return x;
    }

    Dual& operator+=(const Dual& o)
    {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o)
    {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o)
    {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o)
    {
        const double inv = 1.0 / o.v;
        const double q = v * inv;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
        v = q;
        return *this;
    }
};

template <int N> Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N> Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }
template <int N> Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N> Dual<N> operator+(double b, Dual<N> a) { a.v += b; return a; }
template <int N> Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N> Dual<N> operator-(double b, const Dual<N>& a) { return Dual<N>(b) - a; }
template <int N>
Dual<N> operator*(Dual<N> a, double b)
{
    a.v *= b;
    for (auto& x : a.d) x *= b;
    return a;
}
template <int N> Dual<N> operator*(double b, Dual<N> a) { return a * b; }
template <int N> Dual<N> operator/(Dual<N> a, double b) { return a * (1.0 / b); }
template <int N> Dual<N> operator/(double b, const Dual<N>& a) { return Dual<N>(b) / a; }
template <int N>
Dual<N> operator-(Dual<N> a)
{
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
}

template <int N> bool operator<(const Dual<N>& a, const Dual<N>& b) { return a.v < b.v; }
template <int N> bool operator>(const Dual<N>& a, const Dual<N>& b) { return a.v > b.v; }
template <int N> bool operator<=(const Dual<N>& a, const Dual<N>& b) { return a.v <= b.v; }
template <int N> bool operator>=(const Dual<N>& a, const Dual<N>& b) { return a.v >= b.v; }

namespace detail {
template <int N>
Dual<N> chain(const Dual<N>& x, double value, double slope)
{
    Dual<N> r(value);
    for (int i = 0; i < N; ++i) r.d[i] = slope * x.d[i];
    return r;
}
}  // namespace detail

template <int N> Dual<N> sqrt(const Dual<N>& x)
{
    const double s = std::sqrt(x.v);
    return detail::chain(x, s, 0.5 / s);
}
template <int N> Dual<N> sin(const Dual<N>& x) { return detail::chain(x, std::sin(x.v), std::cos(x.v)); }
template <int N> Dual<N> cos(const Dual<N>& x) { return detail::chain(x, std::cos(x.v), -std::sin(x.v)); }
template <int N> Dual<N> exp(const Dual<N>& x)
{
    const double e = std::exp(x.v);
    return detail::chain(x, e, e);
}
template <int N> Dual<N> pow(const Dual<N>& x, double p)
{
    const double y = std::pow(x.v, p);
    return detail::chain(x, y, p * std::pow(x.v, p - 1.0));
}

inline double value(double x) { return x; }
template <int N> double value(const Dual<N>& x) { return x.v; }

/// |x|. The derivative at 0 is regularized to x / sqrt(x^2 + 1e-24), which
/// picks the average of the one-sided slopes there.
inline double kink_abs(double x) { return std::abs(x); }
template <int N> Dual<N> kink_abs(const Dual<N>& x)
{
    return detail::chain(x, std::abs(x.v), x.v / std::sqrt(x.v * x.v + 1e-24));
}

using std::cos;
using std::pow;
using std::sin;
using std::sqrt;

}  // namespace fsi
