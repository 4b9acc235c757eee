#pragma once

/// \file quadrature.hpp
/// Fixed rules on the unit interval and the reference triangle.

#include <array>
#include <cmath>

namespace fsi::quad {

struct TriPoint {
    double l0, l1, l2, w;  ///< barycentrics, weight relative to the area
};

/// Seven-point rule, exact for polynomials of degree 5.
inline const std::array<TriPoint, 7>& triangle7()
{
    static const std::array<TriPoint, 7> rule = [] {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
        const double w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
        return std::array<TriPoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40.0},
                                        {a1, a1, b1, w1},
                                        {a1, b1, a1, w1},
                                        {b1, a1, a1, w1},
                                        {a2, a2, b2, w2},
                                        {a2, b2, a2, w2},
                                        {b2, a2, a2, w2}}};
    }();
    return rule;
}

struct LinePoint {
    double s, w;  ///< position in [0,1], weight relative to the length
};

inline const std::array<LinePoint, 3>& gauss3()
{
    static const std::array<LinePoint, 3> rule = [] {
        const double d = 0.5 * std::sqrt(0.6);
        return std::array<LinePoint, 3>{{{0.5 - d, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + d, 5.0 / 18.0}}};
    }();
    return rule;
}

inline const std::array<LinePoint, 2>& gauss2()
{
    static const std::array<LinePoint, 2> rule = [] {
        const double d = 0.5 / std::sqrt(3.0);
        return std::array<LinePoint, 2>{{{0.5 - d, 0.5}, {0.5 + d, 0.5}}};
    }();
    return rule;
}

}  // namespace fsi::quad
