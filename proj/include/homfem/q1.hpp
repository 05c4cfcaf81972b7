#pragma once

#include <array>

namespace homfem {

// Bilinear reference element on [0,1]^2 with counterclockwise node order
// (0,0), (1,0), (1,1), (0,1), and the tensor 2x2 Gauss rule.

struct GaussPoint {
    double s, t;     // local coordinates in [0,1]
    double weight;   // on the reference square (sums to 1)
};

inline constexpr std::array<GaussPoint, 4> q1_gauss_points() {
    constexpr double a = 0.21132486540518711;  // (1 - 1/sqrt(3)) / 2
    constexpr double b = 0.78867513459481289;
    return {{{a, a, 0.25}, {b, a, 0.25}, {b, b, 0.25}, {a, b, 0.25}}};
}

inline std::array<double, 4> q1_shape(double s, double t) {
    return {(1.0 - s) * (1.0 - t), s * (1.0 - t), s * t, (1.0 - s) * t};
}

// d/ds and d/dt of the four shape functions.
inline void q1_shape_grad(double s, double t, std::array<double, 4>& ds,
                          std::array<double, 4>& dt) {
    ds = {-(1.0 - t), (1.0 - t), t, -t};
    dt = {-(1.0 - s), -s, s, (1.0 - s)};
}

}  // namespace homfem
