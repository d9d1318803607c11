#pragma once

#include <cmath>
#include <vector>

#include "heis/core.hpp"
#include "heis/discrete_measure.hpp"

namespace heis {

// Point (a * Je, b) of the vertical plane W_e, kept in intrinsic coordinates.
struct PlanePoint {
    Direction e;
    double a = 0.0;  // along Je
    double b = 0.0;  // vertical

    HeisPoint to_heis() const { return HeisPoint(a * e.jx(), a * e.jy(), b); }
};

// Inverse of PlanePoint::to_heis for points lying on W_e.
inline PlanePoint plane_point_from_heis(const Direction& e, const HeisPoint& w) {
    return {e, w.x * e.jx() + w.y * e.jy(), w.t};
}

inline double rho_e(const Direction& e, const HeisPoint& p) noexcept {
    const double ze = p.x * e.ex() + p.y * e.ey();
    const double zj = p.x * e.jx() + p.y * e.jy();
    return p.t + 0.5 * ze * zj;
}

inline PlanePoint pi_e(const Direction& e, const HeisPoint& p) noexcept {
    const double ze = p.x * e.ex() + p.y * e.ey();
    const double zj = p.x * e.jx() + p.y * e.jy();
    return {e, zj, p.t + 0.5 * ze * zj};
}

inline HeisPoint pi_xt(const HeisPoint& p) { return HeisPoint(p.x, 0.0, p.t - 0.5 * p.x * p.y); }

inline double parabolic_dist(double a1, double b1, double a2, double b2) noexcept {
    return std::abs(a1 - a2) + std::sqrt(std::abs(b1 - b2));
}

inline double parabolic_dist(const PlanePoint& w1, const PlanePoint& w2) {
    if (!(w1.e == w2.e)) throw DomainError("parabolic_dist: points lie on different planes");
    return parabolic_dist(w1.a, w1.b, w2.a, w2.b);
}

struct PlaneAtom {
    double a = 0.0;
    double b = 0.0;
    double w = 0.0;
};

struct PlanarMeasure {
    Direction e;
    std::vector<PlaneAtom> atoms;
    double total_mass = 0.0;
};

inline PlanarMeasure project_pushforward_measure(const Direction& e, const DiscreteMeasure& mu) {
    PlanarMeasure out{e, {}, mu.total_mass()};
    out.atoms.reserve(mu.size());
    for (const auto& at : mu.atoms()) {
        const PlanePoint w = pi_e(e, at.p);
        out.atoms.push_back({w.a, w.b, at.w});
    }
    return out;
}

// Fiber of w = (a * Je, b) is the horizontal line through w in direction e.
inline double fiber_min_dist4(const Direction& e, double a, double b, const HeisPoint& c) noexcept {
    HeisPoint w;
    w.x = a * e.jx();
    w.y = a * e.jy();
    w.t = b;
    return horizontal_line_min_dist4(w, e.ex(), e.ey(), c);
}

// True when the plane point (a, b) of W_e lies in pi_e of the closed ball.
inline bool projected_ball_contains(const Direction& e, const HeisBall& B, double a, double b) noexcept {
    const double r2 = B.radius * B.radius;
    return fiber_min_dist4(e, a, b, B.center) <= r2 * r2 * (1.0 + 1e-14);
}

}  // namespace heis
