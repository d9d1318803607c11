#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "heis/core.hpp"
#include "heis/duality.hpp"

namespace heis {

// Sheared rectangle M_y([-r, r] x [-r^2, r^2]) with M_y = [[1, 0], [-y, 1]].
struct PlateRect {
    double y = 0.0;
    double r = 0.0;

    bool contains(double w1, double w2, double slack = 0.0) const noexcept {
        return std::abs(w1) <= r + slack && std::abs(w2 + y * w1) <= r * r + slack;
    }
};

inline double plate_slack(double r) noexcept { return 1e-12 * std::max(1.0, r); }

// (0, u, v) + union over |s| <= x_max of ((0, R_r(y)) + L_y(s))
struct Plate {
    double u = 0.0, v = 0.0, y = 0.0, r = 0.0;
    double x_max = 1.0;

    Plate() = default;
    Plate(double u_, double v_, double y_, double r_, double x_max_ = 1.0) : u(u_), v(v_), y(y_), r(r_), x_max(x_max_) {
        if (!(r > 0.0) || !(x_max > 0.0)) throw DomainError("Plate: scale and truncation must be positive");
    }
};

// (0, u, v) + union over |y' - y| <= r of ((0, R_r(y)) + L_{y'}); rays are not truncated.
struct ModifiedPlate {
    double u = 0.0, v = 0.0, y = 0.0, r = 0.0;

    ModifiedPlate() = default;
    ModifiedPlate(double u_, double v_, double y_, double r_) : u(u_), v(v_), y(y_), r(r_) {
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ModifiedPlate: scale must be positive");
    }
};

inline bool plate_contains(const Plate& P, const HeisPoint& q) noexcept {
    const double s = q.x;
    if (std::abs(s) > P.x_max) return false;
    const double w1 = q.y - P.u + s * P.y;
    const double w2 = q.t - P.v - 0.5 * s * P.y * P.y;
    return PlateRect{P.y, P.r}.contains(w1, w2, plate_slack(P.r));
}

// Decided in closed form. With s = q.x and d = y' - y, the offset is
//   w1 = A + s (y + d),   w2 + y w1 = K - (s / 2) d^2,
// so the admissible d form an interval (linear constraint) intersected with a
// symmetric pair of intervals (constraint on d^2) and with [-r, r].
inline bool plate_contains(const ModifiedPlate& P, const HeisPoint& q) noexcept {
    const double r = P.r, y = P.y, s = q.x;
    const double eps = plate_slack(r);
    const double A = q.y - P.u;
    const double B = q.t - P.v;
    const double K = B + y * A + 0.5 * s * y * y;
    const double r2 = r * r;
    if (s == 0.0) return std::abs(A) <= r + eps && std::abs(K) <= r2 + eps;
    // |A + s y + s d| <= r
    const double c0 = A + s * y;
    double lo = (-r - eps - c0) / s, hi = (r + eps - c0) / s;
    if (lo > hi) std::swap(lo, hi);
    lo = std::max(lo, -r);
    hi = std::min(hi, r);
    if (lo > hi) return false;
    // K - r^2 <= (s / 2) d^2 <= K + r^2
    double m0 = (K - r2 - eps) / (0.5 * s), m1 = (K + r2 + eps) / (0.5 * s);
    if (m0 > m1) std::swap(m0, m1);
    if (m1 < 0.0) return false;
    const double in = std::sqrt(std::max(m0, 0.0));
    const double out = std::sqrt(m1);
    // d in [-out, -in] or [in, out]
    const bool left = std::max(lo, -out) <= std::min(hi, -in);
    const bool right = std::max(lo, in) <= std::min(hi, out);
    return left || right;
}

// Reference decision by scanning y' (for cross-checking the closed form).
inline bool plate_contains_scan(const ModifiedPlate& P, const HeisPoint& q, int grid = 65) {
    const double r = P.r, s = q.x;
    auto excess = [&](double yp) {
        const double w1 = q.y - P.u + s * yp;
        const double w2 = q.t - P.v - 0.5 * s * yp * yp;
        return std::max(std::abs(w1) - r, std::abs(w2 + P.y * w1) - r * r);
    };
    const double tol = 1e-9 * std::max(1.0, r);
    double best = excess(P.y - r);
    double best_y = P.y - r;
    for (int i = 1; i < grid; ++i) {
        const double yp = P.y - r + 2.0 * r * i / (grid - 1);
        const double e = excess(yp);
        if (e < best) best = e, best_y = yp;
    }
    // golden-section refinement on the bracketing cells
    const double h = 2.0 * r / (grid - 1);
    double a = std::max(P.y - r, best_y - h), b = std::min(P.y + r, best_y + h);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 80; ++it) {
        if (excess(c) < excess(d)) b = d;
        else a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    best = std::min(best, excess(0.5 * (a + b)));
    return best <= tol;
}

inline ModifiedPlate ball_to_modified_plate(const HeisBall& B) {
    const HeisPoint& c = B.center;
    if (koranyi_norm(c) > 1.0) throw DomainError("ball_to_modified_plate: center outside the unit ball");
    if (B.radius > 0.5) throw DomainError("ball_to_modified_plate: radius above 1/2");
    if (std::abs(c.y) > 1.0) throw DomainError("ball_to_modified_plate: direction outside [-1, 1]");
    return ModifiedPlate(c.x, c.t - 0.5 * c.x * c.y, c.y, 2.0 * B.radius);
}

inline HeisBall plate_to_ball(const ModifiedPlate& P, double inflation = 1.0) {
    if (!(inflation >= 1.0)) throw DomainError("plate_to_ball: inflation must be at least 1");
    return HeisBall(point_of_ray(LightRay{P.u, P.v, P.y}), inflation * P.r / 2.0);
}

namespace detail {

using Vec2 = std::array<double, 2>;

// Corners of (cx, cy) + M_y([-r, r] x [-r^2, r^2]) in counterclockwise order.
inline std::vector<Vec2> rect_polygon(double cx, double cy, double y, double r) {
    const double r2 = r * r;
    const Vec2 base[4] = {{-r, -r2}, {r, -r2}, {r, r2}, {-r, r2}};
    std::vector<Vec2> out;
    out.reserve(4);
    for (const auto& b : base) out.push_back({cx + b[0], cy - y * b[0] + b[1]});
    return out;
}

// Sutherland-Hodgman clip of a convex polygon by a convex counterclockwise polygon.
inline std::vector<Vec2> clip_convex(std::vector<Vec2> subject, const std::vector<Vec2>& clip) {
    for (std::size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
        const Vec2 a = clip[i], b = clip[(i + 1) % clip.size()];
        auto side = [&](const Vec2& p) { return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]); };
        std::vector<Vec2> out;
        for (std::size_t j = 0; j < subject.size(); ++j) {
            const Vec2 p = subject[j], q = subject[(j + 1) % subject.size()];
            const double sp = side(p), sq = side(q);
            if (sp >= 0) out.push_back(p);
            if ((sp >= 0) != (sq >= 0)) {
                const double t = sp / (sp - sq);
                out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
            }
        }
        subject = std::move(out);
    }
    return subject;
}

inline double polygon_dist_to_origin(const std::vector<Vec2>& poly) {
    // inside test
    bool inside = poly.size() >= 3;
    for (std::size_t i = 0; i < poly.size() && inside; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
        if ((b[0] - a[0]) * (-a[1]) - (b[1] - a[1]) * (-a[0]) < 0) inside = false;
    }
    if (inside) return 0.0;
    double best = INFINITY;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0 ? -(a[0] * dx + a[1] * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::hypot(a[0] + t * dx, a[1] + t * dy));
    }
    return best;
}

}  // namespace detail

// True when the two modified plates share a point of the closed Euclidean unit ball. Each
// slice {x = s} of a plate at fixed y' is a parallelogram, so the test scans (s, y1', y2')
// and clips parallelograms exactly.
inline bool modified_plates_meet_in_unit_ball(const ModifiedPlate& P1, const ModifiedPlate& P2, int s_steps = 33,
                                              int y_steps = 9) {
    for (int i = 0; i < s_steps; ++i) {
        const double s = -1.0 + 2.0 * i / (s_steps - 1);
        const double disc = std::sqrt(std::max(0.0, 1.0 - s * s));
        for (int j = 0; j < y_steps; ++j) {
            const double y1 = P1.y - P1.r + 2.0 * P1.r * j / (y_steps - 1);
            const auto poly1 = detail::rect_polygon(P1.u - s * y1, P1.v + 0.5 * s * y1 * y1, P1.y, P1.r);
            for (int k = 0; k < y_steps; ++k) {
                const double y2 = P2.y - P2.r + 2.0 * P2.r * k / (y_steps - 1);
                const auto poly2 = detail::rect_polygon(P2.u - s * y2, P2.v + 0.5 * s * y2 * y2, P2.y, P2.r);
                const auto both = detail::clip_convex(poly1, poly2);
                if (both.size() >= 3 && detail::polygon_dist_to_origin(both) <= disc) return true;
            }
        }
    }
    return false;
}

// d(p1, p2) / r for two equal-radius balls in nearby directions whose dual modified plates meet
// inside the unit ball; nullopt when they do not meet.
inline std::optional<double> same_direction_separation(const HeisBall& B1, const HeisBall& B2) {
    const double r = B1.radius;
    if (std::abs(B2.radius - r) > 1e-12 * r) throw DomainError("same_direction_separation: radii differ");
    if (std::abs(B1.center.y - B2.center.y) > r) throw DomainError("same_direction_separation: directions differ by more than r");
    const double d = heis_dist(B1.center, B2.center);
    if (d == 0.0) return 0.0;
    if (!modified_plates_meet_in_unit_ball(ball_to_modified_plate(B1), ball_to_modified_plate(B2))) return std::nullopt;
    return d / r;
}

inline long direction_bin(const HeisBall& B, double delta) {
    if (!(delta > 0.0)) throw DomainError("direction_bin: delta must be positive");
    const double y = B.center.y;
    if (std::abs(y) > 1.0) throw DomainError("direction_bin: direction outside [-1, 1]");
    return std::lround(y / delta);
}

inline double plate_volume(double r) noexcept { return 8.0 * r * r * r; }

}  // namespace heis
