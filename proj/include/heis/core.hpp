#pragma once

#include <cmath>
#include <numbers>

#include "heis/errors.hpp"

namespace heis {

// Point of the first Heisenberg group, coordinates (x, y, t).
struct HeisPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    constexpr HeisPoint() = default;
    HeisPoint(double x_, double y_, double t_) : x(x_), y(y_), t(t_) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(t))
            throw DomainError("HeisPoint: non-finite coordinate");
    }

    friend bool operator==(const HeisPoint&, const HeisPoint&) = default;
};

// Unit direction in the plane, stored as its angle.
class Direction {
public:
    Direction() = default;
    explicit Direction(double theta) : theta_(theta), c_(std::cos(theta)), s_(std::sin(theta)) {
        if (!std::isfinite(theta)) throw DomainError("Direction: non-finite angle");
    }

    double theta() const noexcept { return theta_; }
    // e = (cos, sin)
    double ex() const noexcept { return c_; }
    double ey() const noexcept { return s_; }
    // Je = rotation of e by a quarter turn = (-sin, cos)
    double jx() const noexcept { return -s_; }
    double jy() const noexcept { return c_; }

    friend bool operator==(const Direction& a, const Direction& b) noexcept {
        return a.theta_ == b.theta_;
    }

private:
    double theta_ = 0.0;
    double c_ = 1.0;
    double s_ = 0.0;
};

struct HeisBall {
    HeisPoint center;
    double radius = 1.0;

    HeisBall() = default;
    HeisBall(HeisPoint c, double r) : center(c), radius(r) {
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("HeisBall: radius must be positive");
    }
};

inline HeisPoint group_mul(const HeisPoint& p, const HeisPoint& q) noexcept {
    HeisPoint r;
    r.x = p.x + q.x;
    r.y = p.y + q.y;
    r.t = p.t + q.t + 0.5 * (p.x * q.y - p.y * q.x);
    return r;
}

inline HeisPoint operator*(const HeisPoint& p, const HeisPoint& q) noexcept { return group_mul(p, q); }

inline HeisPoint group_inv(const HeisPoint& p) noexcept {
    HeisPoint r;
    r.x = -p.x;
    r.y = -p.y;
    r.t = -p.t;
    return r;
}

inline HeisPoint dilate(double lambda, const HeisPoint& p) {
    if (!(lambda > 0.0)) throw DomainError("dilate: lambda must be positive");
    return HeisPoint(lambda * p.x, lambda * p.y, lambda * lambda * p.t);
}

inline double koranyi_norm(const HeisPoint& p) noexcept {
    const double r2 = p.x * p.x + p.y * p.y;
    return std::sqrt(std::sqrt(r2 * r2 + 16.0 * p.t * p.t));
}

// Fourth power of the norm; avoids roots in membership tests.
inline double koranyi_norm4(const HeisPoint& p) noexcept {
    const double r2 = p.x * p.x + p.y * p.y;
    return r2 * r2 + 16.0 * p.t * p.t;
}

// d(p, q) = |q^{-1} p|, expanded so no temporaries are built.
inline double heis_dist(const HeisPoint& p, const HeisPoint& q) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dt = p.t - q.t + 0.5 * (q.y * p.x - q.x * p.y);
    const double r2 = dx * dx + dy * dy;
    return std::sqrt(std::sqrt(r2 * r2 + 16.0 * dt * dt));
}

inline double heis_dist4(const HeisPoint& p, const HeisPoint& q) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dt = p.t - q.t + 0.5 * (q.y * p.x - q.x * p.y);
    const double r2 = dx * dx + dy * dy;
    return r2 * r2 + 16.0 * dt * dt;
}

inline double heis_dist_trunc(const HeisPoint& p, const HeisPoint& q, double delta) {
    if (!(delta > 0.0)) throw DomainError("heis_dist_trunc: delta must be positive");
    const double d = heis_dist(p, q);
    return d > delta ? d : delta;
}

inline bool in_ball(const HeisBall& b, const HeisPoint& q) noexcept {
    const double r2 = b.radius * b.radius;
    return heis_dist4(q, b.center) <= r2 * r2;
}

// min over s of |c^{-1} * w * (s e, 0)|^4 for a unit horizontal vector e = (ex, ey).
// With g = c^{-1} w and u = s + <g_z, e> the quartic becomes (u^2 + k^2)^2 + (4 beta + 2 k u)^2,
// whose derivative 4 (u^3 + 3 k^2 u + 4 k beta) has exactly one real root.
inline double horizontal_line_min_dist4(const HeisPoint& w, double ex, double ey, const HeisPoint& c) noexcept {
    const double gx = w.x - c.x;
    const double gy = w.y - c.y;
    const double gt = w.t - c.t + 0.5 * (c.y * w.x - c.x * w.y);
    const double alpha = gx * ex + gy * ey;
    const double kappa = gx * ey - gy * ex;
    const double beta = gt - 0.5 * kappa * alpha;
    const double p = 3.0 * kappa * kappa;
    const double q = 4.0 * kappa * beta;
    double u = 0.0;
    if (p == 0.0) {
        u = std::cbrt(-q);
    } else {
        const double disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);
        const double A = std::cbrt(0.5 * std::abs(q) + disc);
        u = (q > 0.0 ? -1.0 : 1.0) * (A - p / (3.0 * A));
    }
    const double h = u * u + kappa * kappa;
    const double v = 4.0 * beta + 2.0 * kappa * u;
    return h * h + v * v;
}

// Lebesgue volume of the unit Koranyi ball.
// In cylindrical coordinates the slice at |z| = rho has t-length sqrt(1 - rho^4) / 2, so
// V = 2 pi * int_0^1 rho sqrt(1 - rho^4) / 2 d rho = (pi / 2) int_0^1 sqrt(1 - u^2) du = pi^2 / 8.
inline constexpr double kUnitBallVolume = std::numbers::pi * std::numbers::pi / 8.0;

inline double koranyi_ball_volume(double r) {
    if (!(r > 0.0)) throw DomainError("koranyi_ball_volume: radius must be positive");
    return kUnitBallVolume * r * r * r * r;
}

}  // namespace heis
